import { describe, expect, it } from "vitest";

import { SessionState } from "../state.js";
import type {
  ConsensusResponse,
  CreateSessionResponse,
  DeleteResponse,
  EditResponse,
} from "../types.js";
import { FIXTURES } from "./replayFetch.js";

function freshState(): SessionState {
  const created = FIXTURES.employeeCreate.response as CreateSessionResponse;
  return new SessionState(structuredClone(created));
}

const consensusResp = () =>
  structuredClone(FIXTURES.employeeConsensus.response) as ConsensusResponse;
const editResp = () => structuredClone(FIXTURES.employeeEditUp.response) as EditResponse;

describe("SessionState", () => {
  it("starts with one column per ranking, bases first", () => {
    const state = freshState();
    expect(state.view.columnOrder).toEqual(["base:R1", "base:R2", "base:R3"]);
    expect(state.columns().map((c) => c.ranking.kind)).toEqual(["base", "base", "base"]);
    state.assertColumnInvariant();
  });

  it("appends a generated consensus column on the right", () => {
    const state = freshState();
    state.applyConsensusResponse(consensusResp());
    expect(state.view.columnOrder[state.view.columnOrder.length - 1]).toBe("gen:1");
    const col = state.columns()[3];
    expect(col.ranking.kind).toBe("consensus");
    expect(col.result?.feasible).toBe(false);
    expect(col.report.arp).toBe("0.650000");
  });

  it("column reorder is pure view state", () => {
    const state = freshState();
    const before = structuredClone(state.session);
    state.moveColumn("base:R3", "base:R1");
    expect(state.view.columnOrder).toEqual(["base:R3", "base:R1", "base:R2"]);
    expect(state.session).toEqual(before);
    state.assertColumnInvariant();
  });

  it("moveColumn to null appends at the right edge", () => {
    const state = freshState();
    state.moveColumn("base:R1", null);
    expect(state.view.columnOrder).toEqual(["base:R2", "base:R3", "base:R1"]);
  });

  it("edit responses rename the column in place", () => {
    const state = freshState();
    state.applyConsensusResponse(consensusResp());
    state.moveColumn("gen:1", "base:R2");
    state.applyEditResponse("gen:1", editResp());
    expect(state.view.columnOrder).toEqual([
      "base:R1",
      "gen:1:edited:1",
      "base:R2",
      "base:R3",
    ]);
    expect(state.reports.has("gen:1")).toBe(false);
    expect(state.reports.get("gen:1:edited:1")?.arp).toBe("1.000000");
    state.assertColumnInvariant();
  });

  it("no-op edit responses leave everything alone", () => {
    const state = freshState();
    state.applyConsensusResponse(consensusResp());
    state.applyEditResponse("gen:1", editResp());
    const before = structuredClone(state.view.columnOrder);
    const noop = structuredClone(FIXTURES.employeeEditNoop.response) as EditResponse;
    state.applyEditResponse("gen:1:edited:1", noop);
    expect(state.view.columnOrder).toEqual(before);
    expect(state.reports.has("gen:1:edited:1")).toBe(true);
  });

  it("an edit keeps a brush on the renamed column attached", () => {
    const state = freshState();
    state.applyConsensusResponse(consensusResp());
    state.setSelection({ kind: "brush", columnId: "gen:1", from: 2, to: 5 });
    state.applyEditResponse("gen:1", editResp());
    expect(state.view.selection).toEqual({
      kind: "brush",
      columnId: "gen:1:edited:1",
      from: 2,
      to: 5,
    });
  });

  it("delete responses drop the column but keep view order for the rest", () => {
    const state = freshState();
    state.applyConsensusResponse(consensusResp());
    state.moveColumn("gen:1", "base:R1");
    const created = FIXTURES.employeeCreate.response as CreateSessionResponse;
    const resp: DeleteResponse = {
      schema: 1,
      deleted: "gen:1",
      session: structuredClone(created.session),
    };
    state.applyDeleteResponse(resp);
    expect(state.view.columnOrder).toEqual(["base:R1", "base:R2", "base:R3"]);
    state.assertColumnInvariant();
  });

  it("detects a corrupted column order", () => {
    const state = freshState();
    state.view.columnOrder = ["base:R1", "base:R2", "base:R2"];
    expect(() => state.assertColumnInvariant()).toThrow(/permutation/);
  });

  it("mode and selection changes notify subscribers", () => {
    const state = freshState();
    let calls = 0;
    state.subscribe(() => {
      calls += 1;
    });
    state.setMode("compressed");
    state.setSelection({ kind: "group", label: "Human Resources" });
    state.setHover({ kind: "candidate", id: "e01" });
    expect(calls).toBe(3);
    expect(state.view.mode).toBe("compressed");
  });

  it("pin updates swap in the service's answer", () => {
    const state = freshState();
    state.applyPinnedIds(["base:R2"]);
    expect(state.columns()[1].pinned).toBe(true);
    expect(state.columns()[0].pinned).toBe(false);
  });
});
