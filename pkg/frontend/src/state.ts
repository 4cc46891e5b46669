import type {
  ConsensusDict,
  ConsensusResponse,
  CreateSessionResponse,
  DeleteResponse,
  EditResponse,
  MatrixDict,
  RankingDict,
  ReportDict,
  SessionDict,
  SessionResponse,
} from "./types.js";

export type ViewMode = "full" | "compressed";

export type Selection =
  | { kind: "none" }
  | { kind: "candidate"; id: string }
  | { kind: "group"; label: string }
  | { kind: "brush"; columnId: string; from: number; to: number };

export type Hover =
  | { kind: "none" }
  | { kind: "candidate"; id: string }
  | { kind: "group"; label: string };

export interface ViewState {
  sessionId: string;
  columnOrder: string[];
  mode: ViewMode;
  selection: Selection;
  hover: Hover;
}

export interface ColumnModel {
  ranking: RankingDict;
  report: ReportDict;
  // null for base rankings, set for generated/edited columns
  result: ConsensusDict | null;
  pinned: boolean;
}

/**
 * Client-side mirror of one session.  Everything that carries a metric
 * (reports, similarity) is stored exactly as the service sent it; the
 * store only reshapes payloads, it never derives new metric values.
 */
export class SessionState {
  session: SessionDict;
  reports: Map<string, ReportDict>;
  similarity: MatrixDict;
  view: ViewState;
  private listeners: Array<() => void> = [];

  constructor(created: CreateSessionResponse) {
    this.session = created.session;
    this.reports = new Map(Object.entries(created.audits));
    this.similarity = created.similarity;
    this.view = {
      sessionId: created.session_id,
      columnOrder: this.rankingIds(),
      mode: "full",
      selection: { kind: "none" },
      hover: { kind: "none" },
    };
  }

  subscribe(listener: () => void): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const fn of this.listeners) fn();
  }

  rankingIds(): string[] {
    return [
      ...this.session.base_rankings.map((r) => r.id),
      ...this.session.generated.map((g) => g.ranking.id),
    ];
  }

  findRanking(id: string): RankingDict | null {
    for (const r of this.session.base_rankings) if (r.id === id) return r;
    for (const g of this.session.generated) if (g.ranking.id === id) return g.ranking;
    return null;
  }

  findResult(id: string): ConsensusDict | null {
    for (const g of this.session.generated) if (g.ranking.id === id) return g;
    return null;
  }

  columns(): ColumnModel[] {
    this.assertColumnInvariant();
    return this.view.columnOrder.map((id) => {
      const ranking = this.findRanking(id);
      const report = this.reports.get(id);
      if (!ranking || !report) throw new Error(`no ranking/report for column ${id}`);
      return {
        ranking,
        report,
        result: this.findResult(id),
        pinned: this.session.pinned_ids.includes(id),
      };
    });
  }

  assertColumnInvariant(): void {
    const have = [...this.view.columnOrder].sort();
    const want = this.rankingIds().sort();
    if (have.length !== want.length || have.some((id, i) => id !== want[i])) {
      throw new Error(
        `column order ${JSON.stringify(this.view.columnOrder)} is not a ` +
          `permutation of ranking ids ${JSON.stringify(want)}`,
      );
    }
  }

  setMode(mode: ViewMode): void {
    this.view.mode = mode;
    this.emit();
  }

  setSelection(selection: Selection): void {
    this.view.selection = selection;
    this.emit();
  }

  setHover(hover: Hover): void {
    this.view.hover = hover;
    this.emit();
  }

  /** Reorder columns in the view only; the session itself is untouched. */
  moveColumn(id: string, beforeId: string | null): void {
    const order = this.view.columnOrder.filter((c) => c !== id);
    if (order.length === this.view.columnOrder.length) return;
    const at = beforeId === null ? order.length : order.indexOf(beforeId);
    order.splice(at < 0 ? order.length : at, 0, id);
    this.view.columnOrder = order;
    this.assertColumnInvariant();
    this.emit();
  }

  applySessionResponse(resp: SessionResponse): void {
    this.session = resp.session;
    this.reports = new Map(Object.entries(resp.session.audit_cache));
    this.reconcileColumnOrder();
    this.emit();
  }

  applySimilarity(matrix: MatrixDict): void {
    this.similarity = matrix;
    this.emit();
  }

  /** New consensus column appended at the right. */
  applyConsensusResponse(resp: ConsensusResponse): void {
    this.session.generated.push(resp.result);
    this.session.gen_counter += 1;
    this.reports.set(resp.result.ranking.id, resp.report);
    this.similarity = resp.similarity;
    this.session.t_effective_min = resp.slider.t_effective_min;
    this.view.columnOrder.push(resp.result.ranking.id);
    this.assertColumnInvariant();
    this.emit();
  }

  /** Replace the edited ranking in place, keeping its column position. */
  applyEditResponse(previousId: string, resp: EditResponse): void {
    if (!resp.changed) {
      this.emit();
      return;
    }
    const idx = this.session.generated.findIndex((g) => g.ranking.id === previousId);
    if (idx < 0) throw new Error(`edited ranking ${previousId} not in session`);
    this.session.generated[idx] = resp.result;
    this.reports.delete(previousId);
    this.reports.set(resp.ranking.id, resp.report);
    this.similarity = resp.similarity;
    const pin = this.session.pinned_ids.indexOf(previousId);
    if (pin >= 0) this.session.pinned_ids[pin] = resp.ranking.id;
    this.view.columnOrder = this.view.columnOrder.map((c) =>
      c === previousId ? resp.ranking.id : c,
    );
    if (
      this.view.selection.kind === "brush" &&
      this.view.selection.columnId === previousId
    ) {
      this.view.selection = { ...this.view.selection, columnId: resp.ranking.id };
    }
    this.assertColumnInvariant();
    this.emit();
  }

  applyPinnedIds(pinnedIds: string[]): void {
    this.session.pinned_ids = pinnedIds;
    this.emit();
  }

  applyDeleteResponse(resp: DeleteResponse): void {
    this.session = resp.session;
    this.reports = new Map(Object.entries(resp.session.audit_cache));
    this.reconcileColumnOrder();
    this.emit();
  }

  // Keep surviving columns in their current positions, append anything new.
  private reconcileColumnOrder(): void {
    const ids = new Set(this.rankingIds());
    const kept = this.view.columnOrder.filter((id) => ids.has(id));
    const seen = new Set(kept);
    for (const id of this.rankingIds()) if (!seen.has(id)) kept.push(id);
    this.view.columnOrder = kept;
    this.assertColumnInvariant();
  }
}
