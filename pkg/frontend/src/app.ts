import { ApiClient, ApiError } from "./api.js";
import { renderBoard, type BoardHandlers } from "./render/columns.js";
import { renderFairnessPanel } from "./render/fairness.js";
import { renderSimilarityMatrix } from "./render/similarity.js";
import { renderSlider } from "./render/slider.js";
import { SessionState } from "./state.js";
import type { CreateSessionResponse } from "./types.js";

// values land inside quoted attribute selectors, so only the quote and the
// backslash need escaping
function cssAttr(value: string): string {
  return value.replace(/["\\]/g, "\\$&");
}

interface CardDrag {
  kind: "card";
  columnId: string;
  candidateId: string;
}

interface ColumnDrag {
  kind: "column";
  columnId: string;
}

interface BrushAnchor {
  columnId: string;
  from: number;
  to: number;
}

/**
 * The session workbench: ranking columns with connecting lines, a fairness
 * panel per column, the threshold slider, and the similarity matrix.  All
 * mutations go through the HTTP API one at a time and the views re-render
 * from the response payloads.
 */
export class Workbench {
  readonly state: SessionState;
  private readonly api: ApiClient;
  private readonly root: HTMLElement;
  private board!: HTMLElement;
  private sliderEl!: HTMLElement;
  private similarityEl!: HTMLElement;
  private statusEl!: HTMLElement;
  private pending = false;
  private drag: CardDrag | ColumnDrag | null = null;
  private brush: BrushAnchor | null = null;
  private sliderValue: number;
  private sliderError: string | null = null;

  constructor(root: HTMLElement, api: ApiClient, created: CreateSessionResponse) {
    this.root = root;
    this.api = api;
    this.state = new SessionState(created);
    this.sliderValue = Math.min(1, Math.max(0, created.session.t_effective_min));
    this.scaffold();
    document.addEventListener("mouseup", () => {
      this.brush = null;
    });
    this.render();
  }

  private scaffold(): void {
    this.root.textContent = "";
    this.root.classList.add("workbench");

    const bar = document.createElement("div");
    bar.className = "toolbar";
    const sessionTag = document.createElement("span");
    sessionTag.className = "session-tag";
    sessionTag.textContent = `session ${this.state.view.sessionId}`;
    bar.appendChild(sessionTag);

    const modeBtn = document.createElement("button");
    modeBtn.type = "button";
    modeBtn.className = "btn-mode";
    modeBtn.addEventListener("click", () => {
      this.state.setMode(this.state.view.mode === "full" ? "compressed" : "full");
    });
    bar.appendChild(modeBtn);

    const clearBtn = document.createElement("button");
    clearBtn.type = "button";
    clearBtn.className = "btn-clear";
    clearBtn.textContent = "clear selection";
    clearBtn.addEventListener("click", () => this.state.setSelection({ kind: "none" }));
    bar.appendChild(clearBtn);

    const refreshBtn = document.createElement("button");
    refreshBtn.type = "button";
    refreshBtn.className = "btn-refresh";
    refreshBtn.textContent = "refresh";
    refreshBtn.addEventListener("click", () => void this.refresh());
    bar.appendChild(refreshBtn);

    this.statusEl = document.createElement("span");
    this.statusEl.className = "status";
    bar.appendChild(this.statusEl);
    this.root.appendChild(bar);

    this.sliderEl = document.createElement("div");
    this.root.appendChild(this.sliderEl);

    this.board = document.createElement("div");
    this.board.className = "board";
    this.root.appendChild(this.board);

    this.similarityEl = document.createElement("div");
    this.root.appendChild(this.similarityEl);

    this.state.subscribe(() => this.render());
  }

  render(): void {
    const view = this.state.view;
    const modeBtn = this.root.querySelector<HTMLButtonElement>(".btn-mode");
    if (modeBtn) modeBtn.textContent = view.mode === "full" ? "compress cards" : "expand cards";

    const handlers = this.boardHandlers();
    renderBoard(
      this.board,
      this.state.columns(),
      this.state.session.dataset,
      {
        mode: view.mode,
        selection: view.selection,
        hoverCandidate: view.hover.kind === "candidate" ? view.hover.id : null,
        pending: this.pending,
      },
      handlers,
    );
    const selectedGroup =
      view.selection.kind === "group" ? view.selection.label : null;
    for (const column of this.state.columns()) {
      const slot = this.board.querySelector<HTMLElement>(
        `.fairness-slot[data-ranking="${cssAttr(column.ranking.id)}"]`,
      );
      if (slot) {
        renderFairnessPanel(slot, column.report, selectedGroup, {
          onSelectGroup: (label) => this.toggleGroupSelection(label),
          onHoverGroup: (label) =>
            this.state.view.hover = label === null ? { kind: "none" } : { kind: "group", label },
        });
      }
    }
    renderSlider(this.sliderEl, {
      value: this.sliderValue,
      tEffectiveMin: this.state.session.t_effective_min,
      pending: this.pending,
      error: this.sliderError,
      onGenerate: (t) => void this.generate(t),
    });
    renderSimilarityMatrix(this.similarityEl, this.state.similarity);
  }

  private boardHandlers(): BoardHandlers {
    return {
      onSelectCandidate: (id) => {
        const sel = this.state.view.selection;
        if (sel.kind === "candidate" && sel.id === id) {
          this.state.setSelection({ kind: "none" });
        } else {
          this.state.setSelection({ kind: "candidate", id });
        }
      },
      onBrushStart: (columnId, position, shiftKey) => {
        if (!shiftKey) return;
        this.brush = { columnId, from: position, to: position };
        this.state.setSelection({ kind: "brush", columnId, from: position, to: position });
      },
      onBrushExtend: (columnId, position) => {
        if (!this.brush || this.brush.columnId !== columnId) return;
        this.brush.to = position;
        this.state.setSelection({
          kind: "brush",
          columnId,
          from: Math.min(this.brush.from, this.brush.to),
          to: Math.max(this.brush.from, this.brush.to),
        });
      },
      onHoverCandidate: (id) => {
        // hover marks are applied in place; re-rendering here would destroy
        // the node under the cursor mid-gesture
        this.state.view.hover = id === null ? { kind: "none" } : { kind: "candidate", id };
        for (const marked of this.board.querySelectorAll(".card.hovered")) {
          marked.classList.remove("hovered");
        }
        if (id !== null) {
          const sel = `.card[data-candidate="${cssAttr(id)}"]`;
          for (const card of this.board.querySelectorAll(sel)) card.classList.add("hovered");
        }
      },
      onPinToggle: (columnId, pinned) => void this.togglePin(columnId, pinned),
      onDelete: (columnId) => void this.remove(columnId),
      onCardDragStart: (columnId, candidateId) => {
        if (this.pending || this.brush !== null) return false;
        this.drag = { kind: "card", columnId, candidateId };
        return true;
      },
      onCardDrop: (columnId, position) => {
        const drag = this.drag;
        this.drag = null;
        if (!drag || drag.kind !== "card") return;
        if (drag.columnId !== columnId) {
          this.flashRejection(columnId, "drops must stay inside one column");
          return;
        }
        void this.commitDrag(columnId, drag.candidateId, position);
      },
      onColumnDragStart: (columnId) => {
        this.drag = { kind: "column", columnId };
      },
      onColumnDrop: (beforeId) => {
        const drag = this.drag;
        this.drag = null;
        if (!drag || drag.kind !== "column") return;
        if (drag.columnId === beforeId) return;
        this.state.moveColumn(drag.columnId, beforeId);
      },
    };
  }

  private toggleGroupSelection(label: string): void {
    const sel = this.state.view.selection;
    if (sel.kind === "group" && sel.label === label) {
      this.state.setSelection({ kind: "none" });
    } else {
      this.state.setSelection({ kind: "group", label });
    }
  }

  private setStatus(message: string, isError = false): void {
    this.statusEl.textContent = message;
    this.statusEl.classList.toggle("error", isError);
  }

  flashRejection(columnId: string, why: string): void {
    const col = this.board.querySelector<HTMLElement>(
      `.column[data-ranking="${cssAttr(columnId)}"]`,
    );
    if (col) {
      col.classList.add("rejected");
      setTimeout(() => col.classList.remove("rejected"), 900);
    }
    this.setStatus(why, true);
  }

  /** One mutation in flight at a time; everything else queues behind render. */
  private async mutate<T>(run: () => Promise<T>, apply: (resp: T) => void): Promise<boolean> {
    if (this.pending) {
      this.setStatus("another change is still in flight", true);
      return false;
    }
    this.pending = true;
    this.render();
    try {
      const resp = await run();
      apply(resp);
      return true;
    } catch (err) {
      this.setStatus(err instanceof Error ? err.message : String(err), true);
      return false;
    } finally {
      this.pending = false;
      this.render();
    }
  }

  async generate(t: number): Promise<void> {
    this.sliderValue = t;
    this.sliderError = null;
    const ok = await this.mutate(
      () => this.api.generateConsensus(this.state.view.sessionId, t),
      (resp) => {
        this.state.applyConsensusResponse(resp);
        const result = resp.result;
        this.setStatus(
          result.feasible
            ? `added ${result.ranking.id} at t=${t}`
            : `added ${result.ranking.id} at t=${t}; constraint unmet`,
        );
      },
    );
    if (!ok) {
      // surfacing the failure on the slider control itself
      this.sliderError = this.statusEl.textContent;
      this.render();
    }
  }

  async commitDrag(columnId: string, candidateId: string, position: number): Promise<void> {
    const ranking = this.state.findRanking(columnId);
    if (!ranking) return;
    if (ranking.kind === "base") {
      this.flashRejection(columnId, "base rankings are immutable; generate a consensus first");
      return;
    }
    if (this.pending) {
      this.setStatus("another change is still in flight", true);
      return;
    }
    this.pending = true;
    this.render();
    // the optimistic move must come after the pending re-render or it
    // would be wiped before the response lands
    this.reorderOptimistically(columnId, candidateId, position);
    let failure: string | null = null;
    try {
      const resp = await this.api.editRanking(
        this.state.view.sessionId,
        columnId,
        candidateId,
        position,
      );
      this.state.applyEditResponse(columnId, resp);
      this.setStatus(
        resp.changed
          ? `moved ${candidateId} to position ${position} in ${resp.ranking.id}`
          : "drop confirmed as a no-op; nothing changed",
      );
    } catch (err) {
      failure = err instanceof Error ? err.message : String(err);
    } finally {
      this.pending = false;
      this.render();
    }
    if (failure !== null) this.flashRejection(columnId, failure);
  }

  // Move the card element immediately so the drop feels instant; the
  // authoritative order arrives with the edit response.
  private reorderOptimistically(columnId: string, candidateId: string, position: number): void {
    const list = this.board.querySelector<HTMLElement>(
      `.cards[data-column="${cssAttr(columnId)}"]`,
    );
    if (!list) return;
    const card = list.querySelector<HTMLElement>(
      `.card[data-candidate="${cssAttr(candidateId)}"]`,
    );
    if (!card) return;
    const rest = [...list.children].filter((c) => c !== card);
    const before = rest[position - 1] ?? null;
    list.insertBefore(card, before);
  }

  async togglePin(columnId: string, pinned: boolean): Promise<void> {
    await this.mutate(
      () =>
        pinned
          ? this.api.unpinRanking(this.state.view.sessionId, columnId)
          : this.api.pinRanking(this.state.view.sessionId, columnId),
      (resp) => {
        this.state.applyPinnedIds(resp.pinned_ids);
        this.setStatus(pinned ? `unpinned ${columnId}` : `pinned ${columnId}`);
      },
    );
  }

  async remove(columnId: string): Promise<void> {
    await this.mutate(
      () => this.api.deleteRanking(this.state.view.sessionId, columnId),
      (resp) => {
        this.state.applyDeleteResponse(resp);
        this.setStatus(`deleted ${resp.deleted}`);
      },
    );
  }

  /** Re-pull session and similarity from the service. */
  async refresh(): Promise<void> {
    try {
      const [session, similarity] = await Promise.all([
        this.api.getSession(this.state.view.sessionId),
        this.api.getSimilarity(this.state.view.sessionId),
      ]);
      this.state.applySessionResponse(session);
      this.state.applySimilarity(similarity.similarity);
      this.setStatus("refreshed");
    } catch (err) {
      this.setStatus(err instanceof ApiError ? err.message : String(err), true);
    }
  }
}
