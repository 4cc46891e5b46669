import {
  CARD_GAP,
  CARD_H,
  CARD_H_COMPRESSED,
  COL_GAP,
  COL_WIDTH,
  HEADER_H,
  groupColor,
  lineVisible,
  rankDeltaColor,
  rowCenterY,
  rowHeight,
} from "../scales.js";
import type { ColumnModel, Selection, ViewMode } from "../state.js";
import type { CandidateDict, DatasetDict } from "../types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export interface BoardHandlers {
  onSelectCandidate(id: string): void;
  onBrushStart(columnId: string, position: number, shiftKey: boolean): void;
  onBrushExtend(columnId: string, position: number): void;
  onHoverCandidate(id: string | null): void;
  onPinToggle(columnId: string, pinned: boolean): void;
  onDelete(columnId: string): void;
  /** Return false to veto the drag (while brushing or a call is in flight). */
  onCardDragStart(columnId: string, candidateId: string): boolean;
  onCardDrop(columnId: string, position: number): void;
  onColumnDragStart(columnId: string): void;
  onColumnDrop(beforeId: string | null): void;
}

export interface BoardOptions {
  mode: ViewMode;
  selection: Selection;
  hoverCandidate: string | null;
  pending: boolean;
}

interface AttrRange {
  min: number;
  max: number;
}

function numericRanges(dataset: DatasetDict): Map<string, AttrRange> {
  const ranges = new Map<string, AttrRange>();
  for (const cand of dataset.candidates) {
    for (const [key, value] of Object.entries(cand.attributes)) {
      if (typeof value !== "number") continue;
      const cur = ranges.get(key);
      if (!cur) ranges.set(key, { min: value, max: value });
      else {
        cur.min = Math.min(cur.min, value);
        cur.max = Math.max(cur.max, value);
      }
    }
  }
  return ranges;
}

function candidateById(dataset: DatasetDict): Map<string, CandidateDict> {
  return new Map(dataset.candidates.map((c) => [c.id, c]));
}

function glyphRow(
  cand: CandidateDict,
  dataset: DatasetDict,
  groups: string[],
  ranges: Map<string, AttrRange>,
): HTMLElement {
  const row = document.createElement("div");
  row.className = "glyphs";
  // protected-attribute glyph: bigger and always saturated
  const prot = document.createElement("span");
  prot.className = "glyph glyph-protected";
  prot.style.background = groupColor(groups, cand.protected_value);
  prot.title = `${dataset.protected_attribute}: ${cand.protected_value}`;
  row.appendChild(prot);
  for (const [key, value] of Object.entries(cand.attributes).sort()) {
    if (key === dataset.protected_attribute) continue;
    const glyph = document.createElement("span");
    glyph.className = "glyph glyph-attr";
    if (typeof value === "number") {
      const range = ranges.get(key);
      const span = range && range.max > range.min ? range.max - range.min : 1;
      const frac = range ? (value - range.min) / span : 0.5;
      glyph.style.height = `${(4 + 8 * frac).toFixed(1)}px`;
    }
    glyph.title = `${key}: ${value}`;
    row.appendChild(glyph);
  }
  return row;
}

function isHighlighted(cand: CandidateDict, columnId: string, position: number, sel: Selection): boolean {
  switch (sel.kind) {
    case "candidate":
      return sel.id === cand.id;
    case "group":
      return sel.label === cand.protected_value;
    case "brush":
      return sel.columnId === columnId && position >= sel.from && position <= sel.to;
    default:
      return false;
  }
}

function buildHeader(
  column: ColumnModel,
  handlers: BoardHandlers,
  pending: boolean,
): HTMLElement {
  const header = document.createElement("div");
  header.className = "col-header";
  header.draggable = true;
  header.addEventListener("dragstart", () => handlers.onColumnDragStart(column.ranking.id));

  const title = document.createElement("div");
  title.className = "col-title";
  title.textContent = column.ranking.label;
  header.appendChild(title);

  const meta = document.createElement("div");
  meta.className = "col-meta";
  const kind = document.createElement("span");
  kind.className = `chip chip-${column.ranking.kind}`;
  kind.textContent = column.ranking.kind;
  meta.appendChild(kind);
  if (column.result) {
    const cost = document.createElement("span");
    cost.className = "chip chip-cost";
    const costValue = document.createElement("span");
    costValue.dataset.metric = "kt";
    costValue.dataset.value = String(column.result.total_kt_cost);
    costValue.textContent = String(column.result.total_kt_cost);
    cost.append("cost ", costValue);
    cost.title = "sum of pair disagreements against all base rankings";
    meta.appendChild(cost);
  }
  header.appendChild(meta);

  if (column.result && !column.result.feasible) {
    const badge = document.createElement("div");
    badge.className = "badge-infeasible";
    const achieved = document.createElement("span");
    achieved.dataset.metric = "arp";
    achieved.dataset.value = column.result.achieved_arp ?? "";
    achieved.textContent = column.result.achieved_arp ?? "?";
    badge.append("constraint unmet, achieved ARP = ", achieved);
    header.appendChild(badge);
  }

  const actions = document.createElement("div");
  actions.className = "col-actions";
  const pin = document.createElement("button");
  pin.type = "button";
  pin.className = "btn-pin";
  pin.textContent = column.pinned ? "unpin" : "pin";
  pin.disabled = pending;
  pin.addEventListener("click", () => handlers.onPinToggle(column.ranking.id, column.pinned));
  actions.appendChild(pin);
  if (column.ranking.kind !== "base") {
    const del = document.createElement("button");
    del.type = "button";
    del.className = "btn-delete";
    del.textContent = "delete";
    del.disabled = pending;
    del.addEventListener("click", () => handlers.onDelete(column.ranking.id));
    actions.appendChild(del);
  }
  header.appendChild(actions);
  return header;
}

function buildCards(
  column: ColumnModel,
  dataset: DatasetDict,
  groups: string[],
  ranges: Map<string, AttrRange>,
  byId: Map<string, CandidateDict>,
  opts: BoardOptions,
  handlers: BoardHandlers,
): HTMLElement {
  const list = document.createElement("div");
  list.className = "cards";
  list.dataset.column = column.ranking.id;
  const dimOthers =
    opts.selection.kind === "brush" && opts.selection.columnId !== column.ranking.id;

  column.ranking.order.forEach((cid, index) => {
    const cand = byId.get(cid);
    if (!cand) throw new Error(`unknown candidate ${cid} in ${column.ranking.id}`);
    const position = index + 1;
    const card = document.createElement("div");
    card.className = "card";
    card.draggable = true;
    card.dataset.candidate = cid;
    card.dataset.position = String(position);
    if (isHighlighted(cand, column.ranking.id, position, opts.selection)) {
      card.classList.add("highlight");
    } else if (opts.selection.kind === "brush" && !dimOthers) {
      card.classList.add("dim");
    }
    if (dimOthers) card.classList.add("dim");
    if (opts.hoverCandidate === cid) card.classList.add("hovered");

    const rank = document.createElement("span");
    rank.className = "card-rank";
    rank.textContent = String(position);
    card.appendChild(rank);

    const body = document.createElement("div");
    body.className = "card-body";
    const name = document.createElement("div");
    name.className = "card-name";
    name.textContent = cand.name;
    body.appendChild(name);
    body.appendChild(glyphRow(cand, dataset, groups, ranges));
    card.appendChild(body);

    card.addEventListener("click", () => handlers.onSelectCandidate(cid));
    card.addEventListener("mousedown", (ev) => {
      handlers.onBrushStart(column.ranking.id, position, ev.shiftKey);
    });
    card.addEventListener("mouseenter", () => {
      handlers.onHoverCandidate(cid);
      handlers.onBrushExtend(column.ranking.id, position);
    });
    card.addEventListener("mouseleave", () => handlers.onHoverCandidate(null));
    card.addEventListener("dragstart", (ev) => {
      if (!handlers.onCardDragStart(column.ranking.id, cid)) {
        ev.preventDefault();
        return;
      }
      if (ev.dataTransfer) ev.dataTransfer.effectAllowed = "move";
    });
    card.addEventListener("dragover", (ev) => ev.preventDefault());
    card.addEventListener("drop", (ev) => {
      ev.preventDefault();
      ev.stopPropagation();
      handlers.onCardDrop(column.ranking.id, position);
    });
    list.appendChild(card);
  });
  // dropping past the last card moves the candidate to the bottom
  list.addEventListener("dragover", (ev) => ev.preventDefault());
  list.addEventListener("drop", (ev) => {
    ev.preventDefault();
    ev.stopPropagation();
    handlers.onCardDrop(column.ranking.id, column.ranking.order.length);
  });
  return list;
}

function drawLines(
  svg: SVGSVGElement,
  columns: ColumnModel[],
  mode: ViewMode,
  scrollTop: number,
  viewHeight: number,
): void {
  svg.textContent = "";
  const n = columns.length > 0 ? columns[0].ranking.order.length : 0;
  for (let c = 0; c + 1 < columns.length; c += 1) {
    const left = columns[c].ranking;
    const right = columns[c + 1].ranking;
    const rightIndex = new Map(right.order.map((cid, i) => [cid, i]));
    const x1 = c * (COL_WIDTH + COL_GAP) + COL_WIDTH;
    const x2 = (c + 1) * (COL_WIDTH + COL_GAP);
    left.order.forEach((cid, i) => {
      const j = rightIndex.get(cid);
      if (j === undefined) return;
      const y1 = rowCenterY(i, mode);
      const y2 = rowCenterY(j, mode);
      if (!lineVisible(y1, y2, scrollTop, viewHeight)) return;
      const line = document.createElementNS(SVG_NS, "line");
      line.setAttribute("x1", String(x1));
      line.setAttribute("y1", String(y1));
      line.setAttribute("x2", String(x2));
      line.setAttribute("y2", String(y2));
      // positive delta = moved toward the top of the ranking
      line.setAttribute("stroke", rankDeltaColor(i - j, n));
      line.setAttribute("stroke-width", i === j ? "1" : "1.6");
      line.dataset.candidate = cid;
      svg.appendChild(line);
    });
  }
}

/**
 * Side-by-side ranking columns with connecting lines between adjacent
 * columns.  Geometry is arithmetic over fixed row heights, so the line
 * layer and the card layer cannot drift apart.
 */
export function renderBoard(
  root: HTMLElement,
  columns: ColumnModel[],
  dataset: DatasetDict,
  opts: BoardOptions,
  handlers: BoardHandlers,
): void {
  root.textContent = "";
  root.classList.toggle("compressed", opts.mode === "compressed");
  root.classList.toggle("pending", opts.pending);
  root.style.setProperty("--card-h", `${opts.mode === "full" ? CARD_H : CARD_H_COMPRESSED}px`);
  root.style.setProperty("--card-gap", `${CARD_GAP}px`);
  root.style.setProperty("--col-w", `${COL_WIDTH}px`);
  root.style.setProperty("--col-gap", `${COL_GAP}px`);
  root.style.setProperty("--header-h", `${HEADER_H}px`);

  const groups = Object.keys(dataset.groups).sort();
  const ranges = numericRanges(dataset);
  const byId = candidateById(dataset);
  const n = columns.length > 0 ? columns[0].ranking.order.length : 0;

  const svg = document.createElementNS(SVG_NS, "svg");
  svg.classList.add("lines");
  const width = Math.max(0, columns.length * (COL_WIDTH + COL_GAP) - COL_GAP);
  const height = HEADER_H + n * rowHeight(opts.mode);
  svg.setAttribute("width", String(width));
  svg.setAttribute("height", String(height));
  root.appendChild(svg);

  const strip = document.createElement("div");
  strip.className = "columns";
  for (const column of columns) {
    const colEl = document.createElement("div");
    colEl.className = `column kind-${column.ranking.kind}`;
    colEl.dataset.ranking = column.ranking.id;
    if (column.pinned) colEl.classList.add("pinned");
    colEl.addEventListener("dragover", (ev) => ev.preventDefault());
    colEl.addEventListener("drop", (ev) => {
      // header drops reorder columns; card drops are handled deeper down
      ev.preventDefault();
      handlers.onColumnDrop(column.ranking.id);
    });
    colEl.appendChild(buildHeader(column, handlers, opts.pending));
    colEl.appendChild(buildCards(column, dataset, groups, ranges, byId, opts, handlers));
    const fairness = document.createElement("div");
    fairness.className = "fairness-slot";
    fairness.dataset.ranking = column.ranking.id;
    colEl.appendChild(fairness);
    strip.appendChild(colEl);
  }
  root.appendChild(strip);

  const redraw = () => drawLines(svg, columns, opts.mode, root.scrollTop, root.clientHeight || height);
  root.onscroll = redraw;
  redraw();
}
