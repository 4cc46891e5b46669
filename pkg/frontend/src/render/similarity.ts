import { similarityShade } from "../scales.js";
import type { MatrixDict } from "../types.js";

function shortId(id: string): string {
  return id.length > 14 ? `${id.slice(0, 13)}…` : id;
}

/**
 * Lower-triangle grid of pairwise ranking similarity.  Cell darkness tracks
 * the value; the exact service string is shown on hover and kept on the
 * cell itself.
 */
export function renderSimilarityMatrix(container: HTMLElement, matrix: MatrixDict): void {
  container.textContent = "";
  container.classList.add("similarity");
  const heading = document.createElement("h2");
  heading.textContent = "Ranking similarity";
  container.appendChild(heading);

  const ids = matrix.ranking_ids;
  if (ids.length < 2) {
    const note = document.createElement("div");
    note.className = "similarity-placeholder";
    note.textContent = "Add a second ranking to compare.";
    container.appendChild(note);
    return;
  }

  const readout = document.createElement("div");
  readout.className = "similarity-readout";
  readout.textContent = " ";

  const grid = document.createElement("div");
  grid.className = "similarity-grid";
  for (let i = 1; i < ids.length; i += 1) {
    const row = document.createElement("div");
    row.className = "similarity-row";
    const label = document.createElement("span");
    label.className = "similarity-label";
    label.textContent = shortId(ids[i]);
    label.title = ids[i];
    row.appendChild(label);
    for (let j = 0; j < i; j += 1) {
      const value = matrix.similarity[i][j];
      const cell = document.createElement("span");
      cell.className = "similarity-cell";
      cell.style.background = similarityShade(parseFloat(value));
      cell.dataset.metric = "similarity";
      cell.dataset.value = value;
      cell.dataset.kt = String(matrix.kt[i][j]);
      cell.title = `${ids[i]} vs ${ids[j]}: ${value} (${matrix.kt[i][j]} discordant pairs)`;
      cell.addEventListener("mouseenter", () => {
        readout.textContent = `${ids[i]} vs ${ids[j]}: ${value}`;
      });
      cell.addEventListener("mouseleave", () => {
        readout.textContent = " ";
      });
      row.appendChild(cell);
    }
    grid.appendChild(row);
  }
  container.appendChild(grid);

  const axis = document.createElement("div");
  axis.className = "similarity-axis";
  const pad = document.createElement("span");
  pad.className = "similarity-label";
  axis.appendChild(pad);
  for (let j = 0; j + 1 < ids.length; j += 1) {
    const tick = document.createElement("span");
    tick.className = "similarity-tick";
    tick.textContent = shortId(ids[j]);
    tick.title = ids[j];
    axis.appendChild(tick);
  }
  container.appendChild(axis);
  container.appendChild(readout);
}
