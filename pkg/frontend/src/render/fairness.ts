import { groupColor, histogramShade, ratePercent } from "../scales.js";
import type { ReportDict } from "../types.js";

export interface FairnessHandlers {
  onSelectGroup(label: string): void;
  onHoverGroup(label: string | null): void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  return node;
}

/**
 * Per-column fairness panel: one dot per group on a [0, 1] pairwise-win
 * axis with a 0.5 reference line, a shaded band spanning the extreme group
 * rates, and a per-group position heatmap.  Every number shown is the
 * service's own string for that value.
 */
export function renderFairnessPanel(
  container: HTMLElement,
  report: ReportDict,
  selectedGroup: string | null,
  handlers: FairnessHandlers,
): void {
  container.textContent = "";
  container.classList.add("fairness");
  const labels = Object.keys(report.per_group).sort();
  if (labels.length < 2) {
    const note = el("div", "fairness-placeholder");
    note.textContent =
      "Only one group is present, so between-group rates are undefined for this ranking.";
    container.appendChild(note);
    return;
  }

  const axis = el("div", "fairness-axis");

  const rates = labels.map((g) => parseFloat(report.per_group[g].fpr));
  const lo = Math.min(...rates);
  const hi = Math.max(...rates);
  const band = el("div", "fairness-band");
  band.style.left = ratePercent(lo);
  band.style.width = `${((hi - lo) * 100).toFixed(2)}%`;
  band.title = `gap between extreme groups: ${report.arp}`;
  axis.appendChild(band);

  const ref = el("div", "fairness-ref");
  ref.style.left = ratePercent(0.5);
  ref.title = "0.5: mixed pairs split evenly";
  axis.appendChild(ref);

  const readout = el("div", "fairness-readout");
  readout.textContent = " ";

  for (const label of labels) {
    const entry = report.per_group[label];
    const dot = el("button", "fairness-dot");
    dot.type = "button";
    dot.style.left = ratePercent(parseFloat(entry.fpr));
    dot.style.background = groupColor(labels, label);
    dot.dataset.group = label;
    dot.dataset.metric = "fpr";
    dot.dataset.value = entry.fpr;
    dot.title = `${label}: ${entry.fpr} (${entry.wins}/${entry.mixed_pair_count} mixed pairs won)`;
    if (label === selectedGroup) dot.classList.add("selected");
    dot.addEventListener("click", () => handlers.onSelectGroup(label));
    dot.addEventListener("mouseenter", () => {
      readout.textContent = `${label} rate ${entry.fpr}`;
      handlers.onHoverGroup(label);
    });
    dot.addEventListener("mouseleave", () => {
      readout.textContent = " ";
      handlers.onHoverGroup(null);
    });
    axis.appendChild(dot);
  }
  container.appendChild(axis);

  const arpLine = el("div", "fairness-arp");
  const arpValue = el("span");
  arpValue.dataset.metric = "arp";
  arpValue.dataset.value = report.arp;
  arpValue.textContent = report.arp;
  arpLine.append("ARP ", arpValue);
  const extremes = el("span", "fairness-extremes");
  extremes.textContent = ` (${report.extreme_groups[0]} vs ${report.extreme_groups[1]})`;
  arpLine.appendChild(extremes);
  container.appendChild(arpLine);
  container.appendChild(readout);

  const heat = el("div", "fairness-heat");
  for (const label of labels) {
    const entry = report.per_group[label];
    const row = el("div", "heat-row");
    row.dataset.group = label;
    const tag = el("span", "heat-label");
    tag.textContent = label;
    tag.style.color = groupColor(labels, label);
    row.appendChild(tag);
    const rowMax = Math.max(...entry.histogram);
    entry.histogram.forEach((count, i) => {
      const cell = el("span", "heat-cell");
      cell.style.background = histogramShade(count, rowMax);
      cell.title = `${label}, position bin ${i + 1}: ${count}`;
      row.appendChild(cell);
    });
    heat.appendChild(row);
  }
  container.appendChild(heat);
}
