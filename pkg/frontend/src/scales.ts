// Pure mapping helpers for the workbench views.  These translate values the
// service already computed into colors and coordinates; no fairness or
// distance math happens here.

export const CARD_H = 44;
export const CARD_H_COMPRESSED = 14;
export const CARD_GAP = 6;
export const HEADER_H = 96;
export const COL_WIDTH = 230;
export const COL_GAP = 56;

export function rowHeight(mode: "full" | "compressed"): number {
  return (mode === "full" ? CARD_H : CARD_H_COMPRESSED) + CARD_GAP;
}

/** Vertical center of the card at 0-based rank index. */
export function rowCenterY(index: number, mode: "full" | "compressed"): number {
  const h = mode === "full" ? CARD_H : CARD_H_COMPRESSED;
  return HEADER_H + index * rowHeight(mode) + h / 2;
}

/**
 * Stroke color for a connecting line, from the candidate's rank change
 * between adjacent columns.  Rising ranks shade blue, falling ranks shade
 * red, unchanged is neutral; the gradient saturates at a quarter of the
 * ranking length so one big mover cannot flatten the rest of the scale.
 */
export function rankDeltaColor(delta: number, n: number): string {
  if (delta === 0) return "#b8b8c0";
  const clamp = Math.max(1, n / 4);
  const frac = Math.min(Math.abs(delta), clamp) / clamp;
  // keep a visible floor so a one-step move still reads as directional
  const strength = 0.25 + 0.75 * frac;
  const light = Math.round(78 - 38 * strength);
  return delta > 0 ? `hsl(215, 85%, ${light}%)` : `hsl(4, 78%, ${light}%)`;
}

/** Lines are drawn unless both endpoints sit outside the visible window. */
export function lineVisible(
  yA: number,
  yB: number,
  scrollTop: number,
  viewHeight: number,
): boolean {
  const inside = (y: number) => y >= scrollTop && y <= scrollTop + viewHeight;
  return inside(yA) || inside(yB);
}

export interface GradientStop {
  offset: number;
  color: string;
}

/**
 * Gradient stops for the threshold slider track.  Below t_effective_min the
 * constraint cannot change the unconstrained consensus, so that region is
 * flat grey; from the anchor to 1.0 the color ramps monotonically.
 */
export function sliderGradientStops(tEffectiveMin: number): GradientStop[] {
  const anchor = Math.min(1, Math.max(0, tEffectiveMin));
  const stops: GradientStop[] = [{ offset: 0, color: "#d6d6dc" }];
  if (anchor > 0) stops.push({ offset: anchor, color: "#d6d6dc" });
  const span = 1 - anchor;
  for (const frac of [0, 0.5, 1]) {
    if (span === 0 && frac < 1) continue;
    const sat = Math.round(25 + 65 * frac);
    const light = Math.round(72 - 30 * frac);
    stops.push({ offset: anchor + span * frac, color: `hsl(262, ${sat}%, ${light}%)` });
  }
  return stops;
}

export function sliderGradientCss(tEffectiveMin: number): string {
  const parts = sliderGradientStops(tEffectiveMin).map(
    (s) => `${s.color} ${(s.offset * 100).toFixed(1)}%`,
  );
  return `linear-gradient(to right, ${parts.join(", ")})`;
}

/** Sequential shade for the similarity matrix: darker = more similar. */
export function similarityShade(value: number): string {
  const v = Math.min(1, Math.max(0, value));
  const light = Math.round(96 - 66 * v);
  return `hsl(230, 38%, ${light}%)`;
}

/** Position of a rate on the [0, 1] fairness axis, as a CSS percentage. */
export function ratePercent(value: number): string {
  return `${(Math.min(1, Math.max(0, value)) * 100).toFixed(2)}%`;
}

const GROUP_PALETTE = [
  "#4c78a8",
  "#f58518",
  "#54a24b",
  "#b279a2",
  "#e45756",
  "#72b7b2",
  "#eeca3b",
  "#9d755d",
];

export function groupColor(labels: string[], label: string): string {
  const idx = [...labels].sort().indexOf(label);
  return GROUP_PALETTE[((idx % GROUP_PALETTE.length) + GROUP_PALETTE.length) % GROUP_PALETTE.length];
}

/** Heatmap shade for a histogram cell, scaled to the row's own maximum. */
export function histogramShade(count: number, rowMax: number): string {
  if (rowMax <= 0 || count <= 0) return "hsl(230, 20%, 97%)";
  const v = count / rowMax;
  return `hsl(230, 45%, ${Math.round(92 - 52 * v)}%)`;
}
