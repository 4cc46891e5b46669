import { ratePercent, sliderGradientCss } from "../scales.js";

export interface SliderOptions {
  value: number;
  tEffectiveMin: number;
  pending: boolean;
  error: string | null;
  onGenerate(t: number): void;
}

/**
 * Threshold slider for generating consensus columns.  The track gradient is
 * flat until t_effective_min (below it the constraint cannot bite) and ramps
 * up from there; releasing the handle triggers one generate call.
 */
export function renderSlider(container: HTMLElement, opts: SliderOptions): void {
  container.textContent = "";
  container.classList.add("slider-wrap");

  const title = document.createElement("span");
  title.className = "slider-title";
  title.textContent = "fairness threshold";
  container.appendChild(title);

  const track = document.createElement("div");
  track.className = "slider-track";
  track.style.background = sliderGradientCss(opts.tEffectiveMin);

  const anchor = document.createElement("span");
  anchor.className = "slider-anchor";
  anchor.style.left = ratePercent(opts.tEffectiveMin);
  anchor.title = `below ${opts.tEffectiveMin} the unconstrained consensus already satisfies the threshold`;
  track.appendChild(anchor);

  const input = document.createElement("input");
  input.type = "range";
  input.min = "0";
  input.max = "1";
  input.step = "0.01";
  input.value = String(opts.value);
  input.disabled = opts.pending;
  track.appendChild(input);
  container.appendChild(track);

  const value = document.createElement("output");
  value.className = "slider-value";
  value.textContent = `t = ${opts.value}`;
  container.appendChild(value);

  const go = document.createElement("button");
  go.type = "button";
  go.className = "btn-generate";
  go.textContent = opts.pending ? "generating…" : "generate";
  go.disabled = opts.pending;
  container.appendChild(go);

  input.addEventListener("input", () => {
    value.textContent = `t = ${input.value}`;
  });
  // releasing the handle fires change; the button repeats the last value
  input.addEventListener("change", () => opts.onGenerate(parseFloat(input.value)));
  go.addEventListener("click", () => opts.onGenerate(parseFloat(input.value)));

  if (opts.error) {
    const err = document.createElement("span");
    err.className = "slider-error";
    err.textContent = opts.error;
    container.appendChild(err);
  }
}
