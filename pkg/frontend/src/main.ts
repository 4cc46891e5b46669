import { ApiClient, ApiError } from "./api.js";
import { Workbench } from "./app.js";

function readFileInto(input: HTMLInputElement, target: HTMLTextAreaElement): void {
  input.addEventListener("change", () => {
    const file = input.files?.[0];
    if (!file) return;
    void file.text().then((text) => {
      target.value = text;
    });
  });
}

function buildForm(root: HTMLElement, onCreated: (wb: Workbench) => void): void {
  root.innerHTML = `
    <form class="create-form">
      <h1>Consensus workbench</h1>
      <p>Paste (or load) a candidates CSV, pick the protected column, and
         provide either scores or explicit base rankings.</p>
      <label>protected column
        <input name="protected" required placeholder="e.g. role">
      </label>
      <label>candidates CSV
        <input type="file" class="file-candidates" accept=".csv,text/csv">
        <textarea name="candidates" rows="6" required></textarea>
      </label>
      <label class="radio-row">
        <input type="radio" name="source" value="scores" checked> score columns
        <input type="radio" name="source" value="rankings"> base rankings
      </label>
      <label>source CSV
        <input type="file" class="file-source" accept=".csv,text/csv">
        <textarea name="source_csv" rows="6" required></textarea>
      </label>
      <label>histogram bins
        <input name="bins" type="number" min="1" placeholder="4">
      </label>
      <button type="submit">create session</button>
      <div class="form-error" role="alert"></div>
    </form>
  `;
  const form = root.querySelector("form") as HTMLFormElement;
  const errorEl = form.querySelector(".form-error") as HTMLElement;
  readFileInto(
    form.querySelector(".file-candidates") as HTMLInputElement,
    form.elements.namedItem("candidates") as HTMLTextAreaElement,
  );
  readFileInto(
    form.querySelector(".file-source") as HTMLInputElement,
    form.elements.namedItem("source_csv") as HTMLTextAreaElement,
  );

  form.addEventListener("submit", (ev) => {
    ev.preventDefault();
    errorEl.textContent = "";
    const data = new FormData(form);
    const source = String(data.get("source"));
    const request = {
      protected: String(data.get("protected")),
      candidates_csv: String(data.get("candidates")),
      [source === "scores" ? "scores_csv" : "rankings_csv"]: String(data.get("source_csv")),
      ...(data.get("bins") ? { bins: Number(data.get("bins")) } : {}),
    };
    const api = new ApiClient("");
    api
      .createSession(request)
      .then((created) => onCreated(new Workbench(root, api, created)))
      .catch((err) => {
        errorEl.textContent = err instanceof ApiError ? err.message : String(err);
      });
  });
}

const rootEl = document.getElementById("app");
if (rootEl) {
  buildForm(rootEl, () => {});
}
