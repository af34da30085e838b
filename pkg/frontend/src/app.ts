/** App shell: hash routing, rendering, and event wiring.
 *
 * One session per tab, addressed as #/session/{id}, so a reload (or a pasted
 * link) rebuilds the screen from the report endpoint alone.  All logic that
 * can live without the DOM sits in session.ts / render.ts; this file only
 * glues fetches to innerHTML.
 */

import {
  ApiError,
  createSession,
  getReport,
  listDatasets,
  submitLabel,
  uploadDataset,
  type ColumnInfo,
  type DatasetInfo,
} from "./api.js";
import {
  checkGoals,
  loadSession,
  screenFor,
  type SessionView,
} from "./session.js";
import {
  defaultStartForm,
  renderDoneScreen,
  renderLabelingScreen,
  renderStartScreen,
  type LabelingOptions,
  type StartFormState,
} from "./render.js";

const root = document.getElementById("app") as HTMLElement;

let datasets: DatasetInfo[] = [];
let startForm: StartFormState = defaultStartForm();
let view: SessionView | null = null;

const schemaFor = (dataset: string): ColumnInfo[] =>
  datasets.find((ds) => ds.name === dataset)?.columns ?? [];

const sessionIdFromHash = (): string | null => {
  const m = window.location.hash.match(/^#\/session\/([0-9a-f]+)$/);
  return m ? m[1] : null;
};

const byId = <T extends HTMLElement>(id: string): T =>
  document.getElementById(id) as T;

// ------------------------------------------------------------- start screen

const showStart = (): void => {
  view = null;
  root.innerHTML = renderStartScreen(datasets, startForm);
  wireStart();
};

const readStartForm = (): void => {
  startForm = {
    ...startForm,
    dataset: byId<HTMLSelectElement>("dataset").value,
    policy: byId<HTMLSelectElement>("policy").value,
    budget: byId<HTMLInputElement>("budget").value,
    seed: byId<HTMLInputElement>("seed").value,
    simulate: byId<HTMLInputElement>("simulate").checked,
  };
};

const startSession = async (): Promise<void> => {
  readStartForm();
  startForm.error = null;
  const budget = Number(startForm.budget);
  const seed = Number(startForm.seed);
  if (!Number.isInteger(budget)) {
    startForm.error = "budget must be a whole number";
    showStart();
    return;
  }
  if (!Number.isInteger(seed)) {
    startForm.error = "seed must be a whole number";
    showStart();
    return;
  }
  try {
    const summary = await createSession({
      dataset: startForm.dataset,
      policy: startForm.policy,
      budget,
      seed,
      simulate: startForm.simulate,
    });
    window.location.hash = `#/session/${summary.id}`;
  } catch (err) {
    startForm.error = err instanceof ApiError ? err.message : String(err);
    showStart(); // stay here: validation problems never navigate
  }
};

const uploadFromForm = async (): Promise<void> => {
  readStartForm();
  const name = byId<HTMLInputElement>("upload-name").value.trim();
  const file = byId<HTMLInputElement>("upload-file").files?.[0] ?? null;
  if (!name || !file) {
    startForm.uploadStatus = "pick a name and a CSV file first";
    showStart();
    return;
  }
  try {
    const content = await file.text();
    await uploadDataset(name, content);
    datasets = (await listDatasets()).datasets;
    startForm.uploadStatus = `dataset ${name} uploaded`;
    if (!startForm.dataset) startForm.dataset = name;
  } catch (err) {
    startForm.uploadStatus = err instanceof ApiError ? err.message : String(err);
  }
  showStart();
};

const wireStart = (): void => {
  byId<HTMLFormElement>("start-form").addEventListener("submit", (ev) => {
    ev.preventDefault();
    void startSession();
  });
  byId<HTMLFormElement>("upload-form").addEventListener("submit", (ev) => {
    ev.preventDefault();
    void uploadFromForm();
  });
};

// ---------------------------------------------------------- session screens

const renderSession = (opts: LabelingOptions = {}): void => {
  if (view === null) return;
  if (screenFor(view) === "done") {
    root.innerHTML = renderDoneScreen(view);
    wireDone();
  } else {
    root.innerHTML = renderLabelingScreen(view, opts);
    wireLabeling();
  }
};

const openSession = async (id: string): Promise<void> => {
  try {
    view = await loadSession(id, schemaFor);
    renderSession();
  } catch (err) {
    startForm.error = err instanceof ApiError ? err.message : String(err);
    window.location.hash = "#/";
    showStart();
  }
};

const refreshSession = async (notice: string): Promise<void> => {
  if (view === null) return;
  view = await loadSession(view.id, schemaFor);
  renderSession({ notice });
};

const submitGoals = async (): Promise<void> => {
  if (view === null || view.candidate === null) return;
  const inputs = Array.from(
    root.querySelectorAll<HTMLInputElement>(".goal-input"),
  ).sort((a, b) => Number(a.dataset.index) - Number(b.dataset.index));
  const raw = inputs.map((el) => el.value);
  const check = checkGoals(raw);
  if (!check.ok) {
    renderSession({ fieldErrors: check.errors, rawGoals: raw });
    return;
  }
  try {
    await submitLabel(view.id, view.candidate.ident, check.values);
    // re-render from the server, exactly as a page refresh would
    view = await loadSession(view.id, schemaFor);
    renderSession();
  } catch (err) {
    if (err instanceof ApiError && err.status === 409) {
      await refreshSession("that row is no longer pending; showing the current state");
    } else if (err instanceof ApiError) {
      renderSession({ notice: err.message, rawGoals: raw });
    } else {
      throw err;
    }
  }
};

const wireLabeling = (): void => {
  const form = document.getElementById("label-form");
  if (form !== null) {
    form.addEventListener("submit", (ev) => {
      ev.preventDefault();
      void submitGoals();
    });
  }
};

const downloadReport = async (): Promise<void> => {
  if (view === null) return;
  const report = await getReport(view.id);
  const blob = new Blob([JSON.stringify(report, null, 2)], {
    type: "application/json",
  });
  const url = URL.createObjectURL(blob);
  const a = document.createElement("a");
  a.href = url;
  a.download = `${view.dataset}-${view.id}.report.json`;
  a.click();
  URL.revokeObjectURL(url);
};

const wireDone = (): void => {
  byId<HTMLButtonElement>("download-report").addEventListener("click", () => {
    void downloadReport();
  });
};

// ------------------------------------------------------------------ routing

const route = async (): Promise<void> => {
  const id = sessionIdFromHash();
  if (id !== null) {
    await openSession(id);
  } else {
    showStart();
  }
};

const boot = async (): Promise<void> => {
  try {
    datasets = (await listDatasets()).datasets;
  } catch (err) {
    root.innerHTML = `<div class="error-banner">cannot reach the review service: ${
      err instanceof Error ? err.message : String(err)
    }</div>`;
    return;
  }
  window.addEventListener("hashchange", () => {
    void route();
  });
  await route();
};

void boot();
