/** HTML builders for the three screens.
 *
 * Pure string-in, string-out: the app shell assigns the result to innerHTML
 * and wires events afterwards.  Keeping these pure lets tests assert that a
 * page refresh renders byte-for-byte the same screen as the live flow.
 */

import type { Candidate, DatasetInfo, Incumbent } from "./api.js";
import { escapeHtml, fmtCell, fmtNumber, gaugePercent, polarityHint } from "./format.js";
import { goalCells, goalColumns, type SessionView } from "./session.js";
import { trajectoryGeometry } from "./trajectory.js";

// ------------------------------------------------------------- start screen

export interface StartFormState {
  dataset: string;
  policy: string;
  budget: string;
  seed: string;
  simulate: boolean;
  error: string | null;
  uploadStatus: string | null;
}

export const defaultStartForm = (): StartFormState => ({
  dataset: "",
  policy: "certain",
  budget: "20",
  seed: "0",
  simulate: false,
  error: null,
  uploadStatus: null,
});

const option = (value: string, label: string, selected: boolean): string =>
  `<option value="${escapeHtml(value)}"${selected ? " selected" : ""}>${escapeHtml(label)}</option>`;

export const renderStartScreen = (
  datasets: DatasetInfo[],
  form: StartFormState,
): string => {
  const empty = datasets.length === 0;
  const options = datasets
    .map((ds) =>
      option(
        ds.name,
        `${ds.name} (${ds.rows} rows, ${goalColumns(ds.columns).length} goals)`,
        ds.name === form.dataset,
      ),
    )
    .join("");
  return `
<h1>frugalopt review</h1>
<p class="subtitle">label a handful of rows; the optimizer picks which ones are worth your time</p>
<section class="card">
  <h2>start a session</h2>
  ${empty ? '<p class="notice">no datasets yet &mdash; upload a CSV below to begin</p>' : ""}
  ${form.error ? `<div class="error-banner">${escapeHtml(form.error)}</div>` : ""}
  <form id="start-form">
    <fieldset${empty ? " disabled" : ""} style="border:0;padding:0;margin:0">
      <label for="dataset">dataset</label>
      <select id="dataset">${options}</select>
      <label for="policy">acquisition policy <span class="hint">certain exploits; uncertain explores</span></label>
      <select id="policy">
        ${option("certain", "certain", form.policy === "certain")}
        ${option("uncertain", "uncertain", form.policy === "uncertain")}
      </select>
      <label for="budget">label budget <span class="hint">how many rows you are willing to label</span></label>
      <input id="budget" type="number" value="${escapeHtml(form.budget)}">
      <label for="seed">random seed</label>
      <input id="seed" type="number" value="${escapeHtml(form.seed)}">
      <label for="simulate" style="font-weight:400">
        <input id="simulate" type="checkbox" style="width:auto"${form.simulate ? " checked" : ""}>
        simulate (answer from stored goal values; no manual labeling)
      </label>
      <button type="submit"${empty ? " disabled" : ""}>start session</button>
    </fieldset>
  </form>
  <details class="upload"${empty ? " open" : ""}>
    <summary>upload a dataset</summary>
    <form id="upload-form">
      <label for="upload-name">name <span class="hint">letters, digits, - and _ only</span></label>
      <input id="upload-name" type="text" placeholder="my_dataset">
      <label for="upload-file">CSV file <span class="hint">goal columns end with + or -</span></label>
      <input id="upload-file" type="file" accept=".csv,text/csv" style="max-width:22rem">
      <button type="submit" class="secondary">upload</button>
      ${form.uploadStatus ? `<div class="info-banner">${escapeHtml(form.uploadStatus)}</div>` : ""}
    </form>
  </details>
</section>`;
};

// ----------------------------------------------------------------- widgets

const renderGauge = (used: number, budget: number): string => `
<div class="gauge"><div class="gauge-fill" style="width:${gaugePercent(used, budget)}%"></div></div>
<div class="gauge-text">${used} of ${budget} labels used</div>`;

export const renderTrajectory = (
  series: [number, number][],
  budget: number,
): string => {
  if (series.length === 0) return '<p class="notice">no labels yet</p>';
  const geo = trajectoryGeometry(series, budget);
  const { width, height, pad } = geo;
  const dots = geo.points
    .map(([x, y]) => `<circle class="dot" cx="${x}" cy="${y}" r="2.5"/>`)
    .join("");
  return `
<svg class="trajectory" viewBox="0 0 ${width} ${height}" role="img" aria-label="best distance to target per label">
  <line class="axis" x1="${pad}" y1="${height - pad}" x2="${width - pad}" y2="${height - pad}"/>
  <line class="axis" x1="${pad}" y1="${pad}" x2="${pad}" y2="${height - pad}"/>
  <path class="series" d="${geo.path}"/>
  ${dots}
  <text x="${pad}" y="${height - 1}">0</text>
  <text x="${width - pad}" y="${height - 1}" text-anchor="end">${geo.xMax}</text>
  <text x="${pad + 3}" y="${pad + 3}">${fmtNumber(geo.yMax, 3)}</text>
</svg>
<div class="gauge-text">best distance to target after each label (lower is better)</div>`;
};

const renderIncumbent = (view: SessionView): string => {
  const inc: Incumbent | null = view.incumbent;
  if (inc === null) return '<p class="notice">no rows labeled yet</p>';
  const goals = goalCells(view.schema, inc.cells);
  const goalRows = goals
    ? goals
        .map(
          (cell) =>
            `<tr><th>${escapeHtml(cell.name)}</th><td>${escapeHtml(fmtCell(cell.value))}</td></tr>`,
        )
        .join("")
    : "";
  return `
<div class="incumbent-d2h">${fmtNumber(inc.d2h)} <span class="unit">distance to target</span></div>
<p class="session-meta">row ${inc.ident}</p>
${goalRows ? `<table class="cells">${goalRows}</table>` : ""}`;
};

const renderCandidateCard = (candidate: Candidate): string => {
  const xRows = Object.entries(candidate.x)
    .map(
      ([name, value]) =>
        `<tr><th>${escapeHtml(name)}</th><td>${escapeHtml(fmtCell(value))}</td></tr>`,
    )
    .join("");
  const seedBadge = candidate.seed
    ? ' <span class="badge seed">seed sample</span>'
    : "";
  const scoreLine = candidate.seed
    ? '<p class="notice">picked at random to seed the model; scores appear once a few rows are labeled</p>'
    : `<p class="notice">evidence for best ${fmtNumber(candidate.b ?? 0, 3)},
       for rest ${fmtNumber(candidate.r ?? 0, 3)},
       acquisition score ${fmtNumber(candidate.score ?? 0, 3)}</p>`;
  return `
<h2>row ${candidate.ident}${seedBadge}</h2>
<table class="cells">${xRows}</table>
${scoreLine}`;
};

// --------------------------------------------------------- labeling screen

export interface LabelingOptions {
  fieldErrors?: (string | null)[] | null;
  rawGoals?: string[] | null;
  notice?: string | null;
}

export const renderLabelingScreen = (
  view: SessionView,
  opts: LabelingOptions = {},
): string => {
  const fieldErrors = opts.fieldErrors ?? null;
  const rawGoals = opts.rawGoals ?? null;
  const goals = goalColumns(view.schema);
  const inputs = goals
    .map((col, i) => {
      const err = fieldErrors ? fieldErrors[i] : null;
      const value = rawGoals ? rawGoals[i] : "";
      return `
      <label for="goal-${i}">${escapeHtml(col.name)}
        <span class="hint">${polarityHint(col)}</span>
        ${err ? `<span class="field-error">${escapeHtml(err)}</span>` : ""}
      </label>
      <input id="goal-${i}" class="goal-input${err ? " invalid" : ""}" data-index="${i}"
             type="text" inputmode="decimal" autocomplete="off"
             value="${escapeHtml(value)}">`;
    })
    .join("");
  const candidateCard = view.candidate
    ? `${renderCandidateCard(view.candidate)}
<form id="label-form">
  ${inputs}
  <button type="submit">submit labels</button>
</form>`
    : '<p class="notice">waiting for the optimizer to pick the next row&hellip;</p>';
  return `
<h1>labeling: ${escapeHtml(view.dataset)}</h1>
<p class="session-meta">session <code>${escapeHtml(view.id)}</code> &middot; policy ${escapeHtml(view.policy)} &middot; seed ${view.seed}</p>
${renderGauge(view.labelsUsed, view.budget)}
${opts.notice ? `<div class="info-banner">${escapeHtml(opts.notice)}</div>` : ""}
<div class="row-flex">
  <section class="card">${candidateCard}</section>
  <section class="card">
    <h2>best so far</h2>
    ${renderIncumbent(view)}
  </section>
</div>
<section class="card">
  <h2>progress</h2>
  ${renderTrajectory(view.trajectory, view.budget)}
</section>
<footer class="actions"><a href="#/">abandon and start over</a></footer>`;
};

// ------------------------------------------------------------- done screen

export const renderDoneScreen = (view: SessionView): string => {
  const badge = view.aborted
    ? '<span class="badge aborted">aborted</span>'
    : '<span class="badge done">finished</span>';
  return `
<h1>session finished: ${escapeHtml(view.dataset)} ${badge}</h1>
<p class="session-meta">session <code>${escapeHtml(view.id)}</code> &middot; policy ${escapeHtml(view.policy)} &middot; seed ${view.seed}${view.simulate ? " &middot; simulated" : ""}</p>
${view.error ? `<div class="error-banner">${escapeHtml(view.error)}</div>` : ""}
${renderGauge(view.labelsUsed, view.budget)}
<div class="row-flex">
  <section class="card">
    <h2>recommended row</h2>
    ${renderIncumbent(view)}
  </section>
  <section class="card">
    <h2>progress</h2>
    ${renderTrajectory(view.trajectory, view.budget)}
  </section>
</div>
<footer class="actions">
  <button id="download-report" class="secondary" type="button">download report (JSON)</button>
  <a href="#/" style="margin-left:1rem">start another session</a>
</footer>`;
};
