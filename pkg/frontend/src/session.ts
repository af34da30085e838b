/** Session view assembly and input validation.
 *
 * A SessionView is everything one render needs, and every field of it comes
 * straight off the wire: the client never recomputes likelihoods, distances,
 * or incumbents.  The same builder serves both paths — the live flow (label
 * response + next candidate) and the refresh flow (report + candidate) — so
 * reloading the page reconstructs exactly the state the live flow shows.
 */

import {
  ApiError,
  getCandidate,
  getReport,
  type Candidate,
  type CellValue,
  type ColumnInfo,
  type Incumbent,
  type SessionPhase,
  type SessionSummary,
} from "./api.js";

export interface SessionView {
  id: string;
  dataset: string;
  policy: string;
  budget: number;
  seed: number;
  simulate: boolean;
  state: SessionPhase;
  labelsUsed: number;
  aborted: boolean;
  error: string | null;
  incumbent: Incumbent | null;
  trajectory: [number, number][];
  candidate: Candidate | null;
  schema: ColumnInfo[];
}

export const buildView = (
  summary: SessionSummary,
  candidate: Candidate | null,
  schema: ColumnInfo[],
): SessionView => ({
  id: summary.id,
  dataset: summary.dataset,
  policy: summary.policy,
  budget: summary.budget,
  seed: summary.seed,
  simulate: summary.simulate,
  state: summary.state,
  labelsUsed: summary.labels_used,
  aborted: summary.aborted,
  error: summary.error,
  incumbent: summary.incumbent,
  trajectory: summary.trajectory,
  candidate,
  schema,
});

export const goalColumns = (schema: ColumnInfo[]): ColumnInfo[] =>
  schema.filter((col) => col.role === "y");

export type Screen = "labeling" | "done";

export const screenFor = (view: SessionView): Screen =>
  view.state === "finished" ? "done" : "labeling";

/** Rebuild the whole view from the server: the page-refresh path.
 *
 * The candidate endpoint waits until the optimizer has settled (next row
 * posted, or run finished), so when the first report catches the session
 * mid-step we read it once more afterwards and never show a transient phase.
 */
export const loadSession = async (
  id: string,
  schemaFor: (dataset: string) => ColumnInfo[],
): Promise<SessionView> => {
  let report = await getReport(id);
  let candidate: Candidate | null = null;
  if (report.session.state !== "finished") {
    try {
      candidate = (await getCandidate(id)).candidate;
    } catch (err) {
      // 409 means no pending candidate (finished or simulated); not an error.
      if (!(err instanceof ApiError && err.status === 409)) throw err;
    }
    if (report.session.state === "idle") {
      report = await getReport(id);
    }
  }
  return buildView(report.session, candidate, schemaFor(report.session.dataset));
};

export type GoalCheck =
  | { ok: true; values: number[] }
  | { ok: false; errors: (string | null)[] };

/** Field-by-field numeric validation of the goal inputs. */
export const checkGoals = (raw: string[]): GoalCheck => {
  const values: number[] = [];
  const errors: (string | null)[] = raw.map(() => null);
  let bad = false;
  raw.forEach((text, i) => {
    const trimmed = text.trim();
    const v = Number(trimmed);
    if (trimmed === "") {
      errors[i] = "required";
      bad = true;
    } else if (!Number.isFinite(v)) {
      errors[i] = "must be a number";
      bad = true;
    } else {
      values.push(v);
    }
  });
  return bad ? { ok: false, errors } : { ok: true, values };
};

export interface NamedCell {
  name: string;
  value: CellValue;
  goal: "max" | "min" | null;
}

/** Pair a row's cells with the schema columns, goal columns only.
 *
 * Cells arrive in file-column order, one per schema column; if the lengths
 * ever disagree we refuse to guess and show nothing rather than mislabel.
 */
export const goalCells = (
  schema: ColumnInfo[],
  cells: CellValue[],
): NamedCell[] | null => {
  if (schema.length !== cells.length) return null;
  return schema
    .map((col, i) => ({ name: col.name, value: cells[i], goal: col.goal }))
    .filter((_, i) => schema[i].role === "y");
};
