/** Typed client for the review service's JSON API.
 *
 * Every helper resolves with the parsed payload on success and throws an
 * ApiError carrying the HTTP status and decoded body on anything else.
 * Conflicts (409) are part of the normal labeling flow — a candidate can go
 * stale, a session can finish under us — so callers branch on err.status
 * rather than treating every throw as fatal.
 */

export type CellValue = number | string | null;

export interface ColumnInfo {
  name: string;
  kind: "num" | "sym";
  role: "x" | "y";
  goal: "max" | "min" | null;
}

export interface DatasetInfo {
  name: string;
  rows: number;
  columns: ColumnInfo[];
}

export interface Incumbent {
  ident: number;
  cells: CellValue[];
  d2h: number;
}

export type SessionPhase = "idle" | "awaiting-label" | "finished";

export interface SessionSummary {
  schema_version: number;
  id: string;
  dataset: string;
  algorithm: string;
  policy: string;
  budget: number;
  seed: number;
  simulate: boolean;
  state: SessionPhase;
  labels_used: number;
  aborted: boolean;
  error: string | null;
  incumbent: Incumbent | null;
  trajectory: [number, number][];
}

export interface Candidate {
  ident: number;
  seed: boolean;
  x: Record<string, CellValue>;
  b: number | null;
  r: number | null;
  score: number | null;
  labels_used: number;
  budget_remaining: number;
}

export interface CandidateEnvelope {
  schema_version: number;
  session_id: string;
  state: "awaiting-label";
  candidate: Candidate;
}

export interface NumColumnModel {
  name: string;
  kind: "num";
  n: number;
  mu: number | null;
  sd: number | null;
  lo: number | null;
  hi: number | null;
}

export interface SymColumnModel {
  name: string;
  kind: "sym";
  n: number;
  top: [string, number][];
}

export type ColumnModel = NumColumnModel | SymColumnModel;

export interface HistoryEntry {
  ident: number;
  cells: CellValue[];
  d2h: number;
}

export interface Report {
  schema_version: number;
  session: SessionSummary;
  model: { best: ColumnModel[]; rest: ColumnModel[] } | null;
  history: HistoryEntry[];
}

export class ApiError extends Error {
  status: number;
  body: Record<string, unknown>;

  constructor(status: number, body: Record<string, unknown>) {
    super(typeof body.error === "string" ? body.error : `request failed (${status})`);
    this.name = "ApiError";
    this.status = status;
    this.body = body;
  }

  /** The session state the service reported alongside the error, if any. */
  get state(): string | null {
    return typeof this.body.state === "string" ? this.body.state : null;
  }

  /** On a stale-candidate conflict, the ident the service is waiting on. */
  get pending(): number | null {
    return typeof this.body.pending === "number" ? this.body.pending : null;
  }
}

let apiBase = "";

/** Point the client at another origin (tests drive a server on localhost). */
export const configureApi = (base: string): void => {
  apiBase = base;
};

const request = async <T>(path: string, init?: RequestInit): Promise<T> => {
  const res = await fetch(apiBase + path, init);
  const body = await res.json().catch(() => ({}));
  if (!res.ok) throw new ApiError(res.status, body as Record<string, unknown>);
  return body as T;
};

const post = <T>(path: string, payload: unknown): Promise<T> =>
  request<T>(path, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(payload),
  });

export const listDatasets = (): Promise<{ datasets: DatasetInfo[] }> =>
  request("/api/datasets");

export interface SessionRequest {
  dataset: string;
  policy: string;
  budget: number;
  seed: number;
  simulate?: boolean;
}

export const createSession = (req: SessionRequest): Promise<SessionSummary> =>
  post("/api/sessions", { algorithm: "lite", ...req });

export const getCandidate = (id: string): Promise<CandidateEnvelope> =>
  request(`/api/sessions/${encodeURIComponent(id)}/candidate`);

export const submitLabel = (
  id: string,
  ident: number,
  goals: number[],
): Promise<SessionSummary> =>
  post(`/api/sessions/${encodeURIComponent(id)}/label`, { ident, goals });

export const getReport = (id: string): Promise<Report> =>
  request(`/api/sessions/${encodeURIComponent(id)}/report`);

export const uploadDataset = (
  name: string,
  content: string,
): Promise<{ schema_version: number; dataset: DatasetInfo }> =>
  post("/api/datasets", { name, content });
