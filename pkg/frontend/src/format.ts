/** Small display helpers shared by every screen. */

import type { CellValue, ColumnInfo } from "./api.js";

/** Which direction the reviewer should favor for a goal column. */
export const polarityHint = (col: ColumnInfo): string =>
  col.goal === "max" ? "higher is better" : "lower is better";

/** Compact numeric display: rounds float noise without padding integers. */
export const fmtNumber = (v: number, digits = 4): string =>
  Number.isInteger(v) ? String(v) : String(parseFloat(v.toFixed(digits)));

/** A raw cell for the screen; the wire encodes missing cells as null. */
export const fmtCell = (v: CellValue): string => {
  if (v === null) return "?";
  return typeof v === "number" ? fmtNumber(v) : v;
};

/** Fill fraction for the budget gauge, clamped to [0, 100]. */
export const gaugePercent = (used: number, budget: number): number => {
  if (budget <= 0) return 0;
  return Math.max(0, Math.min(100, (100 * used) / budget));
};

const ENTITIES: Record<string, string> = {
  "&": "&amp;",
  "<": "&lt;",
  ">": "&gt;",
  '"': "&quot;",
  "'": "&#39;",
};

/** Dataset names and cell values come from user CSVs; never trust them raw. */
export const escapeHtml = (s: string): string =>
  s.replace(/[&<>"']/g, (c) => ENTITIES[c]);
