import { describe, expect, it } from "vitest";

import type { ColumnInfo } from "../src/api.js";
import {
  escapeHtml,
  fmtCell,
  fmtNumber,
  gaugePercent,
  polarityHint,
} from "../src/format.js";

const col = (goal: "max" | "min" | null): ColumnInfo => ({
  name: "g",
  kind: "num",
  role: "y",
  goal,
});

describe("polarityHint", () => {
  it("tells the reviewer which direction wins", () => {
    expect(polarityHint(col("max"))).toBe("higher is better");
    expect(polarityHint(col("min"))).toBe("lower is better");
  });
});

describe("fmtNumber", () => {
  it("keeps integers bare", () => {
    expect(fmtNumber(12)).toBe("12");
    expect(fmtNumber(0)).toBe("0");
  });

  it("rounds floats without trailing zeros", () => {
    expect(fmtNumber(0.0792779474111128)).toBe("0.0793");
    expect(fmtNumber(0.5)).toBe("0.5");
    expect(fmtNumber(1.23456, 2)).toBe("1.23");
  });
});

describe("fmtCell", () => {
  it("shows missing cells the way the CSVs spell them", () => {
    expect(fmtCell(null)).toBe("?");
  });

  it("passes strings through and formats numbers", () => {
    expect(fmtCell("usa")).toBe("usa");
    expect(fmtCell(3975)).toBe("3975");
  });
});

describe("gaugePercent", () => {
  it("maps used/budget onto 0..100", () => {
    expect(gaugePercent(5, 20)).toBe(25);
    expect(gaugePercent(0, 20)).toBe(0);
    expect(gaugePercent(20, 20)).toBe(100);
  });

  it("clamps overshoot and guards empty budgets", () => {
    expect(gaugePercent(25, 20)).toBe(100);
    expect(gaugePercent(1, 0)).toBe(0);
  });
});

describe("escapeHtml", () => {
  it("neutralizes markup in untrusted cell values", () => {
    expect(escapeHtml('<b a="1">&\'')).toBe("&lt;b a=&quot;1&quot;&gt;&amp;&#39;");
    expect(escapeHtml("plain-text_ok")).toBe("plain-text_ok");
  });
});
