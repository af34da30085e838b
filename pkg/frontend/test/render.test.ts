import { describe, expect, it } from "vitest";

import type { Candidate, ColumnInfo, DatasetInfo, SessionSummary } from "../src/api.js";
import {
  defaultStartForm,
  renderDoneScreen,
  renderLabelingScreen,
  renderStartScreen,
  renderTrajectory,
} from "../src/render.js";
import { buildView } from "../src/session.js";

// The shape of the bundled car-economy file: four attributes, three goals.
const AUTO_SCHEMA: ColumnInfo[] = [
  { name: "Clndrs", kind: "num", role: "x", goal: null },
  { name: "Volume", kind: "num", role: "x", goal: null },
  { name: "Model", kind: "num", role: "x", goal: null },
  { name: "origin", kind: "sym", role: "x", goal: null },
  { name: "Lbs-", kind: "num", role: "y", goal: "min" },
  { name: "Acc+", kind: "num", role: "y", goal: "max" },
  { name: "Mpg+", kind: "num", role: "y", goal: "max" },
];

const DATASETS: DatasetInfo[] = [
  { name: "auto93", rows: 398, columns: AUTO_SCHEMA },
  { name: "cars", rows: 9, columns: AUTO_SCHEMA },
];

const summary = (over: Partial<SessionSummary> = {}): SessionSummary => ({
  schema_version: 1,
  id: "f00dcafe01020304",
  dataset: "auto93",
  algorithm: "lite",
  policy: "certain",
  budget: 20,
  seed: 1,
  simulate: false,
  state: "awaiting-label",
  labels_used: 6,
  aborted: false,
  error: null,
  incumbent: { ident: 31, cells: [4, 97, 82, 3, 2130, 24.6, 40], d2h: 0.079 },
  trajectory: [
    [1, 0.42],
    [2, 0.42],
    [3, 0.31],
    [4, 0.31],
    [5, 0.079],
    [6, 0.079],
  ],
  ...over,
});

const candidate = (over: Partial<Candidate> = {}): Candidate => ({
  ident: 214,
  seed: false,
  x: { Clndrs: 4, Volume: 120, Model: 79, origin: 2 },
  b: -11.4,
  r: -13.9,
  score: 2.1,
  labels_used: 6,
  budget_remaining: 14,
  ...over,
});

describe("renderStartScreen", () => {
  it("offers every dataset with its size and goal count", () => {
    const html = renderStartScreen(DATASETS, defaultStartForm());
    expect(html).toContain("auto93 (398 rows, 3 goals)");
    expect(html).toContain("cars (9 rows, 3 goals)");
    expect(html).not.toContain("<fieldset disabled");
  });

  it("keeps the user's entries and shows service rejections inline", () => {
    const form = { ...defaultStartForm(), dataset: "cars", budget: "99", error: "budget 99 exceeds the 9 labeled rows available" };
    const html = renderStartScreen(DATASETS, form);
    expect(html).toContain('value="99"');
    expect(html).toContain("budget 99 exceeds");
    expect(html).toContain('<option value="cars" selected>');
  });

  it("disables the form and opens the upload panel when no datasets exist", () => {
    const html = renderStartScreen([], defaultStartForm());
    expect(html).toContain("<fieldset disabled");
    expect(html).toContain("no datasets yet");
    expect(html).toContain('<details class="upload" open>');
  });
});

describe("renderLabelingScreen", () => {
  it("shows every attribute of the pending row and one input per goal", () => {
    const view = buildView(summary(), candidate(), AUTO_SCHEMA);
    const html = renderLabelingScreen(view);
    for (const name of ["Clndrs", "Volume", "Model", "origin"]) {
      expect(html).toContain(`<th>${name}</th>`);
    }
    expect(html.match(/class="goal-input/g)).toHaveLength(3);
    expect(html).toContain("Lbs-");
    expect(html.match(/hint">lower is better/g)).toHaveLength(1);
    expect(html.match(/hint">higher is better/g)).toHaveLength(2);
  });

  it("tracks the budget gauge and incumbent from the wire summary alone", () => {
    const view = buildView(summary(), candidate(), AUTO_SCHEMA);
    const html = renderLabelingScreen(view);
    expect(html).toContain("6 of 20 labels used");
    expect(html).toContain("width:30%");
    expect(html).toContain("0.079");
    expect(html).toContain("row 31");
  });

  it("flags seed-phase rows instead of inventing scores for them", () => {
    const seedView = buildView(
      summary({ labels_used: 0, incumbent: null, trajectory: [] }),
      candidate({ seed: true, b: null, r: null, score: null, labels_used: 0 }),
      AUTO_SCHEMA,
    );
    const html = renderLabelingScreen(seedView);
    expect(html).toContain("seed sample");
    expect(html).toContain("picked at random to seed the model");
    expect(html).not.toContain("acquisition score");
  });

  it("marks invalid fields in place and keeps what was typed", () => {
    const view = buildView(summary(), candidate(), AUTO_SCHEMA);
    const html = renderLabelingScreen(view, {
      fieldErrors: [null, "must be a number", null],
      rawGoals: ["2150", "abc", "30"],
    });
    expect(html).toContain('<span class="field-error">must be a number</span>');
    expect(html).toContain('value="abc"');
    expect(html.match(/field-error/g)).toHaveLength(1);
  });

  it("escapes untrusted cell values", () => {
    const view = buildView(
      summary(),
      candidate({ x: { origin: '<img src=x onerror=alert(1)>' } }),
      AUTO_SCHEMA,
    );
    const html = renderLabelingScreen(view);
    expect(html).not.toContain("<img");
    expect(html).toContain("&lt;img");
  });
});

describe("renderTrajectory", () => {
  it("draws a single series with one dot per label", () => {
    const html = renderTrajectory(
      [
        [1, 0.4],
        [2, 0.2],
      ],
      10,
    );
    expect(html.match(/<path class="series"/g)).toHaveLength(1);
    expect(html.match(/<circle/g)).toHaveLength(2);
  });

  it("says so when nothing is labeled yet", () => {
    expect(renderTrajectory([], 10)).toContain("no labels yet");
  });
});

describe("renderDoneScreen", () => {
  it("presents the recommended row and a report download", () => {
    const view = buildView(
      summary({ state: "finished", labels_used: 20 }),
      null,
      AUTO_SCHEMA,
    );
    const html = renderDoneScreen(view);
    expect(html).toContain("finished");
    expect(html).toContain("row 31");
    expect(html).toContain("0.079");
    expect(html).toContain('id="download-report"');
    expect(html).toContain("20 of 20 labels used");
  });

  it("labels aborted runs and surfaces the error text", () => {
    const view = buildView(
      summary({ state: "finished", aborted: true, error: "oracle closed" }),
      null,
      AUTO_SCHEMA,
    );
    const html = renderDoneScreen(view);
    expect(html).toContain("aborted");
    expect(html).toContain("oracle closed");
  });
});
