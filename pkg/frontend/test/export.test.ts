import { describe, expect, it } from "vitest";

import { canExport, exportReportHtml } from "../src/export";
import { renderMetricsDashboard, renderSegmentationPanel } from "../src/render";
import { initialState, type ViewState } from "../src/state";
import type { Report, SegmentResponse } from "../src/types";

const REPORT: Report = {
  corpus_id: "demo",
  rows: [
    {
      method: "bpe-8000",
      vocab_size: 8001,
      oov_rate: 0.25,
      semantic_consistency: 0.75,
      fragmentation: 1.62,
      char_compression: 1.0,
      token_compression: 1.62,
      reconstruction_rate: 1.0,
      ms_per_mtoken: 311.25,
      error: null,
      token_lengths: { "1": 40, "2": 100 },
    },
  ],
  zipf: {
    fit: { slope: -1.04, intercept: 8.8, rmse: 0.15, points: 2 },
    points: [
      [1, 90, 0.0, 4.5],
      [2, 45, 0.693, 3.807],
    ],
  },
};

const SEGMENT: SegmentResponse = {
  text: "unable",
  results: {
    wp: {
      algorithm: "wordpiece",
      words: [
        {
          word: "unable",
          tokens: ["un", "##able"],
          ids: [1, 2],
          offsets: [[0, 2], [2, 6]],
          is_unknown: [false, false],
        },
      ],
      word_count: 1,
      token_count: 2,
      fragmentation: 2.0,
    },
  },
};

function populated(): ViewState {
  return {
    ...initialState(),
    text: "unable",
    models: [{ model_id: "wp", algorithm: "wordpiece", vocab_size: 10 }],
    selectedModelIds: ["wp"],
    segment: SEGMENT,
    report: REPORT,
  };
}

describe("export", () => {
  it("is disabled on an empty dashboard", () => {
    expect(canExport(initialState())).toBe(false);
    expect(exportReportHtml(initialState())).toBeNull();
  });

  it("produces a self-contained document", () => {
    const html = exportReportHtml(populated())!;
    expect(html.startsWith("<!doctype html>")).toBe(true);
    expect(html).toContain("<style>");
    expect(html).not.toContain("<script");
    expect(html).not.toMatch(/src\s*=\s*"http/);
    expect(html).not.toMatch(/href\s*=\s*"http/);
    expect(html).not.toMatch(/<link/);
  });

  it("exported numbers equal the on-screen numbers", () => {
    const state = populated();
    const html = exportReportHtml(state)!;
    const doc = document.implementation.createHTMLDocument("snapshot");
    doc.documentElement.innerHTML = html;

    const onScreen = document.createElement("div");
    onScreen.innerHTML = renderMetricsDashboard(state) + renderSegmentationPanel(state);

    const exportedCells = [...doc.querySelectorAll("table.metrics td")].map(
      (c) => c.textContent,
    );
    const screenCells = [...onScreen.querySelectorAll("table.metrics td")].map(
      (c) => c.textContent,
    );
    expect(exportedCells).toEqual(screenCells);

    const exportedChips = [...doc.querySelectorAll(".chip")].map((c) => c.textContent);
    expect(exportedChips).toEqual(["un", "##able"]);
    expect(doc.querySelector(".fit-label")!.textContent).toBe("slope -1.04");
  });
});
