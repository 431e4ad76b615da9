import { describe, expect, it } from "vitest";

import { renderMetricsDashboard } from "../src/render";
import { initialState, type ViewState } from "../src/state";
import type { Report } from "../src/types";

const REPORT: Report = {
  corpus_id: "demo",
  rows: [
    {
      method: "bpe-8000",
      vocab_size: 8001,
      oov_rate: 0.5,
      semantic_consistency: 0.8123456,
      fragmentation: 1.41,
      char_compression: 1.0,
      token_compression: 1.41,
      reconstruction_rate: 1.0,
      ms_per_mtoken: 253.7,
      error: null,
      token_lengths: { "1": 40, "2": 3000, "3": 4961 },
    },
    {
      method: "broken",
      vocab_size: null,
      oov_rate: null,
      semantic_consistency: null,
      fragmentation: null,
      char_compression: null,
      token_compression: null,
      reconstruction_rate: null,
      ms_per_mtoken: null,
      error: "external tokenization lacks document 'd7'",
      token_lengths: null,
    },
  ],
  zipf: {
    fit: { slope: -1.0, intercept: 9.2, rmse: 0.12, points: 3 },
    points: [
      [1, 100, 0.0, 4.605],
      [2, 50, 0.693, 3.912],
      [3, 50, 1.098, 3.912],
    ],
  },
};

function stateWithReport(): ViewState {
  return { ...initialState(), report: REPORT };
}

function renderInto(html: string): HTMLElement {
  const host = document.createElement("div");
  host.innerHTML = html;
  return host;
}

describe("metrics dashboard", () => {
  it("missing report shows the call to action", () => {
    const host = renderInto(renderMetricsDashboard(initialState()));
    expect(host.querySelector(".call-to-action")!.textContent).toContain("toklab eval");
  });

  it("zipf chart annotates the fitted slope verbatim", () => {
    const host = renderInto(renderMetricsDashboard(stateWithReport()));
    expect(host.querySelector(".fit-label")!.textContent).toBe("slope -1.00");
    expect(host.querySelectorAll(".zipf .dots circle").length).toBe(3);
  });

  it("oov gauge reads fifty percent", () => {
    const host = renderInto(renderMetricsDashboard(stateWithReport()));
    const gauge = host.querySelector('.oov-gauge[data-method="bpe-8000"] .reading')!;
    expect(gauge.textContent).toBe("50.0%");
  });

  it("one length distribution per method carrying token_lengths", () => {
    const host = renderInto(renderMetricsDashboard(stateWithReport()));
    expect(host.querySelectorAll(".length-dist").length).toBe(1);
  });

  it("table shows values from the API without recomputation", () => {
    const host = renderInto(renderMetricsDashboard(stateWithReport()));
    const cells = [...host.querySelectorAll("table.metrics tr")][1].querySelectorAll("td");
    expect(cells[0].textContent).toBe("bpe-8000");
    expect(cells[1].textContent).toBe("8001");
    expect(cells[3].textContent).toBe((0.8123456).toPrecision(6));
  });

  it("failed rows carry an inline error marker", () => {
    const host = renderInto(renderMetricsDashboard(stateWithReport()));
    expect(host.querySelector("td.error")!.textContent).toContain("ERROR:");
  });

  it("frequency spectrum is built from the shipped points", () => {
    const host = renderInto(renderMetricsDashboard(stateWithReport()));
    const rects = host.querySelectorAll(".spectrum rect");
    // counts {100: 1 type, 50: 2 types} -> two bars
    expect(rects.length).toBe(2);
  });

  it("report error renders inline", () => {
    const state = { ...initialState(), errors: { report: "no report for corpus 'x'" } };
    const host = renderInto(renderMetricsDashboard(state));
    expect(host.querySelector(".inline-error")!.textContent).toContain("no report");
  });

  it("matches the stable snapshot", () => {
    expect(renderMetricsDashboard(stateWithReport())).toMatchSnapshot();
  });
});
