// Pure renderers: every function maps ViewState to an HTML string with no
// fetching and no tokenization logic of its own. Token strings are inserted
// exactly as the API returned them (HTML-escaped for markup safety only, so
// the parsed textContent stays byte-equal to the payload).

import { bars, gauge, scatterWithLine } from "./charts";
import type { ViewState } from "./state";
import type { MethodRow, ModelSegmentation, WordSegmentation } from "./types";

export function escapeHtml(value: string): string {
  return value
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

const CONTINUATION = "##";
const WORD_END = "</w>";

function chip(token: string, unknown: boolean): string {
  const classes = ["chip"];
  let body: string;
  if (unknown) classes.push("unknown");
  if (token.startsWith(CONTINUATION) && token.length > CONTINUATION.length) {
    classes.push("continuation");
    body = `<span class="marker">${escapeHtml(CONTINUATION)}</span>${escapeHtml(token.slice(CONTINUATION.length))}`;
  } else if (token.endsWith(WORD_END) && token.length > WORD_END.length) {
    classes.push("word-end");
    body = `${escapeHtml(token.slice(0, -WORD_END.length))}<span class="marker">${escapeHtml(WORD_END)}</span>`;
  } else {
    body = escapeHtml(token);
  }
  return `<span class="${classes.join(" ")}">${body}</span>`;
}

function wordStrip(word: WordSegmentation): string {
  const chips = word.tokens.map((t, i) => chip(t, word.is_unknown[i] ?? false)).join("");
  return `<span class="word-strip" data-word="${escapeHtml(word.word)}">${chips}</span>`;
}

function modelPanel(modelId: string, seg: ModelSegmentation): string {
  const strips = seg.words.map(wordStrip).join(" ");
  const frag = seg.fragmentation === null ? "–" : seg.fragmentation.toFixed(2);
  return (
    `<section class="model-panel" data-model-id="${escapeHtml(modelId)}">` +
    `<h3>${escapeHtml(modelId)} <small>${escapeHtml(seg.algorithm)}</small></h3>` +
    `<div class="strips">${strips}</div>` +
    `<p class="panel-stats">${seg.token_count} tokens / ${seg.word_count} words` +
    ` · fragmentation <b class="frag">${frag}</b></p>` +
    `</section>`
  );
}

export function renderSegmentationPanel(state: ViewState): string {
  if (state.errors.segment) {
    return `<div class="inline-error">${escapeHtml(state.errors.segment)}</div>`;
  }
  if (!state.text.trim() || state.segment === null) {
    return `<p class="hint">Type a word or paste text to see each model's decomposition.</p>`;
  }
  const panels = state.selectedModelIds
    .filter((id) => state.segment && id in state.segment.results)
    .map((id) => modelPanel(id, state.segment!.results[id]))
    .join("");
  return panels || `<p class="hint">No models selected.</p>`;
}

export function renderModelPicker(state: ViewState): string {
  if (state.models.length === 0) {
    return `<p class="hint">No models loaded on the service.</p>`;
  }
  return state.models
    .map((m) => {
      const checked = state.selectedModelIds.includes(m.model_id) ? " checked" : "";
      return (
        `<label class="model-choice"><input type="checkbox" data-model="${escapeHtml(m.model_id)}"${checked}>` +
        ` ${escapeHtml(m.model_id)} <small>${escapeHtml(m.algorithm)}, ${m.vocab_size}</small></label>`
      );
    })
    .join("");
}

export function renderCorruptionPanel(state: ViewState): string {
  if (state.errors.corrupt) {
    return `<div class="inline-error">${escapeHtml(state.errors.corrupt)}</div>`;
  }
  const result = state.corruption;
  if (!result) {
    return `<p class="hint">Corruption preview appears here.</p>`;
  }
  const corrupted = new Set(result.corrupted_indices);
  const words = result.text.split(" ").map((w, i) => {
    const cls = corrupted.has(i) ? "word corrupted" : "word";
    return `<span class="${cls}">${escapeHtml(w)}</span>`;
  });
  const warning = result.warning
    ? `<p class="warning">${escapeHtml(result.warning)}</p>`
    : "";
  return (
    `<div class="corruption">` +
    `<p class="corrupted-text">${words.join(" ")}</p>` +
    `<p class="panel-stats">requested ${result.ratio_requested} · actual ` +
    `<b>${result.ratio_actual.toFixed(3)}</b> · seed ${result.seed}</p>` +
    warning +
    `</div>`
  );
}

const TABLE_COLUMNS: [keyof MethodRow, string][] = [
  ["method", "method"],
  ["vocab_size", "vocab"],
  ["oov_rate", "oov"],
  ["semantic_consistency", "consistency"],
  ["fragmentation", "fragmentation"],
  ["char_compression", "char comp."],
  ["token_compression", "token comp."],
  ["reconstruction_rate", "reconstruction"],
  ["ms_per_mtoken", "ms/Mtoken"],
];

function cell(value: unknown): string {
  if (value === null || value === undefined) return "";
  if (typeof value === "number" && !Number.isInteger(value)) return value.toPrecision(6);
  return escapeHtml(String(value));
}

export function renderMetricsDashboard(state: ViewState): string {
  if (state.errors.report) {
    return `<div class="inline-error">${escapeHtml(state.errors.report)}</div>`;
  }
  const report = state.report;
  if (!report) {
    return (
      `<div class="call-to-action">No evaluation report loaded. Run` +
      ` <code>toklab eval --in corpus.jsonl --manifest split.json --model ... --out-dir DIR</code>` +
      ` and restart the service with <code>--models DIR</code>.</div>`
    );
  }

  const header = TABLE_COLUMNS.map(([, label]) => `<th>${label}</th>`).join("");
  const rows = report.rows
    .map((row) => {
      if (row.error) {
        return (
          `<tr><td>${escapeHtml(row.method)}</td>` +
          `<td class="error" colspan="${TABLE_COLUMNS.length - 1}">ERROR: ${escapeHtml(row.error)}</td></tr>`
        );
      }
      return `<tr>${TABLE_COLUMNS.map(([key]) => `<td>${cell(row[key])}</td>`).join("")}</tr>`;
    })
    .join("");
  const table = `<table class="metrics"><tr>${header}</tr>${rows}</table>`;

  const zipfPoints = report.zipf.points.map((p) => ({ x: p[2], y: p[3] }));
  const fit = report.zipf.fit;
  const zipfChart =
    zipfPoints.length > 1
      ? scatterWithLine(
          zipfPoints,
          fit ? { slope: fit.slope, intercept: fit.intercept, label: `slope ${fit.slope.toFixed(2)}` } : null,
          { x: "log rank", y: "log count" },
        )
      : "";

  // Frequency spectrum: how many types occur k times, from the raw points.
  const spectrum = new Map<number, number>();
  for (const [, count] of report.zipf.points) {
    spectrum.set(count, (spectrum.get(count) ?? 0) + 1);
  }
  const spectrumEntries = [...spectrum.entries()]
    .sort((a, b) => a[0] - b[0])
    .slice(0, 40)
    .map(([count, types]) => ({ label: String(count), value: types }));
  const spectrumChart = bars(spectrumEntries, "types with this count");

  const lengthCharts = report.rows
    .filter((row) => row.token_lengths && !row.error)
    .map((row) => {
      const entries = Object.entries(row.token_lengths!)
        .map(([len, count]) => ({ label: len, value: count }))
        .sort((a, b) => Number(a.label) - Number(b.label));
      return (
        `<figure class="length-dist" data-method="${escapeHtml(row.method)}">` +
        `<figcaption>token lengths: ${escapeHtml(row.method)}</figcaption>` +
        bars(entries, "vocab entries") +
        `</figure>`
      );
    })
    .join("");

  const gauges = report.rows
    .filter((row) => row.oov_rate !== null && !row.error)
    .map(
      (row) =>
        `<figure class="oov-gauge" data-method="${escapeHtml(row.method)}">` +
        gauge(row.oov_rate!, `OOV ${escapeHtml(row.method)}`) +
        `</figure>`,
    )
    .join("");

  return (
    `<div class="dashboard" data-corpus-id="${escapeHtml(report.corpus_id)}">` +
    `<h3>corpus: ${escapeHtml(report.corpus_id)}</h3>` +
    table +
    `<div class="charts">` +
    `<figure class="zipf"><figcaption>Zipf rank-frequency</figcaption>${zipfChart}</figure>` +
    `<figure class="spectrum"><figcaption>frequency spectrum</figcaption>${spectrumChart}</figure>` +
    lengthCharts +
    `<div class="gauges">${gauges}</div>` +
    `</div></div>`
  );
}
