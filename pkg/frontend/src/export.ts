// Self-contained HTML snapshot of the current dashboard and panels: inline
// styles, inline SVG, no scripts, no external references.

import { renderCorruptionPanel, renderMetricsDashboard, renderSegmentationPanel } from "./render";
import type { ViewState } from "./state";
import { STYLES } from "./styles";

export function canExport(state: ViewState): boolean {
  return state.report !== null || state.segment !== null;
}

export function exportReportHtml(state: ViewState): string | null {
  if (!canExport(state)) return null;
  const stamp = new Date().toISOString();
  return (
    `<!doctype html>\n<html lang="en">\n<head>\n<meta charset="utf-8">\n` +
    `<title>toklab report snapshot</title>\n<style>${STYLES}</style>\n</head>\n<body>\n` +
    `<header><h1>toklab report snapshot <small>${stamp}</small></h1></header>\n<main>\n` +
    `<section class="block"><h2>Segmentation</h2>${renderSegmentationPanel(state)}</section>\n` +
    `<section class="block"><h2>Corruption preview</h2>${renderCorruptionPanel(state)}</section>\n` +
    `<section class="block"><h2>Metrics</h2>${renderMetricsDashboard(state)}</section>\n` +
    `</main>\n</body>\n</html>\n`
  );
}

export function downloadSnapshot(state: ViewState): boolean {
  const html = exportReportHtml(state);
  if (html === null) return false;
  const blob = new Blob([html], { type: "text/html" });
  const url = URL.createObjectURL(blob);
  const anchor = document.createElement("a");
  anchor.href = url;
  anchor.download = "toklab-report.html";
  document.body.appendChild(anchor);
  anchor.click();
  anchor.remove();
  URL.revokeObjectURL(url);
  return true;
}
