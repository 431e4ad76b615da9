// Shared stylesheet; export embeds the same string so snapshots are
// self-contained.

export const STYLES = `
:root { color-scheme: light; }
body { font-family: system-ui, sans-serif; margin: 0; color: #19203a; background: #f6f7fb; }
header { background: #273469; color: #fff; padding: 0.8rem 1.4rem; }
header h1 { font-size: 1.1rem; margin: 0; }
main { max-width: 1100px; margin: 0 auto; padding: 1rem 1.4rem 4rem; }
section.block { background: #fff; border: 1px solid #dfe3ee; border-radius: 8px; padding: 1rem 1.2rem; margin: 1rem 0; }
section.block > h2 { margin: 0 0 0.6rem; font-size: 1rem; color: #273469; }
textarea#text-input { width: 100%; box-sizing: border-box; font: inherit; padding: 0.5rem; border: 1px solid #c5cbe0; border-radius: 6px; min-height: 3rem; }
.model-choice { display: inline-block; margin: 0 1rem 0.4rem 0; }
.model-choice small { color: #6a7090; }
.hint { color: #6a7090; }
.inline-error { color: #b00020; background: #fde8ec; border: 1px solid #f5c0cb; padding: 0.5rem 0.8rem; border-radius: 6px; }
.warning { color: #8a6d00; }
.model-panel { border-top: 1px solid #eef0f7; padding-top: 0.6rem; margin-top: 0.6rem; }
.model-panel h3 { margin: 0 0 0.4rem; font-size: 0.95rem; }
.model-panel h3 small { color: #6a7090; font-weight: normal; }
.word-strip { display: inline-flex; margin: 0 0.4rem 0.4rem 0; }
.chip { display: inline-block; padding: 0.15rem 0.45rem; border: 1px solid #9aa4cc; border-left-width: 0; background: #eef1fb; font-family: ui-monospace, monospace; font-size: 0.9rem; }
.word-strip .chip:first-child { border-left-width: 1px; border-radius: 5px 0 0 5px; }
.word-strip .chip:last-child { border-radius: 0 5px 5px 0; }
.word-strip .chip:only-child { border-radius: 5px; }
.chip.unknown { background: #fdecec; border-color: #e39898; }
.chip .marker { color: #9aa0bd; }
.chip.continuation { background: #e7f4ee; border-color: #8fc7ab; }
.chip.word-end { background: #fdf3e3; border-color: #dfc08a; }
.panel-stats { color: #4a517a; font-size: 0.9rem; }
.word.corrupted { background: #ffe2a9; border-radius: 4px; padding: 0 0.15rem; }
.corrupted-text { font-size: 1.05rem; line-height: 1.7; }
table.metrics { border-collapse: collapse; font-size: 0.85rem; margin: 0.6rem 0 1rem; }
table.metrics th, table.metrics td { border: 1px solid #d4d9ea; padding: 0.3rem 0.55rem; text-align: right; }
table.metrics th:first-child, table.metrics td:first-child { text-align: left; }
table.metrics td.error { color: #b00020; text-align: left; }
.charts { display: flex; flex-wrap: wrap; gap: 1.2rem; }
.charts figure { margin: 0; }
.charts figcaption { font-size: 0.85rem; color: #4a517a; margin-bottom: 0.3rem; }
svg.chart { width: 460px; height: auto; background: #fbfbfe; border: 1px solid #e3e6f2; border-radius: 6px; }
svg.chart .dots circle { fill: #39508e; }
svg.chart line.fit { stroke: #c0392b; stroke-width: 1.6; }
svg.chart text.fit-label { fill: #c0392b; font-size: 12px; }
svg.chart text.axis, svg.gauge text.axis { fill: #4a517a; font-size: 11px; }
svg.chart text.tick { fill: #6a7090; font-size: 9px; }
svg.chart .bars rect { fill: #5a74b8; }
svg.gauge { width: 170px; height: auto; }
svg.gauge path.track { fill: none; stroke: #e3e6f2; stroke-width: 12; }
svg.gauge path.value { fill: none; stroke: #d98032; stroke-width: 12; }
svg.gauge text.reading { fill: #19203a; font-size: 16px; font-weight: 600; }
.call-to-action { background: #eef4fd; border: 1px solid #bcd2f0; padding: 0.7rem 1rem; border-radius: 6px; }
.call-to-action code { background: #dfe9f9; padding: 0 0.3rem; border-radius: 3px; }
.toolbar { display: flex; gap: 0.8rem; align-items: center; flex-wrap: wrap; margin-bottom: 0.4rem; }
button { font: inherit; padding: 0.35rem 0.9rem; border-radius: 6px; border: 1px solid #39508e; background: #39508e; color: #fff; cursor: pointer; }
button:disabled { background: #b9c0d8; border-color: #b9c0d8; cursor: default; }
input[type="number"], input[type="text"], select { font: inherit; padding: 0.25rem 0.4rem; border: 1px solid #c5cbe0; border-radius: 5px; }
`;
