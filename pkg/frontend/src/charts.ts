// Hand-rolled inline SVG so exported snapshots need no runtime dependency.

export type XY = { x: number; y: number };

function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!Number.isFinite(lo)) return [0, 1];
  return lo === hi ? [lo - 1, hi + 1] : [lo, hi];
}

export function scatterWithLine(
  points: XY[],
  line: { slope: number; intercept: number; label: string } | null,
  axes: { x: string; y: string },
): string {
  const W = 460;
  const H = 300;
  const PAD = 42;
  const [xmin, xmax] = extent(points.map((p) => p.x));
  const [ymin, ymax] = extent(points.map((p) => p.y));
  const sx = (x: number) => PAD + ((x - xmin) / (xmax - xmin)) * (W - 2 * PAD);
  const sy = (y: number) => H - PAD - ((y - ymin) / (ymax - ymin)) * (H - 2 * PAD);
  const dots = points
    .map((p) => `<circle cx="${sx(p.x).toFixed(1)}" cy="${sy(p.y).toFixed(1)}" r="1.5"/>`)
    .join("");
  let overlay = "";
  if (line) {
    const y1 = line.intercept + line.slope * xmin;
    const y2 = line.intercept + line.slope * xmax;
    overlay =
      `<line class="fit" x1="${sx(xmin).toFixed(1)}" y1="${sy(y1).toFixed(1)}"` +
      ` x2="${sx(xmax).toFixed(1)}" y2="${sy(y2).toFixed(1)}"/>` +
      `<text class="fit-label" x="${W - PAD}" y="${PAD - 12}" text-anchor="end">${line.label}</text>`;
  }
  return (
    `<svg class="chart" viewBox="0 0 ${W} ${H}" role="img">` +
    `<g class="dots">${dots}</g>${overlay}` +
    `<text class="axis" x="${W / 2}" y="${H - 8}" text-anchor="middle">${axes.x}</text>` +
    `<text class="axis" x="12" y="${H / 2}" transform="rotate(-90 12 ${H / 2})">${axes.y}</text>` +
    `</svg>`
  );
}

export function bars(entries: { label: string; value: number }[], yLabel: string): string {
  const W = 460;
  const H = 220;
  const PAD = 36;
  if (entries.length === 0) return `<svg class="chart" viewBox="0 0 ${W} ${H}"></svg>`;
  const max = Math.max(...entries.map((e) => e.value), 1);
  const band = (W - 2 * PAD) / entries.length;
  const rects = entries
    .map((e, i) => {
      const height = ((H - 2 * PAD) * e.value) / max;
      const x = PAD + i * band;
      return (
        `<rect x="${(x + band * 0.1).toFixed(1)}" y="${(H - PAD - height).toFixed(1)}"` +
        ` width="${(band * 0.8).toFixed(1)}" height="${height.toFixed(1)}"><title>${e.label}: ${e.value}</title></rect>` +
        (entries.length <= 24
          ? `<text class="tick" x="${(x + band / 2).toFixed(1)}" y="${H - PAD + 14}" text-anchor="middle">${e.label}</text>`
          : "")
      );
    })
    .join("");
  return (
    `<svg class="chart" viewBox="0 0 ${W} ${H}" role="img">` +
    `<g class="bars">${rects}</g>` +
    `<text class="axis" x="12" y="${H / 2}" transform="rotate(-90 12 ${H / 2})">${yLabel}</text>` +
    `</svg>`
  );
}

/** Semi-circular gauge for a fraction in [0, 1]. */
export function gauge(fraction: number, label: string): string {
  const W = 170;
  const H = 110;
  const cx = W / 2;
  const cy = H - 16;
  const r = 62;
  const angle = Math.PI * Math.min(Math.max(fraction, 0), 1);
  const x = cx - r * Math.cos(angle);
  const y = cy - r * Math.sin(angle);
  const large = angle > Math.PI / 2 ? 0 : 0;
  return (
    `<svg class="gauge" viewBox="0 0 ${W} ${H}" role="img">` +
    `<path class="track" d="M ${cx - r} ${cy} A ${r} ${r} 0 0 1 ${cx + r} ${cy}"/>` +
    `<path class="value" d="M ${cx - r} ${cy} A ${r} ${r} 0 ${large} 1 ${x.toFixed(1)} ${y.toFixed(1)}"/>` +
    `<text class="reading" x="${cx}" y="${cy - 10}" text-anchor="middle">${(fraction * 100).toFixed(1)}%</text>` +
    `<text class="axis" x="${cx}" y="${H - 2}" text-anchor="middle">${label}</text>` +
    `</svg>`
  );
}
