/**
 * Minimal deterministic SVG plotting: fixed canvas, linear/log axes with
 * tick labels, polyline series, dashed reference markers, legend. No
 * timestamps or randomness; identical inputs yield identical bytes.
 */

export type Scale = "linear" | "log";

export interface Series {
  label: string;
  color: string;
  x: number[];
  y: number[];
}

export interface Marker {
  axis: "x" | "y";
  value: number;
  label: string;
}

export interface PlotSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  xScale: Scale;
  yScale: Scale;
  series: Series[];
  markers: Marker[];
}

const WIDTH = 720;
const HEIGHT = 480;
const MARGIN = { left: 84, right: 24, top: 44, bottom: 56 };

function fmt(v: number): string {
  if (!Number.isFinite(v)) return "0";
  return v.toFixed(2);
}

function tickLabel(v: number): string {
  if (v === 0) return "0";
  const magnitude = Math.abs(v);
  if (magnitude >= 1e4 || magnitude < 1e-2) return v.toExponential(0);
  return String(Number(v.toPrecision(3)));
}

class Axis {
  constructor(
    readonly scale: Scale,
    readonly lo: number,
    readonly hi: number,
    readonly pixelLo: number,
    readonly pixelHi: number,
  ) {}

  place(v: number): number {
    const [a, b] =
      this.scale === "log"
        ? [Math.log10(this.lo), Math.log10(this.hi)]
        : [this.lo, this.hi];
    const t = this.scale === "log" ? Math.log10(v) : v;
    const frac = b === a ? 0.5 : (t - a) / (b - a);
    return this.pixelLo + frac * (this.pixelHi - this.pixelLo);
  }

  ticks(): number[] {
    if (this.scale === "log") {
      const out: number[] = [];
      const lo = Math.ceil(Math.log10(this.lo) - 1e-9);
      const hi = Math.floor(Math.log10(this.hi) + 1e-9);
      for (let d = lo; d <= hi; d += 1) out.push(10 ** d);
      return out.length >= 2 ? out : [this.lo, this.hi];
    }
    const span = this.hi - this.lo;
    if (span <= 0) return [this.lo];
    const step = 10 ** Math.floor(Math.log10(span / 4));
    const mult = span / step > 20 ? 5 : span / step > 10 ? 2 : 1;
    const out: number[] = [];
    const s = step * mult;
    for (let v = Math.ceil(this.lo / s) * s; v <= this.hi + 1e-12; v += s) {
      out.push(Number(v.toPrecision(12)));
    }
    return out;
  }
}

function dataRange(
  values: number[],
  scale: Scale,
): { lo: number; hi: number } {
  const finite = values.filter(
    (v) => Number.isFinite(v) && (scale !== "log" || v > 0),
  );
  if (finite.length === 0) {
    throw new Error("no plottable values for axis");
  }
  let lo = Math.min(...finite);
  let hi = Math.max(...finite);
  if (scale === "log") {
    // clamp the decades so near-zero floors do not swallow the plot
    const top = Math.log10(hi);
    lo = Math.max(lo, 10 ** (top - 14));
    if (lo === hi) hi = lo * 10;
  } else if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  } else {
    const pad = 0.03 * (hi - lo);
    if (lo !== 0) lo -= pad;
    hi += pad;
  }
  return { lo, hi };
}

function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderSvg(spec: PlotSpec): string {
  const xs = spec.series.flatMap((s) => s.x);
  const ys = spec.series.flatMap((s) => s.y);
  const xr = dataRange(xs, spec.xScale);
  const yr = dataRange(ys, spec.yScale);
  const xAxis = new Axis(spec.xScale, xr.lo, xr.hi, MARGIN.left, WIDTH - MARGIN.right);
  const yAxis = new Axis(spec.yScale, yr.lo, yr.hi, HEIGHT - MARGIN.bottom, MARGIN.top);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  parts.push(
    `<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">${escapeXml(spec.title)}</text>`,
  );

  // frame
  const x0 = MARGIN.left;
  const x1 = WIDTH - MARGIN.right;
  const y0 = HEIGHT - MARGIN.bottom;
  const y1 = MARGIN.top;
  parts.push(
    `<rect x="${x0}" y="${y1}" width="${x1 - x0}" height="${y0 - y1}" fill="none" stroke="black"/>`,
  );

  for (const t of xAxis.ticks()) {
    if (t < xr.lo || t > xr.hi) continue;
    const px = fmt(xAxis.place(t));
    parts.push(
      `<line x1="${px}" y1="${y0}" x2="${px}" y2="${y0 + 5}" stroke="black"/>`,
    );
    parts.push(
      `<text x="${px}" y="${y0 + 20}" text-anchor="middle" font-family="sans-serif" font-size="11">${escapeXml(tickLabel(t))}</text>`,
    );
  }
  for (const t of yAxis.ticks()) {
    if (t < yr.lo || t > yr.hi) continue;
    const py = fmt(yAxis.place(t));
    parts.push(
      `<line x1="${x0 - 5}" y1="${py}" x2="${x0}" y2="${py}" stroke="black"/>`,
    );
    parts.push(
      `<text x="${x0 - 8}" y="${py}" text-anchor="end" dominant-baseline="middle" font-family="sans-serif" font-size="11">${escapeXml(tickLabel(t))}</text>`,
    );
  }
  parts.push(
    `<text x="${(x0 + x1) / 2}" y="${HEIGHT - 14}" text-anchor="middle" font-family="sans-serif" font-size="13">${escapeXml(spec.xLabel)}</text>`,
  );
  parts.push(
    `<text x="20" y="${(y0 + y1) / 2}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 20 ${(y0 + y1) / 2})">${escapeXml(spec.yLabel)}</text>`,
  );

  for (const marker of spec.markers) {
    const cls = `marker marker-${marker.axis}`;
    if (marker.axis === "x") {
      if (marker.value < xr.lo || marker.value > xr.hi) continue;
      const px = fmt(xAxis.place(marker.value));
      parts.push(
        `<line class="${cls}" x1="${px}" y1="${y1}" x2="${px}" y2="${y0}" stroke="gray" stroke-dasharray="6 4"/>`,
      );
      parts.push(
        `<text class="marker-label" x="${px}" y="${y1 + 14}" text-anchor="start" font-family="sans-serif" font-size="11" fill="gray"> ${escapeXml(marker.label)}</text>`,
      );
    } else {
      if (marker.value < yr.lo || marker.value > yr.hi) continue;
      const py = fmt(yAxis.place(marker.value));
      parts.push(
        `<line class="${cls}" x1="${x0}" y1="${py}" x2="${x1}" y2="${py}" stroke="gray" stroke-dasharray="6 4"/>`,
      );
      parts.push(
        `<text class="marker-label" x="${x1 - 4}" y="${py}" text-anchor="end" dominant-baseline="text-after-edge" font-family="sans-serif" font-size="11" fill="gray">${escapeXml(marker.label)}</text>`,
      );
    }
  }

  spec.series.forEach((s, i) => {
    const pts: string[] = [];
    for (let k = 0; k < s.x.length; k += 1) {
      const xv = s.x[k]!;
      const yv = s.y[k]!;
      if (!Number.isFinite(xv) || !Number.isFinite(yv)) continue;
      if (spec.xScale === "log" && xv <= 0) continue;
      const yClamped = spec.yScale === "log" ? Math.max(yv, yr.lo) : yv;
      if (spec.yScale === "log" && yClamped <= 0) continue;
      pts.push(`${fmt(xAxis.place(xv))},${fmt(yAxis.place(yClamped))}`);
    }
    parts.push(
      `<polyline class="series" fill="none" stroke="${s.color}" stroke-width="1.5" points="${pts.join(" ")}"/>`,
    );
    const ly = y1 + 16 + i * 16;
    parts.push(
      `<line x1="${x1 - 150}" y1="${ly}" x2="${x1 - 120}" y2="${ly}" stroke="${s.color}" stroke-width="2"/>`,
    );
    parts.push(
      `<text x="${x1 - 114}" y="${ly + 4}" font-family="sans-serif" font-size="12">${escapeXml(s.label)}</text>`,
    );
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
