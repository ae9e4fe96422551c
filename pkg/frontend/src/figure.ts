/**
 * SVG figure construction: scaled MSE against the sweep variable, one line
 * with a shaded confidence band per estimator, one panel per (n, k) pair.
 *
 * Rendering is a pure function of the parsed rows: no statistics happen
 * here, the ci_low/ci_high columns are drawn verbatim.
 */

import { SweepRow } from "./csv.js";

export type XAxis = "sigma" | "mu";

export interface FigureOptions {
  xAxis: XAxis;
  logX?: boolean;
  logY?: boolean;
  width?: number;
  height?: number;
}

const SERIES_ORDER = ["soft", "hard", "linear", "soft-linear", "zero"];

const COLORS: Record<string, string> = {
  soft: "#1f77b4",
  hard: "#d62728",
  linear: "#2ca02c",
  "soft-linear": "#9467bd",
  zero: "#7f7f7f",
};

const X_LABELS: Record<XAxis, string> = {
  sigma: "noise standard deviation σ",
  mu: "signal-to-noise ratio μ",
};

const Y_LABEL = "scaled MSE";

const fmt = (v: number): string => Number(v.toPrecision(6)).toString();

interface Series {
  estimator: string;
  points: { x: number; y: number; lo: number; hi: number }[];
}

interface Panel {
  n: number;
  k: number;
  series: Series[];
}

function groupPanels(rows: SweepRow[], xAxis: XAxis): Panel[] {
  const panels = new Map<string, Panel>();
  for (const row of rows) {
    const key = `${row.n}|${row.k}`;
    let panel = panels.get(key);
    if (!panel) {
      panel = { n: row.n, k: row.k, series: [] };
      panels.set(key, panel);
    }
    let series = panel.series.find((s) => s.estimator === row.estimator);
    if (!series) {
      series = { estimator: row.estimator, points: [] };
      panel.series.push(series);
    }
    series.points.push({
      x: xAxis === "sigma" ? row.sigma : row.mu,
      y: row.mse_scaled,
      lo: row.ci_low,
      hi: row.ci_high,
    });
  }
  const ordered = [...panels.values()].sort((a, b) => a.n - b.n || a.k - b.k);
  for (const panel of ordered) {
    panel.series.sort(
      (a, b) =>
        orderIndex(a.estimator) - orderIndex(b.estimator) ||
        a.estimator.localeCompare(b.estimator),
    );
    for (const s of panel.series) {
      s.points.sort((a, b) => a.x - b.x);
    }
  }
  return ordered;
}

function orderIndex(name: string): number {
  const i = SERIES_ORDER.indexOf(name);
  return i === -1 ? SERIES_ORDER.length : i;
}

interface Scale {
  (v: number): number;
  ticks: number[];
}

function makeScale(values: number[], lo: number, hi: number, log: boolean): Scale {
  let min = Math.min(...values);
  let max = Math.max(...values);
  if (log) {
    const positive = values.filter((v) => v > 0);
    if (positive.length === 0) {
      throw new Error("log scale requested but no positive values");
    }
    min = Math.min(...positive);
    max = Math.max(...positive);
    const a = Math.log10(min);
    const b = Math.log10(max);
    const span = b - a || 1;
    const scale = ((v: number) =>
      lo + ((Math.log10(Math.max(v, min)) - a) / span) * (hi - lo)) as Scale;
    const ticks: number[] = [];
    for (let p = Math.ceil(a); p <= Math.floor(b); p++) ticks.push(10 ** p);
    scale.ticks = ticks.length >= 2 ? ticks : [min, max];
    return scale;
  }
  if (min === max) {
    min -= 0.5;
    max += 0.5;
  }
  const span = max - min;
  const scale = ((v: number) => lo + ((v - min) / span) * (hi - lo)) as Scale;
  const count = 5;
  scale.ticks = Array.from({ length: count }, (_, i) => min + (span * i) / (count - 1));
  return scale;
}

/** Build the full SVG document for the given rows. */
export function buildFigureSvg(rows: SweepRow[], opts: FigureOptions): string {
  if (rows.length === 0) {
    throw new Error("no rows to plot");
  }
  const panels = groupPanels(rows, opts.xAxis);
  const panelWidth = opts.width ?? 480;
  const height = opts.height ?? 360;
  const margin = { left: 64, right: 16, top: 40, bottom: 48 };
  const legendWidth = 130;
  const width = panels.length * panelWidth + legendWidth;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
  );
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);

  const estimators: string[] = [];
  for (const panel of panels) {
    for (const s of panel.series) {
      if (!estimators.includes(s.estimator)) estimators.push(s.estimator);
    }
  }
  estimators.sort((a, b) => orderIndex(a) - orderIndex(b) || a.localeCompare(b));

  panels.forEach((panel, p) => {
    const x0 = p * panelWidth + margin.left;
    const x1 = (p + 1) * panelWidth - margin.right;
    const y0 = height - margin.bottom;
    const y1 = margin.top;
    const xs = panel.series.flatMap((s) => s.points.map((pt) => pt.x));
    const ys = panel.series.flatMap((s) => s.points.flatMap((pt) => [pt.lo, pt.hi, pt.y]));
    const xScale = makeScale(xs, x0, x1, !!opts.logX);
    const yScale = makeScale(ys, y0, y1, !!opts.logY);

    parts.push(`<g class="panel" data-n="${panel.n}" data-k="${panel.k}">`);
    parts.push(
      `<text class="panel-title" x="${(x0 + x1) / 2}" y="${y1 - 16}" text-anchor="middle" ` +
        `font-size="13">n=${panel.n}, k=${panel.k}</text>`,
    );
    // axes
    parts.push(
      `<line x1="${x0}" y1="${y0}" x2="${x1}" y2="${y0}" stroke="black" stroke-width="1"/>`,
    );
    parts.push(
      `<line x1="${x0}" y1="${y0}" x2="${x0}" y2="${y1}" stroke="black" stroke-width="1"/>`,
    );
    for (const t of xScale.ticks) {
      const px = xScale(t);
      parts.push(`<line x1="${fmt(px)}" y1="${y0}" x2="${fmt(px)}" y2="${y0 + 4}" stroke="black"/>`);
      parts.push(
        `<text class="x-tick" x="${fmt(px)}" y="${y0 + 18}" text-anchor="middle" font-size="11">${fmt(t)}</text>`,
      );
    }
    for (const t of yScale.ticks) {
      const py = yScale(t);
      parts.push(`<line x1="${x0 - 4}" y1="${fmt(py)}" x2="${x0}" y2="${fmt(py)}" stroke="black"/>`);
      parts.push(
        `<text class="y-tick" x="${x0 - 8}" y="${fmt(py + 4)}" text-anchor="end" font-size="11">${fmt(t)}</text>`,
      );
    }
    parts.push(
      `<text class="x-label" x="${(x0 + x1) / 2}" y="${height - 10}" text-anchor="middle" ` +
        `font-size="12">${X_LABELS[opts.xAxis]}</text>`,
    );
    parts.push(
      `<text class="y-label" x="16" y="${(y0 + y1) / 2}" text-anchor="middle" font-size="12" ` +
        `transform="rotate(-90 16 ${(y0 + y1) / 2})">${Y_LABEL}</text>`,
    );

    for (const s of panel.series) {
      const color = COLORS[s.estimator] ?? "#000000";
      const band =
        s.points.map((pt) => `${fmt(xScale(pt.x))},${fmt(yScale(pt.hi))}`).join(" ") +
        " " +
        [...s.points]
          .reverse()
          .map((pt) => `${fmt(xScale(pt.x))},${fmt(yScale(pt.lo))}`)
          .join(" ");
      parts.push(
        `<polygon class="ci-band" data-estimator="${s.estimator}" points="${band}" ` +
          `fill="${color}" fill-opacity="0.15" stroke="none"/>`,
      );
      const line = s.points
        .map((pt) => `${fmt(xScale(pt.x))},${fmt(yScale(pt.y))}`)
        .join(" ");
      parts.push(
        `<polyline class="series-line" data-estimator="${s.estimator}" points="${line}" ` +
          `fill="none" stroke="${color}" stroke-width="1.6"/>`,
      );
      for (const pt of s.points) {
        parts.push(
          `<circle class="marker" data-estimator="${s.estimator}" cx="${fmt(xScale(pt.x))}" ` +
            `cy="${fmt(yScale(pt.y))}" r="2.4" fill="${color}"/>`,
        );
      }
    }
    parts.push("</g>");
  });

  // legend
  const lx = panels.length * panelWidth + 8;
  parts.push(`<g class="legend">`);
  estimators.forEach((name, i) => {
    const ly = margin.top + i * 22;
    const color = COLORS[name] ?? "#000000";
    parts.push(
      `<rect class="legend-swatch" x="${lx}" y="${ly}" width="14" height="14" fill="${color}"/>`,
    );
    parts.push(
      `<text class="legend-label" x="${lx + 20}" y="${ly + 11}" font-size="12">${name}</text>`,
    );
  });
  parts.push("</g>");
  parts.push("</svg>");
  return parts.join("\n");
}
