/**
 * Hand-rolled SVG rendering.
 *
 * Fixed layout, fixed tick placement, fixed number formatting, no randomness
 * and no clock reads: identical inputs always produce byte-identical files.
 * Non-finite samples break a line into segments instead of poisoning the
 * scale; a fully non-finite series is a schema error.
 */

import { SchemaError } from "./csv";

export const WIDTH = 900;
const PANEL_H = 250;
const MARGIN = { top: 34, right: 18, bottom: 46, left: 72 };
const INNER_W = WIDTH - MARGIN.left - MARGIN.right;
const INNER_H = PANEL_H - MARGIN.top - MARGIN.bottom;

const AXIS = "#333333";
const GRID = "#e0e0e0";

export interface Series {
  label: string;
  x: ArrayLike<number>;
  y: ArrayLike<number>;
  color: string;
  dash?: string;
}

export interface Panel {
  title: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
}

export interface BarGroup {
  /** Group caption drawn under its cluster of bars (one group per metric). */
  label: string;
  entries: { label: string; value: number; color: string }[];
}

const escapeText = (s: string) =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

/** Pixel coordinate: two fixed decimals, normalising the "-0.00" artefact. */
const px = (v: number) => {
  const s = v.toFixed(2);
  return s === "-0.00" ? "0.00" : s;
};

function niceNum(range: number, round: boolean): number {
  const exp = Math.floor(Math.log10(range));
  const f = range / 10 ** exp;
  let nf: number;
  if (round) nf = f < 1.5 ? 1 : f < 3 ? 2 : f < 7 ? 5 : 10;
  else nf = f <= 1 ? 1 : f <= 2 ? 2 : f <= 5 ? 5 : 10;
  return nf * 10 ** exp;
}

export interface TickSpec {
  ticks: number[];
  lo: number;
  hi: number;
  step: number;
}

/** Round-number ticks covering [lo, hi]; degenerate ranges get padded. */
export function niceTicks(lo: number, hi: number, count = 5): TickSpec {
  if (!Number.isFinite(lo) || !Number.isFinite(hi)) {
    throw new SchemaError("cannot scale a non-finite axis range");
  }
  if (lo === hi) {
    const pad = lo === 0 ? 1 : Math.abs(lo) * 0.1;
    lo -= pad;
    hi += pad;
  }
  const step = niceNum(niceNum(hi - lo, false) / (count - 1), true);
  const first = Math.floor(lo / step) * step;
  const last = Math.ceil(hi / step) * step;
  const ticks: number[] = [];
  for (let i = 0; ; i++) {
    const v = first + i * step;
    if (v > last + step * 0.5) break;
    ticks.push(v);
  }
  return { ticks, lo: first, hi: last, step };
}

function tickLabel(value: number, step: number): string {
  let v = value;
  if (Math.abs(v) < step * 1e-9) v = 0;
  if (v !== 0 && (Math.abs(v) >= 1e6 || Math.abs(v) < 1e-4)) return v.toExponential(1);
  const decimals = Math.max(0, -Math.floor(Math.log10(step) + 1e-9));
  return v.toFixed(Math.min(decimals, 6));
}

/** Bar annotation: four significant digits, trailing zeros trimmed. */
export function barLabel(v: number): string {
  if (v !== 0 && (Math.abs(v) >= 1e4 || Math.abs(v) < 1e-3)) return v.toExponential(2);
  return v.toPrecision(4).replace(/(\.\d*?)0+$/, "$1").replace(/\.$/, "");
}

function finiteExtent(panel: Panel, pick: (s: Series, i: number) => number): [number, number] {
  let lo = Number.POSITIVE_INFINITY;
  let hi = Number.NEGATIVE_INFINITY;
  for (const s of panel.series) {
    const n = Math.min(s.x.length, s.y.length);
    for (let i = 0; i < n; i++) {
      if (!Number.isFinite(s.x[i]) || !Number.isFinite(s.y[i])) continue;
      const v = pick(s, i);
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
  }
  if (lo > hi) {
    throw new SchemaError(`no finite samples to plot in panel '${panel.title}'`);
  }
  return [lo, hi];
}

function seriesPath(s: Series, sx: (v: number) => number, sy: (v: number) => number): string {
  let out = "";
  let pts: string[] = [];
  const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
  const flush = () => {
    if (pts.length > 1) {
      out += `<polyline fill="none" stroke="${s.color}"${dash} stroke-width="1.3" points="${pts.join(" ")}"/>`;
    } else if (pts.length === 1) {
      const [x, y] = pts[0].split(",");
      out += `<circle cx="${x}" cy="${y}" r="2" fill="${s.color}"/>`;
    }
    pts = [];
  };
  const n = Math.min(s.x.length, s.y.length);
  for (let i = 0; i < n; i++) {
    if (Number.isFinite(s.x[i]) && Number.isFinite(s.y[i])) {
      pts.push(`${px(sx(s.x[i]))},${px(sy(s.y[i]))}`);
    } else {
      flush();
    }
  }
  flush();
  return out;
}

function legend(series: { label: string; color: string; dash?: string }[], rightX: number, y: number): string {
  let out = "";
  let x = rightX;
  for (let i = series.length - 1; i >= 0; i--) {
    const s = series[i];
    const w = s.label.length * 6.5 + 26;
    x -= w;
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
    out += `<line x1="${px(x)}" y1="${px(y - 4)}" x2="${px(x + 16)}" y2="${px(y - 4)}" stroke="${s.color}"${dash} stroke-width="2"/>`;
    out += `<text x="${px(x + 20)}" y="${px(y)}" fill="${AXIS}">${escapeText(s.label)}</text>`;
  }
  return out;
}

function renderPanel(panel: Panel, offsetY: number): string {
  const [xloRaw, xhiRaw] = finiteExtent(panel, (s, i) => Number(s.x[i]));
  const [yloRaw, yhiRaw] = finiteExtent(panel, (s, i) => Number(s.y[i]));
  const xt = niceTicks(xloRaw, xhiRaw, 7);
  const yt = niceTicks(yloRaw, yhiRaw, 5);

  const top = offsetY + MARGIN.top;
  const sx = (v: number) => MARGIN.left + ((v - xt.lo) / (xt.hi - xt.lo)) * INNER_W;
  const sy = (v: number) => top + INNER_H - ((v - yt.lo) / (yt.hi - yt.lo)) * INNER_H;

  let out = `<g>`;
  out += `<text x="${MARGIN.left}" y="${px(offsetY + 18)}" font-weight="bold" fill="${AXIS}">${escapeText(panel.title)}</text>`;
  out += legend(panel.series, WIDTH - MARGIN.right, offsetY + 18);

  for (const v of xt.ticks) {
    const x = px(sx(v));
    out += `<line x1="${x}" y1="${px(top)}" x2="${x}" y2="${px(top + INNER_H)}" stroke="${GRID}"/>`;
    out += `<text x="${x}" y="${px(top + INNER_H + 16)}" text-anchor="middle" fill="${AXIS}">${tickLabel(v, xt.step)}</text>`;
  }
  for (const v of yt.ticks) {
    const y = px(sy(v));
    out += `<line x1="${MARGIN.left}" y1="${y}" x2="${WIDTH - MARGIN.right}" y2="${y}" stroke="${GRID}"/>`;
    out += `<text x="${MARGIN.left - 6}" y="${y}" dy="4" text-anchor="end" fill="${AXIS}">${tickLabel(v, yt.step)}</text>`;
  }
  out += `<rect x="${MARGIN.left}" y="${px(top)}" width="${INNER_W}" height="${INNER_H}" fill="none" stroke="${AXIS}"/>`;

  for (const s of panel.series) out += seriesPath(s, sx, sy);

  out += `<text x="${px(MARGIN.left + INNER_W / 2)}" y="${px(top + INNER_H + 34)}" text-anchor="middle" fill="${AXIS}">${escapeText(panel.xLabel)}</text>`;
  out += `<text x="16" y="${px(top + INNER_H / 2)}" text-anchor="middle" fill="${AXIS}" transform="rotate(-90 16 ${px(top + INNER_H / 2)})">${escapeText(panel.yLabel)}</text>`;
  out += `</g>\n`;
  return out;
}

export function svgDocument(width: number, height: number, body: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif" font-size="11">\n` +
    `<rect width="${width}" height="${height}" fill="#ffffff"/>\n` +
    body +
    `</svg>\n`
  );
}

/** Stack panels vertically into one figure document. */
export function renderPanels(panels: Panel[]): string {
  let body = "";
  for (let i = 0; i < panels.length; i++) body += renderPanel(panels[i], i * PANEL_H);
  return svgDocument(WIDTH, panels.length * PANEL_H + 6, body);
}

/**
 * Small-multiple bar chart: one sub-axis per group so metrics of very
 * different magnitude stay readable, bars within a group compared directly.
 */
export function renderBarGroups(title: string, groups: BarGroup[]): string {
  if (groups.length === 0) throw new SchemaError("no bar groups to draw");
  const height = 300;
  const innerH = height - MARGIN.top - MARGIN.bottom;
  const groupW = INNER_W / groups.length;

  let body = `<text x="${MARGIN.left}" y="18" font-weight="bold" fill="${AXIS}">${escapeText(title)}</text>`;

  const entryLabels: { label: string; color: string }[] = [];
  for (const e of groups[0].entries) entryLabels.push({ label: e.label, color: e.color });
  body += legend(entryLabels, WIDTH - MARGIN.right, 18);

  for (let g = 0; g < groups.length; g++) {
    const group = groups[g];
    const left = MARGIN.left + g * groupW;
    const axisW = groupW - 34;
    let hi = 0;
    for (const e of group.entries) {
      if (!Number.isFinite(e.value)) {
        throw new SchemaError(`non-finite value for '${group.label}' (${e.label})`);
      }
      if (e.value > hi) hi = e.value;
      if (e.value < 0) throw new SchemaError(`negative value for '${group.label}' (${e.label})`);
    }
    const yt = niceTicks(0, hi === 0 ? 1 : hi * 1.02, 4);
    const sy = (v: number) => MARGIN.top + innerH - (v / yt.hi) * innerH;

    for (const v of yt.ticks) {
      const y = px(sy(v));
      body += `<line x1="${px(left)}" y1="${y}" x2="${px(left + axisW)}" y2="${y}" stroke="${GRID}"/>`;
      body += `<text x="${px(left - 4)}" y="${y}" dy="4" text-anchor="end" font-size="9" fill="${AXIS}">${tickLabel(v, yt.step)}</text>`;
    }
    body += `<rect x="${px(left)}" y="${MARGIN.top}" width="${px(axisW)}" height="${innerH}" fill="none" stroke="${AXIS}"/>`;

    const n = group.entries.length;
    const slot = axisW / n;
    const barW = Math.min(56, slot * 0.6);
    for (let i = 0; i < n; i++) {
      const e = group.entries[i];
      const cx = left + slot * (i + 0.5);
      const y = sy(e.value);
      body += `<rect x="${px(cx - barW / 2)}" y="${px(y)}" width="${px(barW)}" height="${px(MARGIN.top + innerH - y)}" fill="${e.color}"/>`;
      body += `<text x="${px(cx)}" y="${px(y - 4)}" text-anchor="middle" font-size="10" fill="${AXIS}">${barLabel(e.value)}</text>`;
    }
    body += `<text x="${px(left + axisW / 2)}" y="${px(MARGIN.top + innerH + 18)}" text-anchor="middle" fill="${AXIS}">${escapeText(group.label)}</text>`;
  }
  return svgDocument(WIDTH, height, body + "\n");
}
