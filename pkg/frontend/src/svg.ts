/**
 * Deterministic SVG rendering of phase-transition curves.
 *
 * One figure per call: log-scaled delta axis spanning [1e-6, 1], linear rho
 * axis, one polyline per curve (split into segments at unsolved points), a
 * legend, and an optional title. Output contains no timestamps or other
 * varying metadata beyond a single source comment, so renders are stable
 * byte for byte.
 */

import type { CurveFile } from "./csv.js";

export interface Style {
  title?: string;
  width?: number;
  height?: number;
}

const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#17becf",
];

const MARGIN = { top: 44, right: 150, bottom: 48, left: 66 };
const X_LOG_MIN = -6;
const X_LOG_MAX = 0;

function fmt(value: number): string {
  return value.toFixed(2);
}

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Round a tick step to 1/2/5 times a power of ten. */
function niceStep(raw: number): number {
  const power = Math.pow(10, Math.floor(Math.log10(raw)));
  const unit = raw / power;
  if (unit <= 1) return power;
  if (unit <= 2) return 2 * power;
  if (unit <= 5) return 5 * power;
  return 10 * power;
}

function yTicks(max: number): number[] {
  const step = niceStep(max / 5);
  const ticks: number[] = [];
  for (let v = 0; v <= max + 1e-12; v += step) {
    ticks.push(v);
  }
  return ticks;
}

function trimNumber(value: number): string {
  // compact deterministic tick label (avoids 0.30000000000000004 style noise)
  return Number(value.toPrecision(6)).toString();
}

export function render(curves: CurveFile, style: Style = {}): string {
  const width = style.width ?? 760;
  const height = style.height ?? 520;
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;

  const finite = curves.series.flat().filter((v): v is number => v !== null);
  if (finite.length === 0) {
    throw new Error("no solved points to plot");
  }
  const yMax = Math.max(...finite) * 1.05;

  const xOf = (delta: number): number =>
    MARGIN.left + ((Math.log10(delta) - X_LOG_MIN) / (X_LOG_MAX - X_LOG_MIN)) * plotW;
  const yOf = (rho: number): number => MARGIN.top + plotH - (rho / yMax) * plotH;

  const parts: string[] = [];
  parts.push(`<?xml version="1.0" encoding="UTF-8"?>`);
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
  );
  parts.push(`<!-- plotfig source=${esc(curves.path)} -->`);
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);

  // frame and grid
  const axisBottom = MARGIN.top + plotH;
  const axisRight = MARGIN.left + plotW;
  for (let decade = X_LOG_MIN; decade <= X_LOG_MAX; decade++) {
    const x = fmt(xOf(Math.pow(10, decade)));
    parts.push(
      `<line x1="${x}" y1="${MARGIN.top}" x2="${x}" y2="${axisBottom}" ` +
        `stroke="#dddddd" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="${x}" y="${fmt(axisBottom + 18)}" text-anchor="middle" ` +
        `font-size="12">1e${decade}</text>`,
    );
  }
  for (const tick of yTicks(yMax)) {
    const y = fmt(yOf(tick));
    parts.push(
      `<line x1="${MARGIN.left}" y1="${y}" x2="${axisRight}" y2="${y}" ` +
        `stroke="#dddddd" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="${fmt(MARGIN.left - 8)}" y="${y}" text-anchor="end" ` +
        `dominant-baseline="middle" font-size="12">${trimNumber(tick)}</text>`,
    );
  }
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" ` +
      `fill="none" stroke="#333333" stroke-width="1"/>`,
  );
  parts.push(
    `<text x="${fmt(MARGIN.left + plotW / 2)}" y="${fmt(height - 10)}" ` +
      `text-anchor="middle" font-size="13">delta = n/N (log scale)</text>`,
  );
  parts.push(
    `<text x="16" y="${fmt(MARGIN.top + plotH / 2)}" text-anchor="middle" ` +
      `font-size="13" transform="rotate(-90 16 ${fmt(MARGIN.top + plotH / 2)})">rho = s/n</text>`,
  );
  if (style.title) {
    parts.push(
      `<text x="${fmt(MARGIN.left + plotW / 2)}" y="24" text-anchor="middle" ` +
        `font-size="15" font-weight="bold">${esc(style.title)}</text>`,
    );
  }

  // one polyline per curve, broken at unsolved points
  curves.labels.forEach((label, index) => {
    const color = PALETTE[index % PALETTE.length];
    const segments: string[][] = [];
    let current: string[] = [];
    curves.series[index].forEach((rho, j) => {
      if (rho === null) {
        if (current.length > 0) {
          segments.push(current);
          current = [];
        }
        return;
      }
      current.push(`${fmt(xOf(curves.deltas[j]))},${fmt(yOf(rho))}`);
    });
    if (current.length > 0) {
      segments.push(current);
    }
    for (const segment of segments) {
      parts.push(
        `<polyline fill="none" stroke="${color}" stroke-width="1.8" ` +
          `data-label="${esc(label)}" points="${segment.join(" ")}"/>`,
      );
    }
  });

  // legend
  curves.labels.forEach((label, index) => {
    const color = PALETTE[index % PALETTE.length];
    const y = MARGIN.top + 10 + index * 20;
    const x0 = axisRight + 14;
    parts.push(
      `<line x1="${x0}" y1="${y}" x2="${x0 + 24}" y2="${y}" ` +
        `stroke="${color}" stroke-width="1.8"/>`,
    );
    parts.push(
      `<text x="${x0 + 30}" y="${y}" dominant-baseline="middle" ` +
        `font-size="12">${esc(label)}</text>`,
    );
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
