/**
 * SVG figure construction.
 *
 * Everything is assembled as plain strings from the parsed rows, so the
 * same input bytes always give the same output bytes. The y axis shows
 * rate/p^2 straight from the CSV; the only arithmetic done here is the
 * error bar half-height stderr/p^2 and the two reference curves, which
 * are the unencoded rates p and 7p drawn in the same divided-by-p^2
 * presentation (1/p and 7/p, straight lines on the log-log axes).
 */

import { scaleLog } from "d3-scale";

import type { SweepRow } from "./schema.js";

export interface FigureSize {
  width: number;
  height: number;
}

export type MarkerShape = "circle" | "triangle" | "square" | "diamond";

export interface MethodStyle {
  color: string;
  marker: MarkerShape;
}

// fixed per method so figures from different runs stay comparable
const METHOD_STYLES: Record<string, MethodStyle> = {
  "two-qubit-flagged": { color: "#d97e26", marker: "circle" },
  "shor-cat": { color: "#4d7c43", marker: "triangle" },
};

const FALLBACK_STYLES: readonly MethodStyle[] = [
  { color: "#51718f", marker: "square" },
  { color: "#8458a1", marker: "diamond" },
];

const MARGIN = { top: 24, right: 188, bottom: 56, left: 78 };

export function methodStyle(method: string): MethodStyle {
  const known = METHOD_STYLES[method];
  if (known) {
    return known;
  }
  let hash = 0;
  for (const ch of method) {
    hash = (hash * 31 + ch.codePointAt(0)!) >>> 0;
  }
  return FALLBACK_STYLES[hash % FALLBACK_STYLES.length];
}

export function seriesKey(row: SweepRow): string {
  return `${row.code} ${row.method}`;
}

/** Rows bucketed per (code, method), keys sorted, points sorted by p. */
export function groupSeries(rows: SweepRow[]): Map<string, SweepRow[]> {
  const buckets = new Map<string, SweepRow[]>();
  for (const row of rows) {
    const key = seriesKey(row);
    const bucket = buckets.get(key);
    if (bucket) {
      bucket.push(row);
    } else {
      buckets.set(key, [row]);
    }
  }
  const ordered = [...buckets.entries()].sort(([a], [b]) =>
    a < b ? -1 : a > b ? 1 : 0,
  );
  for (const [, bucket] of ordered) {
    bucket.sort((a, b) => a.p - b.p);
  }
  return new Map(ordered);
}

const f = (value: number): string => value.toFixed(2);

export function renderFigure(
  rows: SweepRow[],
  size: FigureSize = { width: 680, height: 460 },
): string {
  const series = groupSeries(rows);
  const ps = rows.map((r) => r.p);
  const pLo = Math.min(...ps) / 1.4;
  const pHi = Math.max(...ps) * 1.4;

  // the y extent covers both reference curves and every bar end
  const yCandidates = [1 / pLo, 1 / pHi, 7 / pLo, 7 / pHi];
  for (const row of rows) {
    const err = row.stderr / row.p ** 2;
    for (const v of [row.rate_over_p2, row.rate_over_p2 - err, row.rate_over_p2 + err]) {
      if (v > 0) {
        yCandidates.push(v);
      }
    }
  }
  const yLo = Math.min(...yCandidates) / 1.4;
  const yHi = Math.max(...yCandidates) * 1.4;

  const plotRight = size.width - MARGIN.right;
  const plotBottom = size.height - MARGIN.bottom;
  const x = scaleLog().domain([pLo, pHi]).range([MARGIN.left, plotRight]);
  const y = scaleLog().domain([yLo, yHi]).range([plotBottom, MARGIN.top]);
  const yClamped = (value: number): number =>
    y(Math.min(Math.max(value, yLo), yHi));

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${size.width}" height="${size.height}">`,
    `<rect width="${size.width}" height="${size.height}" fill="white"/>`,
  );

  for (const tick of pow10Ticks(pLo, pHi)) {
    const tx = x(tick);
    parts.push(
      `<line x1="${f(tx)}" y1="${f(MARGIN.top)}" x2="${f(tx)}" y2="${f(plotBottom)}" stroke="#e4e4e4"/>`,
      `<text x="${f(tx)}" y="${f(plotBottom + 18)}" text-anchor="middle" font-size="12">${expLabel(tick)}</text>`,
    );
  }
  for (const tick of pow10Ticks(yLo, yHi)) {
    const ty = y(tick);
    parts.push(
      `<line x1="${f(MARGIN.left)}" y1="${f(ty)}" x2="${f(plotRight)}" y2="${f(ty)}" stroke="#e4e4e4"/>`,
      `<text x="${f(MARGIN.left - 6)}" y="${f(ty + 4)}" text-anchor="end" font-size="12">${expLabel(tick)}</text>`,
    );
  }
  parts.push(
    `<rect x="${f(MARGIN.left)}" y="${f(MARGIN.top)}" width="${f(plotRight - MARGIN.left)}" height="${f(plotBottom - MARGIN.top)}" fill="none" stroke="#444"/>`,
    `<text x="${f((MARGIN.left + plotRight) / 2)}" y="${f(size.height - 14)}" text-anchor="middle" font-size="14">p</text>`,
    `<text x="20" y="${f((MARGIN.top + plotBottom) / 2)}" text-anchor="middle" font-size="14" transform="rotate(-90 20 ${f((MARGIN.top + plotBottom) / 2)})">rate / p^2</text>`,
  );

  // unencoded p and 7p, divided by p^2 like everything else
  for (const [factor, label] of [[1, "p"], [7, "7p"]] as const) {
    parts.push(
      `<line class="reference" x1="${f(x(pLo))}" y1="${f(y(factor / pLo))}" x2="${f(x(pHi))}" y2="${f(y(factor / pHi))}" stroke="#909090" stroke-dasharray="5 3"/>`,
      `<text x="${f(x(pHi) - 4)}" y="${f(y(factor / pHi) - 5)}" text-anchor="end" font-size="12" fill="#606060">${label}</text>`,
    );
  }

  let legendY = MARGIN.top + 10;
  for (const [key, points] of series) {
    const style = methodStyle(points[0].method);
    for (const point of points) {
      const cx = x(point.p);
      const err = point.stderr / point.p ** 2;
      if (err > 0) {
        const top = yClamped(point.rate_over_p2 + err);
        const bottom = yClamped(point.rate_over_p2 - err);
        parts.push(
          `<path class="errorbar" d="M ${f(cx - 3)} ${f(top)} H ${f(cx + 3)} M ${f(cx)} ${f(top)} V ${f(bottom)} M ${f(cx - 3)} ${f(bottom)} H ${f(cx + 3)}" stroke="${style.color}" fill="none"/>`,
        );
      }
      parts.push(markerSvg(style, cx, yClamped(point.rate_over_p2)));
    }
    parts.push(
      markerSvg(style, plotRight + 16, legendY - 4),
      `<text class="legend" x="${f(plotRight + 26)}" y="${f(legendY)}" font-size="12">${key}</text>`,
    );
    legendY += 18;
  }

  parts.push("</svg>");
  return parts.join("\n");
}

function markerSvg(style: MethodStyle, cx: number, cy: number): string {
  const s = 4.2;
  switch (style.marker) {
    case "circle":
      return `<circle class="marker" cx="${f(cx)}" cy="${f(cy)}" r="${f(s)}" fill="${style.color}"/>`;
    case "triangle":
      return `<path class="marker" d="M ${f(cx)} ${f(cy - s)} L ${f(cx + 0.87 * s)} ${f(cy + 0.5 * s)} L ${f(cx - 0.87 * s)} ${f(cy + 0.5 * s)} Z" fill="${style.color}"/>`;
    case "square":
      return `<rect class="marker" x="${f(cx - s + 0.5)}" y="${f(cy - s + 0.5)}" width="${f(2 * s - 1)}" height="${f(2 * s - 1)}" fill="${style.color}"/>`;
    case "diamond":
      return `<path class="marker" d="M ${f(cx)} ${f(cy - s)} L ${f(cx + s)} ${f(cy)} L ${f(cx)} ${f(cy + s)} L ${f(cx - s)} ${f(cy)} Z" fill="${style.color}"/>`;
  }
}

function pow10Ticks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (let e = Math.ceil(Math.log10(lo) - 1e-9); ; e += 1) {
    const value = 10 ** e;
    if (value > hi * (1 + 1e-9)) {
      break;
    }
    ticks.push(value);
  }
  return ticks;
}

function expLabel(value: number): string {
  const e = Math.round(Math.log10(value));
  return `1e${e}`;
}
