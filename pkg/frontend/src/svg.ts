/**
 * Deterministic SVG boxplot of solution-quality ratios per machine count.
 *
 * One box per machine count: quartile box with median line, whiskers at
 * configurable percentiles (2nd and 98th by default) with caps, cross
 * markers for points outside the whiskers, and a dashed reference line
 * at ratio 1, the optimum.  Every box group carries its statistics as
 * data attributes so renders can be checked against an independent
 * recomputation.
 */

import { BoxStats, boxStats } from "./stats";

export interface PlotOptions {
  pLow?: number;
  pHigh?: number;
  width?: number;
  height?: number;
}

const MARGIN = { top: 24, right: 24, bottom: 52, left: 64 };

function fmt(x: number): string {
  return x.toFixed(2);
}

function data(x: number): string {
  return x.toFixed(6);
}

export function renderBoxplot(byMachines: Map<number, number[]>, opts: PlotOptions = {}): string {
  const { pLow = 2, pHigh = 98, width = 640, height = 420 } = opts;
  if (pLow < 0 || pHigh > 100 || pLow >= pHigh) {
    throw new Error(`invalid whisker percentiles (${pLow}, ${pHigh})`);
  }
  if (byMachines.size === 0) {
    throw new Error("no records to plot");
  }
  const stats = new Map<number, BoxStats>();
  for (const [m, values] of byMachines) {
    stats.set(m, boxStats(values, pLow, pHigh));
  }

  let yMin = 1;
  let yMax = 1;
  for (const [, s] of stats) {
    yMin = Math.min(yMin, s.whiskerLow, ...s.outliers);
    yMax = Math.max(yMax, s.whiskerHigh, ...s.outliers);
  }
  const pad = yMax > yMin ? 0.06 * (yMax - yMin) : 0.05;
  yMin -= pad;
  yMax += pad;

  const innerW = width - MARGIN.left - MARGIN.right;
  const innerH = height - MARGIN.top - MARGIN.bottom;
  const yScale = (v: number) => MARGIN.top + ((yMax - v) / (yMax - yMin)) * innerH;

  const machines = [...stats.keys()];
  const slot = innerW / machines.length;
  const boxW = slot * 0.5;
  const xCenter = (idx: number) => MARGIN.left + slot * (idx + 0.5);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" data-ymin="${data(yMin)}" data-ymax="${data(yMax)}" ` +
      `data-plot-top="${MARGIN.top}" data-plot-height="${innerH}">`
  );
  parts.push(`<rect x="0" y="0" width="${width}" height="${height}" fill="white"/>`);

  // y axis with a handful of ticks
  const axisX = MARGIN.left;
  parts.push(
    `<line x1="${axisX}" y1="${MARGIN.top}" x2="${axisX}" y2="${MARGIN.top + innerH}" stroke="black"/>`
  );
  for (let t = 0; t <= 4; t++) {
    const v = yMin + ((yMax - yMin) * t) / 4;
    const y = yScale(v);
    parts.push(`<line x1="${axisX - 5}" y1="${fmt(y)}" x2="${axisX}" y2="${fmt(y)}" stroke="black"/>`);
    parts.push(
      `<text x="${axisX - 9}" y="${fmt(y + 4)}" text-anchor="end" font-size="12">${v.toFixed(2)}</text>`
    );
  }
  parts.push(
    `<text x="16" y="${fmt(MARGIN.top + innerH / 2)}" font-size="13" ` +
      `transform="rotate(-90 16 ${fmt(MARGIN.top + innerH / 2)})" text-anchor="middle">ratio</text>`
  );

  // x axis: one category per machine count, labelled "machines m"
  const baseY = MARGIN.top + innerH;
  parts.push(
    `<line x1="${axisX}" y1="${baseY}" x2="${MARGIN.left + innerW}" y2="${baseY}" stroke="black"/>`
  );
  machines.forEach((m, idx) => {
    parts.push(
      `<text x="${fmt(xCenter(idx))}" y="${baseY + 20}" text-anchor="middle" font-size="12">${m}</text>`
    );
  });
  parts.push(
    `<text x="${fmt(MARGIN.left + innerW / 2)}" y="${height - 12}" text-anchor="middle" ` +
      `font-size="13">machines m</text>`
  );

  // dashed reference line at the optimum ratio 1
  const yOne = yScale(1);
  parts.push(
    `<line class="reference" x1="${axisX}" y1="${fmt(yOne)}" x2="${MARGIN.left + innerW}" ` +
      `y2="${fmt(yOne)}" stroke="black" stroke-dasharray="4 3" data-ratio="1"/>`
  );

  machines.forEach((m, idx) => {
    const s = stats.get(m)!;
    const cx = xCenter(idx);
    const left = cx - boxW / 2;
    const right = cx + boxW / 2;
    const capW = boxW / 2;
    parts.push(
      `<g class="box-group" data-m="${m}" data-q1="${data(s.q1)}" data-median="${data(s.median)}" ` +
        `data-q3="${data(s.q3)}" data-whisker-low="${data(s.whiskerLow)}" ` +
        `data-whisker-high="${data(s.whiskerHigh)}" data-samples="${s.samples}" ` +
        `data-outliers="${s.outliers.length}">`
    );
    // whiskers with caps
    parts.push(
      `<line class="whisker" x1="${fmt(cx)}" y1="${fmt(yScale(s.q1))}" x2="${fmt(cx)}" y2="${fmt(
        yScale(s.whiskerLow)
      )}" stroke="black"/>`
    );
    parts.push(
      `<line class="whisker" x1="${fmt(cx)}" y1="${fmt(yScale(s.q3))}" x2="${fmt(cx)}" y2="${fmt(
        yScale(s.whiskerHigh)
      )}" stroke="black"/>`
    );
    for (const w of [s.whiskerLow, s.whiskerHigh]) {
      parts.push(
        `<line class="whisker-cap" x1="${fmt(cx - capW / 2)}" y1="${fmt(yScale(w))}" ` +
          `x2="${fmt(cx + capW / 2)}" y2="${fmt(yScale(w))}" stroke="black"/>`
      );
    }
    // quartile box and median line
    parts.push(
      `<rect class="box" x="${fmt(left)}" y="${fmt(yScale(s.q3))}" width="${fmt(boxW)}" ` +
        `height="${fmt(yScale(s.q1) - yScale(s.q3))}" fill="lightsteelblue" stroke="black"/>`
    );
    parts.push(
      `<line class="median" x1="${fmt(left)}" y1="${fmt(yScale(s.median))}" x2="${fmt(right)}" ` +
        `y2="${fmt(yScale(s.median))}" stroke="black" stroke-width="1.5"/>`
    );
    // cross markers for the points outside the whiskers
    for (const v of s.outliers) {
      const y = yScale(v);
      const r = 3;
      parts.push(
        `<path class="outlier" d="M ${fmt(cx - r)} ${fmt(y - r)} L ${fmt(cx + r)} ${fmt(y + r)} ` +
          `M ${fmt(cx - r)} ${fmt(y + r)} L ${fmt(cx + r)} ${fmt(y - r)}" stroke="black" fill="none"/>`
      );
    }
    parts.push(`</g>`);
  });

  parts.push(`</svg>`);
  return parts.join("\n") + "\n";
}
