/**
 * Hand-built SVG output: grouped bars with std-dev whiskers, and the
 * paired-dot chart for per-requester comparisons. Every mark carries
 * data-* attributes so tests can read the plotted values back without a
 * rasterizer.
 */

import { BarStat, PairedPoint } from "./aggregate.js";

const WIDTH = 720;
const HEIGHT = 440;
const MARGIN = { top: 48, right: 24, bottom: 72, left: 64 };

const PALETTE = [
  "#4878d0", "#ee854a", "#6acc64", "#d65f5f",
  "#956cb4", "#8c613c", "#dc7ec0", "#797979",
];

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function axis(maxValue: number, plotH: number, plotW: number): string {
  const parts: string[] = [];
  const ticks = 5;
  for (let i = 0; i <= ticks; i++) {
    const value = (maxValue * i) / ticks;
    const y = MARGIN.top + plotH - (plotH * i) / ticks;
    parts.push(
      `<line x1="${MARGIN.left}" y1="${y}" x2="${MARGIN.left + plotW}" y2="${y}" stroke="#ddd"/>`,
      `<text x="${MARGIN.left - 8}" y="${y + 4}" text-anchor="end" font-size="11">${value.toFixed(0)}</text>`,
    );
  }
  return parts.join("\n");
}

function frame(title: string, yLabel: string, body: string): string {
  return `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif">
<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>
<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-size="15" font-weight="bold">${esc(title)}</text>
<text x="16" y="${HEIGHT / 2}" transform="rotate(-90 16 ${HEIGHT / 2})" text-anchor="middle" font-size="12">${esc(yLabel)}</text>
${body}
</svg>
`;
}

export function renderBarChart(bars: BarStat[], title: string): string {
  if (bars.length === 0) {
    throw new Error("nothing to plot");
  }
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const maxValue = Math.max(...bars.map((b) => b.mean + b.std)) * 1.1 || 1;
  const scale = (v: number) => (v / maxValue) * plotH;
  const slot = plotW / bars.length;
  const barWidth = Math.min(72, slot * 0.6);

  const marks: string[] = [axis(maxValue, plotH, plotW)];
  bars.forEach((bar, i) => {
    const x = MARGIN.left + slot * i + (slot - barWidth) / 2;
    const h = scale(bar.mean);
    const y = MARGIN.top + plotH - h;
    const cx = x + barWidth / 2;
    marks.push(
      `<rect class="bar" data-label="${esc(bar.label)}" data-value="${bar.mean}" ` +
        `x="${x.toFixed(2)}" y="${y.toFixed(2)}" width="${barWidth.toFixed(2)}" ` +
        `height="${h.toFixed(2)}" fill="${PALETTE[i % PALETTE.length]}"/>`,
    );
    if (bar.std > 0) {
      const top = MARGIN.top + plotH - scale(bar.mean + bar.std);
      const bottom = MARGIN.top + plotH - scale(Math.max(0, bar.mean - bar.std));
      marks.push(
        `<line class="whisker" data-label="${esc(bar.label)}" data-std="${bar.std}" ` +
          `x1="${cx}" y1="${top.toFixed(2)}" x2="${cx}" y2="${bottom.toFixed(2)}" stroke="#333"/>`,
        `<line x1="${cx - 6}" y1="${top.toFixed(2)}" x2="${cx + 6}" y2="${top.toFixed(2)}" stroke="#333"/>`,
        `<line x1="${cx - 6}" y1="${bottom.toFixed(2)}" x2="${cx + 6}" y2="${bottom.toFixed(2)}" stroke="#333"/>`,
      );
    }
    marks.push(
      `<text x="${cx}" y="${MARGIN.top + plotH + 16}" text-anchor="middle" font-size="11">${esc(bar.label)}</text>`,
      `<text x="${cx}" y="${y - 6}" text-anchor="middle" font-size="10">${bar.mean.toFixed(1)}</text>`,
    );
  });
  return frame(title, "mean latency (ms)", marks.join("\n"));
}

export function renderPairedChart(points: PairedPoint[], title: string,
                                  armNames: [string, string]): string {
  if (points.length === 0) {
    throw new Error("nothing to plot");
  }
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const maxValue =
    Math.max(...points.flatMap((p) => [p.baseline, p.treatment])) * 1.1 || 1;
  const scale = (v: number) => (v / maxValue) * plotH;
  const slot = plotW / points.length;

  const marks: string[] = [axis(maxValue, plotH, plotW)];
  points.forEach((point, i) => {
    const cx = MARGIN.left + slot * (i + 0.5);
    const yBase = MARGIN.top + plotH - scale(point.baseline);
    const yTreat = MARGIN.top + plotH - scale(point.treatment);
    marks.push(
      `<line x1="${cx}" y1="${yBase.toFixed(2)}" x2="${cx}" y2="${yTreat.toFixed(2)}" stroke="#bbb"/>`,
      `<circle class="point-baseline" data-requester="${esc(point.requester)}" ` +
        `data-value="${point.baseline}" cx="${cx}" cy="${yBase.toFixed(2)}" r="4" fill="${PALETTE[3]}"/>`,
      `<circle class="point-treatment" data-requester="${esc(point.requester)}" ` +
        `data-value="${point.treatment}" cx="${cx}" cy="${yTreat.toFixed(2)}" r="4" fill="${PALETTE[0]}"/>`,
      `<text x="${cx}" y="${MARGIN.top + plotH + 14}" text-anchor="middle" font-size="9" ` +
        `transform="rotate(40 ${cx} ${MARGIN.top + plotH + 14})">${esc(point.requester)}</text>`,
    );
  });
  const legendY = HEIGHT - 16;
  marks.push(
    `<circle cx="${MARGIN.left}" cy="${legendY}" r="4" fill="${PALETTE[3]}"/>`,
    `<text x="${MARGIN.left + 10}" y="${legendY + 4}" font-size="11">${esc(armNames[0])}</text>`,
    `<circle cx="${MARGIN.left + 110}" cy="${legendY}" r="4" fill="${PALETTE[0]}"/>`,
    `<text x="${MARGIN.left + 120}" y="${legendY + 4}" font-size="11">${esc(armNames[1])}</text>`,
  );
  return frame(title, "mean latency (ms)", marks.join("\n"));
}
