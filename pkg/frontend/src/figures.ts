/**
 * Figure assembly: load CSVs, aggregate per kind, render, write the file.
 * The output format follows the file extension; SVG is the supported
 * vector format.
 */

import { writeFileSync } from "fs";
import { extname } from "path";

import { armOf, kindABars, kindBBars, kindCPairs } from "./aggregate.js";
import { loadMetrics, MetricsRow } from "./csv.js";
import { renderBarChart, renderPairedChart } from "./svg.js";

export type FigureKind = "a" | "b" | "c";

export interface FigureSpec {
  kind: FigureKind;
  inputs: string[];
  output: string;
  title?: string;
}

export class UnsupportedFormatError extends Error {}

const DEFAULT_TITLES: Record<FigureKind, string> = {
  a: "Average response delay: cloud vs fog paradigm",
  b: "Average latency by content type: with vs without edge learning",
  c: "Per-requester average latency under mobility",
};

export function renderFigureText(kind: FigureKind, rows: MetricsRow[],
                                 title?: string): string {
  const heading = title ?? DEFAULT_TITLES[kind];
  if (kind === "a") {
    return renderBarChart(kindABars(rows), heading);
  }
  if (kind === "b") {
    return renderBarChart(kindBBars(rows), heading);
  }
  const arms = [...new Set(rows.map(armOf))].sort() as [string, string];
  return renderPairedChart(kindCPairs(rows), heading, arms);
}

export function renderFigure(spec: FigureSpec): string {
  const extension = extname(spec.output).toLowerCase();
  if (extension !== ".svg") {
    throw new UnsupportedFormatError(
      `unsupported output format '${extension || "(none)"}': supported formats: .svg`,
    );
  }
  const rows = loadMetrics(spec.inputs);
  const text = renderFigureText(spec.kind, rows, spec.title);
  writeFileSync(spec.output, text, "utf-8");
  return spec.output;
}
