/**
 * Grouping the metrics rows into the series each figure kind plots.
 *
 * Series identity comes from the CSV contract: the scenario column is
 * "<scenario>-<arm>", requester labels carry the request-model prefix,
 * and the content class is the first name component (/news vs /video).
 */

import { MetricsRow } from "./csv.js";

export interface BarStat {
  label: string;
  mean: number;      // mean of per-seed series means
  std: number;       // sample std-dev of the per-seed means (0 for one seed)
  seeds: number;
}

export interface PairedPoint {
  requester: string;
  baseline: number;
  treatment: number;
}

export function armOf(row: MetricsRow): string {
  const dash = row.scenario.indexOf("-");
  return dash < 0 ? row.scenario : row.scenario.slice(dash + 1);
}

export function modelOf(row: MetricsRow): string {
  const dash = row.requester.indexOf("-");
  return dash < 0 ? row.requester : row.requester.slice(0, dash);
}

export function contentClassOf(row: MetricsRow): string {
  const parts = row.content_name.split("/").filter((p) => p.length > 0);
  return parts.length > 0 ? parts[0] : row.content_name;
}

function mean(values: number[]): number {
  return values.reduce((a, b) => a + b, 0) / values.length;
}

function sampleStd(values: number[]): number {
  if (values.length < 2) return 0;
  const m = mean(values);
  const variance =
    values.reduce((acc, v) => acc + (v - m) * (v - m), 0) / (values.length - 1);
  return Math.sqrt(variance);
}

/** Per-seed series means, then mean/std over seeds, for any keying. */
export function barStats(
  rows: MetricsRow[],
  keyOf: (row: MetricsRow) => string,
  order: string[],
): BarStat[] {
  const bySeed = new Map<string, Map<number, number[]>>();
  for (const row of rows) {
    const key = keyOf(row);
    if (!order.includes(key)) continue;
    let seeds = bySeed.get(key);
    if (!seeds) bySeed.set(key, (seeds = new Map()));
    let bucket = seeds.get(row.run_seed);
    if (!bucket) seeds.set(row.run_seed, (bucket = []));
    bucket.push(row.latency_ms);
  }
  return order
    .filter((key) => bySeed.has(key))
    .map((key) => {
      const seeds = bySeed.get(key)!;
      const seedMeans = [...seeds.values()].map(mean);
      return {
        label: key,
        mean: mean(seedMeans),
        std: sampleStd(seedMeans),
        seeds: seedMeans.length,
      };
    });
}

/** Kind a: arm x request model, four bars. */
export function kindABars(rows: MetricsRow[]): BarStat[] {
  const keyOf = (row: MetricsRow) => `${armOf(row)}-${modelOf(row)}`;
  const arms = [...new Set(rows.map(armOf))].sort();
  const models = [...new Set(rows.map(modelOf))].sort();
  const order: string[] = [];
  for (const arm of arms) for (const model of models) order.push(`${arm}-${model}`);
  return barStats(rows, keyOf, order);
}

/** Kind b: arm x content type. */
export function kindBBars(rows: MetricsRow[]): BarStat[] {
  const keyOf = (row: MetricsRow) => `${armOf(row)}-${contentClassOf(row)}`;
  const arms = [...new Set(rows.map(armOf))].sort();
  const classes = [...new Set(rows.map(contentClassOf))].sort();
  const order: string[] = [];
  for (const arm of arms) for (const klass of classes) order.push(`${arm}-${klass}`);
  return barStats(rows, keyOf, order);
}

/** Kind c: per requester, baseline vs treatment mean latency (seeds pooled). */
export function kindCPairs(rows: MetricsRow[]): PairedPoint[] {
  const arms = [...new Set(rows.map(armOf))].sort();
  if (arms.length !== 2) {
    throw new Error(`kind c needs exactly two arms, found: ${arms.join(", ")}`);
  }
  const [baselineArm, treatmentArm] = arms;
  const sums = new Map<string, Map<string, { total: number; n: number }>>();
  for (const row of rows) {
    const arm = armOf(row);
    let perArm = sums.get(row.requester);
    if (!perArm) sums.set(row.requester, (perArm = new Map()));
    let cell = perArm.get(arm);
    if (!cell) perArm.set(arm, (cell = { total: 0, n: 0 }));
    cell.total += row.latency_ms;
    cell.n += 1;
  }
  const points: PairedPoint[] = [];
  for (const requester of [...sums.keys()].sort()) {
    const perArm = sums.get(requester)!;
    const base = perArm.get(baselineArm);
    const treat = perArm.get(treatmentArm);
    if (!base || !treat) continue;
    points.push({
      requester,
      baseline: base.total / base.n,
      treatment: treat.total / treat.n,
    });
  }
  return points;
}
