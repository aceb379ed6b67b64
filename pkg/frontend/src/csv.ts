/**
 * Reading the simulator's metrics.csv files.
 *
 * Columns are looked up by name, never by position, so files with
 * permuted column order parse identically.
 */

import { readFileSync } from "fs";
import Papa from "papaparse";

export const REQUIRED_COLUMNS = [
  "scenario",
  "run_seed",
  "requester",
  "request_id",
  "content_name",
  "issue_ms",
  "satisfy_ms",
  "latency_ms",
  "served_by",
  "cache_hit_node_kind",
  "link_kind",
  "scheme",
  "epoch_candidate",
] as const;

export interface MetricsRow {
  scenario: string;
  run_seed: number;
  requester: string;
  request_id: number;
  content_name: string;
  issue_ms: number;
  satisfy_ms: number;
  latency_ms: number;
  served_by: string;
  cache_hit_node_kind: string;
  link_kind: string;
  scheme: string;
  epoch_candidate: string;
}

export class SchemaError extends Error {}

export function parseMetricsCsv(text: string): MetricsRow[] {
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new SchemaError(`unparseable CSV: ${first.message}`);
  }
  const fields = parsed.meta.fields ?? [];
  for (const column of REQUIRED_COLUMNS) {
    if (!fields.includes(column)) {
      throw new SchemaError(`missing column '${column}'`);
    }
  }
  if (parsed.data.length === 0) {
    throw new SchemaError("no data rows");
  }
  return parsed.data.map((record) => ({
    scenario: record.scenario,
    run_seed: Number(record.run_seed),
    requester: record.requester,
    request_id: Number(record.request_id),
    content_name: record.content_name,
    issue_ms: Number(record.issue_ms),
    satisfy_ms: Number(record.satisfy_ms),
    latency_ms: Number(record.latency_ms),
    served_by: record.served_by,
    cache_hit_node_kind: record.cache_hit_node_kind,
    link_kind: record.link_kind,
    scheme: record.scheme,
    epoch_candidate: record.epoch_candidate,
  }));
}

export function loadMetrics(paths: string[]): MetricsRow[] {
  const rows: MetricsRow[] = [];
  for (const path of paths) {
    rows.push(...parseMetricsCsv(readFileSync(path, "utf-8")));
  }
  return rows;
}
