import { describe, expect, it } from "vitest";

import { parseMetricsCsv, REQUIRED_COLUMNS, SchemaError } from "../src/csv.js";

const HEADER = REQUIRED_COLUMNS.join(",");
const ROW = 'a-fog,1,zipf-0,0,/news/item000,100,174,74,cloud,cloud,ran,,"(1,0)"';

describe("parseMetricsCsv", () => {
  it("parses a minimal file", () => {
    const rows = parseMetricsCsv(`${HEADER}\n${ROW}\n`);
    expect(rows).toHaveLength(1);
    expect(rows[0].latency_ms).toBe(74);
    expect(rows[0].epoch_candidate).toBe("(1,0)");
  });

  it("header-only file raises 'no data rows'", () => {
    expect(() => parseMetricsCsv(`${HEADER}\n`)).toThrowError(SchemaError);
    expect(() => parseMetricsCsv(`${HEADER}\n`)).toThrowError(/no data rows/);
  });

  it("missing column is named in the error", () => {
    const withoutLatency = HEADER.replace("latency_ms", "lat");
    expect(() => parseMetricsCsv(`${withoutLatency}\n${ROW}\n`))
      .toThrowError(/latency_ms/);
  });

  it("column order does not matter", () => {
    const reversed = [...REQUIRED_COLUMNS].reverse();
    const header = reversed.join(",");
    const cells = ROW.match(/("[^"]*"|[^,]*)/g)!.filter((c) => c !== "");
    // Rebuild the row under the reversed header.
    const byName = new Map(REQUIRED_COLUMNS.map((c, i) => [c, cells[i]]));
    const row = reversed.map((c) => byName.get(c)).join(",");
    const rows = parseMetricsCsv(`${header}\n${row}\n`);
    expect(rows[0].latency_ms).toBe(74);
    expect(rows[0].scenario).toBe("a-fog");
    expect(rows[0].content_name).toBe("/news/item000");
  });

  it("quoted fields with commas survive", () => {
    const rows = parseMetricsCsv(
      `${HEADER}\na-fog,1,zipf-0,0,"/a,b/c",100,174,74,cloud,cloud,ran,,""\n`,
    );
    expect(rows[0].content_name).toBe("/a,b/c");
  });
});
