#!/usr/bin/env node
/**
 * felsim-plot --kind <a|b|c> --in <csv...> --out <img.svg> [--title <text>]
 */

import { SchemaError } from "./csv.js";
import { FigureKind, renderFigure, UnsupportedFormatError } from "./figures.js";

function usage(): never {
  console.error(
    "usage: felsim-plot --kind <a|b|c> --in <metrics.csv...> --out <figure.svg> [--title <text>]",
  );
  process.exit(2);
}

function parseArgs(argv: string[]) {
  let kind: string | undefined;
  const inputs: string[] = [];
  let output: string | undefined;
  let title: string | undefined;
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "--kind") {
      kind = argv[++i];
    } else if (arg === "--in") {
      while (i + 1 < argv.length && !argv[i + 1].startsWith("--")) {
        inputs.push(argv[++i]);
      }
    } else if (arg === "--out") {
      output = argv[++i];
    } else if (arg === "--title") {
      title = argv[++i];
    } else {
      console.error(`unknown argument: ${arg}`);
      usage();
    }
  }
  if (!kind || !["a", "b", "c"].includes(kind) || inputs.length === 0 || !output) {
    usage();
  }
  return { kind: kind as FigureKind, inputs, output: output!, title };
}

function main(): void {
  const spec = parseArgs(process.argv.slice(2));
  try {
    const written = renderFigure(spec);
    console.log(written);
  } catch (error) {
    if (error instanceof SchemaError || error instanceof UnsupportedFormatError) {
      console.error(`error: ${error.message}`);
      process.exit(2);
    }
    throw error;
  }
}

main();
