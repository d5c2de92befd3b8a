#!/usr/bin/env node
/**
 * svadf-plot: render SVG figures from svadf CSV outputs.
 *
 *   svadf-plot path-overlay --stats path.csv [--prices prices.csv]
 *                           [--episode episode.csv] --out fig.svg
 *   svadf-plot calibration  --table cv.csv [--divisors 10,2] --out fig.svg
 *   svadf-plot gap-curve    --gap gap.csv --out fig.svg
 */

import { readFileSync, writeFileSync } from "node:fs";
import { parseArgs } from "node:util";

import { renderCalibration, renderGapCurve, renderPathOverlay } from "./plots.js";
import { SchemaError } from "./schema.js";

function usage(): string {
  return [
    "usage:",
    "  svadf-plot path-overlay --stats FILE [--prices FILE] [--episode FILE] --out FILE",
    "  svadf-plot calibration  --table FILE [--divisors 10,2] --out FILE",
    "  svadf-plot gap-curve    --gap FILE --out FILE",
  ].join("\n");
}

export function run(argv: string[]): number {
  const [kind, ...rest] = argv;
  if (!kind || kind === "--help" || kind === "-h") {
    console.log(usage());
    return kind ? 0 : 2;
  }
  const { values } = parseArgs({
    args: rest,
    options: {
      stats: { type: "string" },
      prices: { type: "string" },
      episode: { type: "string" },
      table: { type: "string" },
      gap: { type: "string" },
      divisors: { type: "string" },
      out: { type: "string" },
      title: { type: "string" },
    },
  });
  if (!values.out) {
    console.error("error: --out is required");
    return 2;
  }
  let svg: string;
  try {
    if (kind === "path-overlay") {
      if (!values.stats) throw new Error("--stats is required for path-overlay");
      svg = renderPathOverlay({
        statsCsv: readFileSync(values.stats, "utf8"),
        pricesCsv: values.prices ? readFileSync(values.prices, "utf8") : undefined,
        episodeCsv: values.episode ? readFileSync(values.episode, "utf8") : undefined,
        title: values.title,
      });
    } else if (kind === "calibration") {
      if (!values.table) throw new Error("--table is required for calibration");
      const divisors = (values.divisors ?? "10,2").split(",").map(Number);
      svg = renderCalibration(readFileSync(values.table, "utf8"), divisors);
    } else if (kind === "gap-curve") {
      if (!values.gap) throw new Error("--gap is required for gap-curve");
      svg = renderGapCurve(readFileSync(values.gap, "utf8"));
    } else {
      console.error(`error: unknown figure kind '${kind}'\n${usage()}`);
      return 2;
    }
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema: ${err.message}`);
      return 1;
    }
    console.error(`error: ${err instanceof Error ? err.message : String(err)}`);
    return 1;
  }
  writeFileSync(values.out, svg);
  console.log(`wrote ${values.out}`);
  return 0;
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url.endsWith(process.argv[1].split("/").pop() ?? "");

if (invokedDirectly) {
  process.exit(run(process.argv.slice(2)));
}
