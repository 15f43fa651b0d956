#!/usr/bin/env node
/**
 * Figure renderer for srswitch CSV outputs.
 *
 * Usage:
 *   node dist/cli.js render <figure|all> --data DIR --out DIR
 *   node dist/cli.js list
 *
 * The data directory must hold the CSVs written by the srswitch CLI
 * invocations documented in the Makefile. Every figure is written as
 * SVG plus PNG; a missing file, empty CSV, or missing column aborts
 * with a named error before any file is written.
 */
import { parseArgs } from "node:util";

import { RECIPES, render } from "./recipes.js";

const USAGE = "usage: render <figure|all> --data DIR --out DIR, or list";

export function main(argv: string[]): number {
  let values: { data: string; out: string };
  let positionals: string[];
  try {
    ({ values, positionals } = parseArgs({
      args: argv,
      allowPositionals: true,
      options: {
        data: { type: "string", default: "data" },
        out: { type: "string", default: "out" },
      },
    }));
  } catch (err) {
    console.error((err as Error).message);
    console.error(USAGE);
    return 1;
  }
  const [command, figure] = positionals;
  if (command === "list") {
    for (const r of RECIPES) {
      const files = r.inputs.map((i) => i.file).join(", ");
      console.log(`${r.id}: ${r.description} [${files}]`);
    }
    return 0;
  }
  if (command !== "render" || figure === undefined) {
    console.error(USAGE);
    return 1;
  }
  try {
    const written = render(figure, values.data, values.out);
    for (const path of written) console.log(`wrote ${path}`);
    return 0;
  } catch (err) {
    const e = err as Error;
    console.error(`${e.name}: ${e.message}`);
    return 1;
  }
}

const entry = process.argv[1] ?? "";
if (entry.endsWith("cli.js") || entry.endsWith("cli.ts")) {
  process.exitCode = main(process.argv.slice(2));
}
