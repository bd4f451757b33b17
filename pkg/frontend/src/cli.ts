#!/usr/bin/env node
/** figplots CLI: plot --csv runs.csv --scenario fig1 --out fig1.svg [--delta 0.001]
 *
 * Output format follows the extension (.svg or .png). Exit codes: 0 on
 * success, 2 on configuration errors (bad flags, missing file, empty
 * scenario, unknown extension). */

import { readFileSync, writeFileSync } from "node:fs";

import { aggregate, EmptyScenarioError } from "./aggregate.js";
import { CsvFormatError, parseRunsCsv } from "./csv.js";
import { renderPng } from "./png.js";
import { renderSvg } from "./svg.js";

interface Args {
  csv: string;
  scenario: string;
  out: string;
  delta: number;
}

function parseArgs(argv: string[]): Args {
  if (argv[0] !== "plot") {
    throw new Error("usage: figplots plot --csv <runs.csv> --scenario <name> --out <file.svg|png> [--delta D]");
  }
  const opts = new Map<string, string>();
  for (let i = 1; i < argv.length; i += 2) {
    if (!argv[i].startsWith("--") || i + 1 >= argv.length) {
      throw new Error(`malformed option ${argv[i]}`);
    }
    opts.set(argv[i].slice(2), argv[i + 1]);
  }
  for (const required of ["csv", "scenario", "out"]) {
    if (!opts.has(required)) {
      throw new Error(`missing required option --${required}`);
    }
  }
  const delta = Number(opts.get("delta") ?? "0.001");
  if (!Number.isFinite(delta) || delta <= 0 || delta >= 1) {
    throw new Error(`--delta must lie in (0, 1), got ${opts.get("delta")}`);
  }
  return {
    csv: opts.get("csv")!,
    scenario: opts.get("scenario")!,
    out: opts.get("out")!,
    delta,
  };
}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 2;
  }
  try {
    const rows = parseRunsCsv(readFileSync(args.csv, "utf-8"));
    const curves = aggregate(rows, args.scenario);
    if (args.out.endsWith(".svg")) {
      writeFileSync(args.out, renderSvg(curves, args.delta), { encoding: "utf-8" });
    } else if (args.out.endsWith(".png")) {
      writeFileSync(args.out, renderPng(curves, args.delta));
    } else {
      console.error(`error: unsupported output extension on ${args.out} (use .svg or .png)`);
      return 2;
    }
  } catch (err) {
    if (
      err instanceof EmptyScenarioError ||
      err instanceof CsvFormatError ||
      (err as NodeJS.ErrnoException).code === "ENOENT"
    ) {
      console.error(`error: ${(err as Error).message}`);
      return 2;
    }
    throw err;
  }
  return 0;
}

process.exit(main(process.argv.slice(2)));
