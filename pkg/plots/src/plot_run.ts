#!/usr/bin/env node
/**
 * Render one figure from simulator run logs.
 *
 *   plot_run <run.csv> --kind gains --out fig.svg
 *   plot_run <a_summary.txt> <b_summary.txt> --kind metrics --out bars.svg
 *
 * Line-plot kinds take exactly one run CSV. The metrics kind also accepts
 * summary files, and with two inputs draws grouped comparison bars (one bar
 * per run for each performance index). Output is always SVG, written only
 * after the figure rendered cleanly. Exit status: 0 on success, 1 on any
 * usage, schema, or I/O failure.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { basename } from "node:path";
import { SchemaError, parseRunCsv } from "./csv";
import { parseSummary } from "./summary";
import { FIGURE_KINDS, FigureKind, RunInput, buildFigure } from "./figures";

const USAGE = `usage: plot_run <input> [input2] --kind <${FIGURE_KINDS.join("|")}> --out <figure.svg>

inputs: run CSVs; the metrics kind also accepts run summary files and,
        with two inputs, draws grouped comparison bars per metric.
flags:  --kind  figure family to draw (required)
        --out   output path, .svg (required)
        --help  show this message
`;

class UsageError extends Error {}

interface CliOptions {
  paths: string[];
  kind: FigureKind;
  out: string;
}

function parseArgs(argv: string[]): CliOptions {
  const paths: string[] = [];
  let kind: string | undefined;
  let out: string | undefined;
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "--help" || arg === "-h") {
      process.stdout.write(USAGE);
      process.exit(0);
    } else if (arg === "--kind") {
      kind = argv[++i];
      if (kind === undefined) throw new UsageError("--kind needs a value");
    } else if (arg === "--out") {
      out = argv[++i];
      if (out === undefined) throw new UsageError("--out needs a value");
    } else if (arg.startsWith("-")) {
      throw new UsageError(`unknown flag '${arg}'`);
    } else {
      paths.push(arg);
    }
  }
  if (paths.length === 0) throw new UsageError("no input file given");
  if (paths.length > 2) throw new UsageError("at most two inputs are supported");
  if (kind === undefined) throw new UsageError("--kind is required");
  if (!(FIGURE_KINDS as readonly string[]).includes(kind)) {
    throw new UsageError(`unknown kind '${kind}' (expected one of: ${FIGURE_KINDS.join(", ")})`);
  }
  if (out === undefined) throw new UsageError("--out is required");
  if (!out.endsWith(".svg")) throw new UsageError(`only .svg output is supported (got '${out}')`);
  return { paths, kind: kind as FigureKind, out };
}

/** Summaries are 'key = value' text; anything else is parsed as a run CSV. */
function loadInput(path: string): RunInput {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch (err) {
    const code = (err as NodeJS.ErrnoException).code;
    throw new SchemaError(`cannot read '${path}'${code ? ` (${code})` : ""}`);
  }
  const stem = basename(path).replace(/\.[^.]*$/, "");
  const newline = text.indexOf("\n");
  const firstLine = newline < 0 ? text : text.slice(0, newline);
  if (firstLine.includes(" = ")) return { type: "summary", summary: parseSummary(text, stem) };
  return { type: "csv", table: parseRunCsv(text, stem) };
}

function main(): void {
  const opts = parseArgs(process.argv.slice(2));
  const inputs = opts.paths.map(loadInput);
  if (opts.kind !== "metrics") {
    if (inputs.length !== 1) {
      throw new UsageError(`kind '${opts.kind}' takes exactly one input (overlays are --kind metrics only)`);
    }
    if (inputs[0].type !== "csv") {
      throw new UsageError(`kind '${opts.kind}' requires a run CSV, got a summary file`);
    }
  }
  const svg = buildFigure(opts.kind, inputs);
  writeFileSync(opts.out, svg, "utf8");
  process.stdout.write(`wrote ${opts.out}\n`);
}

try {
  main();
} catch (err) {
  if (err instanceof UsageError) {
    process.stderr.write(`plot_run: ${err.message}\n${USAGE}`);
    process.exit(1);
  }
  if (err instanceof SchemaError) {
    process.stderr.write(`plot_run: ${err.message}\n`);
    process.exit(1);
  }
  throw err;
}
