/**
 * Strict reader for simulator run logs: a fixed-order, all-numeric CSV.
 *
 * The simulator writes one header row followed by one row per logged step,
 * full round-trip float precision, `\n` line endings. This reader validates
 * the header against the documented column order and every row against the
 * column count, so downstream figure code can index columns by name without
 * re-checking anything.
 */

import { readFileSync } from "node:fs";
import { basename } from "node:path";

/** Column order contract for run CSVs. Figures look columns up by name. */
export const RUN_COLUMNS = [
  "t",
  "p_n_x", "p_n_y", "p_n_z",
  "v_x", "v_y", "v_z",
  "phi", "theta", "psi",
  "omega_x", "omega_y", "omega_z",
  "e_phi", "e_theta", "e_psi", "e_v",
  "s_x", "s_y", "s_z", "s_v",
  "m_x", "m_y", "m_z",
  "ms_x", "ms_y", "ms_z",
  "ma_x", "ma_y", "ma_z",
  "t_x", "t_xs", "t_xa",
  "k1", "L", "r", "l_v", "r_v", "e_bar_v", "e_delta",
  "wc_norm", "wa_norm", "delta_b",
  "iae", "iacm", "int_abs_ev", "int_tx",
] as const;

export type ColumnName = (typeof RUN_COLUMNS)[number];

/** Raised when an input file violates the CSV or summary contract. */
export class SchemaError extends Error {}

export interface RunTable {
  /** Label used in legends: the file stem unless the caller overrides it. */
  name: string;
  /** Number of data rows (header excluded). */
  rows: number;
  /** Column-major data: one Float64Array per entry of RUN_COLUMNS. */
  data: Map<ColumnName, Float64Array>;
}

/** Fetch a column, failing loudly if it is somehow absent. */
export function col(table: RunTable, name: ColumnName): Float64Array {
  const values = table.data.get(name);
  if (values === undefined) throw new SchemaError(`missing column '${name}'`);
  return values;
}

const SPECIAL_FLOATS: Record<string, number> = {
  nan: Number.NaN,
  inf: Number.POSITIVE_INFINITY,
  "-inf": Number.NEGATIVE_INFINITY,
  infinity: Number.POSITIVE_INFINITY,
  "-infinity": Number.NEGATIVE_INFINITY,
};

/** Parse one numeric token, accepting the writer's nan/inf spellings. */
export function parseFloatToken(token: string, where: string): number {
  const lowered = token.trim().toLowerCase();
  if (lowered in SPECIAL_FLOATS) return SPECIAL_FLOATS[lowered];
  if (lowered === "") throw new SchemaError(`empty numeric field ${where}`);
  const value = Number(lowered);
  if (Number.isNaN(value)) throw new SchemaError(`non-numeric field '${token}' ${where}`);
  return value;
}

export function parseRunCsv(text: string, name: string): RunTable {
  const lines = text.split("\n").map((line) => (line.endsWith("\r") ? line.slice(0, -1) : line));
  while (lines.length > 0 && lines[lines.length - 1] === "") lines.pop();
  if (lines.length === 0) throw new SchemaError("empty file: no header row");

  const header = lines[0].split(",");
  for (const expected of RUN_COLUMNS) {
    if (!header.includes(expected)) throw new SchemaError(`missing column '${expected}'`);
  }
  if (header.length !== RUN_COLUMNS.length) {
    const extra = header.find((h) => !(RUN_COLUMNS as readonly string[]).includes(h));
    throw new SchemaError(`unexpected column '${extra}'`);
  }
  for (let i = 0; i < header.length; i++) {
    if (header[i] !== RUN_COLUMNS[i]) {
      throw new SchemaError(`column ${i} is '${header[i]}', expected '${RUN_COLUMNS[i]}'`);
    }
  }

  const rows = lines.length - 1;
  const data = new Map<ColumnName, Float64Array>();
  for (const column of RUN_COLUMNS) data.set(column, new Float64Array(rows));

  for (let r = 0; r < rows; r++) {
    const cells = lines[r + 1].split(",");
    if (cells.length !== RUN_COLUMNS.length) {
      throw new SchemaError(
        `row ${r + 1} has ${cells.length} fields, expected ${RUN_COLUMNS.length} (truncated file?)`,
      );
    }
    for (let c = 0; c < cells.length; c++) {
      data.get(RUN_COLUMNS[c])![r] = parseFloatToken(cells[c], `at row ${r + 1}, column '${RUN_COLUMNS[c]}'`);
    }
  }
  return { name, rows, data };
}

export function loadRunCsv(path: string): RunTable {
  const text = readFileSync(path, "utf8");
  const stem = basename(path).replace(/\.[^.]*$/, "");
  return parseRunCsv(text, stem);
}
