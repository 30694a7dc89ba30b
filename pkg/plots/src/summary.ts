/**
 * Reader for simulator run summaries: flat `key = value` lines.
 *
 * Values stay strings until a caller asks for a number, because the file
 * mixes numerics (iae, runtime_s) with labels (name, controller, status).
 */

import { SchemaError, parseFloatToken } from "./csv";

export interface RunSummary {
  /** The summary's own `name` entry, else the caller's fallback label. */
  name: string;
  values: Map<string, string>;
}

export function parseSummary(text: string, fallbackName: string): RunSummary {
  const values = new Map<string, string>();
  for (const raw of text.split("\n")) {
    const line = raw.endsWith("\r") ? raw.slice(0, -1) : raw;
    if (line === "") continue;
    const sep = line.indexOf(" = ");
    if (sep < 0) throw new SchemaError(`summary line is not 'key = value': '${line}'`);
    values.set(line.slice(0, sep), line.slice(sep + 3));
  }
  if (values.size === 0) throw new SchemaError("empty summary file");
  return { name: values.get("name") ?? fallbackName, values };
}

export function summaryNumber(summary: RunSummary, key: string): number {
  const value = summary.values.get(key);
  if (value === undefined) throw new SchemaError(`summary missing key '${key}'`);
  return parseFloatToken(value, `for summary key '${key}'`);
}
