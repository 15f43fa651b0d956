/**
 * CSV access layer for the srswitch CLI outputs.
 *
 * Every input is a plain comma-separated file with one header line and
 * numeric cells ("nan" marks failed sweep points). Column lookups go
 * through requireColumns so a schema mismatch fails with a named error
 * before any figure is written.
 */
import { readFileSync } from "node:fs";

/** A required input CSV is absent from the data directory. */
export class MissingInputError extends Error {
  constructor(path: string) {
    super(`${path}: required input CSV not found`);
    this.name = "MissingInputError";
  }
}

/** An input CSV has a header but none of the required columns. */
export class MissingColumnError extends Error {
  constructor(path: string, column: string) {
    super(`${path}: missing required column ${column}`);
    this.name = "MissingColumnError";
  }
}

/** An input CSV has no data rows (or no content at all). */
export class EmptyCsvError extends Error {
  constructor(path: string) {
    super(`${path}: no data rows`);
    this.name = "EmptyCsvError";
  }
}

/** Parsed CSV: column names plus row-major numeric cells. */
export interface Table {
  path: string;
  columns: string[];
  rows: number[][];
}

export function parseCsv(text: string, path: string): Table {
  const lines = text.split("\n").filter((l) => l.trim().length > 0);
  if (lines.length < 2) throw new EmptyCsvError(path);
  const columns = lines[0].split(",").map((c) => c.trim());
  const rows = lines.slice(1).map((line) => line.split(",").map(Number));
  return { path, columns, rows };
}

export function readTable(path: string): Table {
  let text: string;
  try {
    text = readFileSync(path, "utf-8");
  } catch {
    throw new MissingInputError(path);
  }
  return parseCsv(text, path);
}

/** Throw MissingColumnError unless every name is present. */
export function requireColumns(table: Table, names: string[]): void {
  for (const name of names) {
    if (!table.columns.includes(name)) {
      throw new MissingColumnError(table.path, name);
    }
  }
}

/** One column as a numeric array; callers validate with requireColumns first. */
export function column(table: Table, name: string): number[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) throw new MissingColumnError(table.path, name);
  return table.rows.map((r) => r[idx]);
}
