/** Typed CSV reading with mandatory header validation. */

import { readFileSync } from "node:fs";

export class SchemaError extends Error {}

export interface Table {
  columns: string[];
  rows: number[][];
}

/** Read a CSV whose header must equal `columns`; every cell parses as a number. */
export function readCsv(path: string, columns: string[]): Table {
  const text = readFileSync(path, "utf-8");
  const lines = text.split("\n").filter((l) => l.length > 0);
  if (lines.length === 0) throw new SchemaError(`${path}: empty file`);
  const header = lines[0].replace(/\r$/, "").split(",");
  if (header.length !== columns.length || header.some((h, i) => h !== columns[i])) {
    throw new SchemaError(`${path}: header [${header}] does not match [${columns}]`);
  }
  const rows: number[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].replace(/\r$/, "").split(",");
    if (parts.length !== columns.length) {
      throw new SchemaError(`${path}:${i + 1}: expected ${columns.length} columns`);
    }
    const row = parts.map(Number);
    if (row.some((v) => Number.isNaN(v))) {
      throw new SchemaError(`${path}:${i + 1}: non-numeric cell`);
    }
    rows.push(row);
  }
  return { columns, rows };
}

export function column(table: Table, name: string): number[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) throw new SchemaError(`no column ${name}`);
  return table.rows.map((r) => r[idx]);
}
