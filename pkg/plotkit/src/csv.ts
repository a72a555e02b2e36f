/**
 * CSV ingestion for the rbmtfi result tables.
 *
 * Tables are plain comma-separated text with a single header row and numeric
 * fields printed at full float64 precision; values are passed through
 * untouched (parsed once to double, never rounded or transformed).
 */

import { readFileSync } from "node:fs";
import Papa from "papaparse";

export interface Table {
  path: string;
  header: string[];
  rows: Record<string, number>[];
}

export function readTable(path: string): Table {
  let text: string;
  try {
    text = readFileSync(path, "utf-8");
  } catch (err) {
    throw new Error(`cannot read CSV ${path}: ${(err as Error).message}`);
  }
  if (text.trim().length === 0) {
    throw new Error(`empty CSV file: ${path}`);
  }
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new Error(`${path}: ${first.message} (row ${first.row})`);
  }
  const header = parsed.meta.fields ?? [];
  if (parsed.data.length === 0) {
    throw new Error(`empty CSV file: ${path} (header only)`);
  }
  const rows = parsed.data.map((raw) => {
    const row: Record<string, number> = {};
    for (const key of header) {
      row[key] = Number(raw[key]);
    }
    return row;
  });
  return { path, header, rows };
}

/** Extract one column, failing loudly if the header lacks it. */
export function column(table: Table, name: string): number[] {
  if (!table.header.includes(name)) {
    throw new Error(
      `missing column '${name}' in ${table.path} (have: ${table.header.join(", ")})`,
    );
  }
  return table.rows.map((row) => row[name]);
}

export function requireColumns(table: Table, names: string[]): void {
  for (const name of names) {
    if (!table.header.includes(name)) {
      throw new Error(
        `missing column '${name}' in ${table.path} (have: ${table.header.join(", ")})`,
      );
    }
  }
}

/** Split rows into groups keyed by the (numeric) value of one column. */
export function groupBy(table: Table, key: string): Map<number, Record<string, number>[]> {
  requireColumns(table, [key]);
  const groups = new Map<number, Record<string, number>[]>();
  for (const row of table.rows) {
    const k = row[key];
    const bucket = groups.get(k);
    if (bucket) {
      bucket.push(row);
    } else {
      groups.set(k, [row]);
    }
  }
  return groups;
}
