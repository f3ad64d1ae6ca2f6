import { readFileSync } from 'fs';

export const VERSION_LINE = '# stickywave-csv v1';

export interface CsvTable {
  header: string[];
  rows: string[][];
}

/** Read a versioned stickywave CSV; throws on a missing marker line,
 *  missing header, or an empty body. */
export function readVersionedCsv(path: string): CsvTable {
  const text = readFileSync(path, 'utf8');
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines[0] !== VERSION_LINE) {
    throw new Error(`${path}: missing version line "${VERSION_LINE}"`);
  }
  if (lines.length < 2) {
    throw new Error(`${path}: missing header row`);
  }
  const header = lines[1].split(',');
  const rows = lines.slice(2).map((line) => line.split(','));
  if (rows.length === 0) {
    throw new Error(`${path}: no data rows`);
  }
  for (const row of rows) {
    if (row.length !== header.length) {
      throw new Error(`${path}: row arity ${row.length} != header ${header.length}`);
    }
  }
  return { header, rows };
}

/** Column values as numbers; throws if the column is absent. */
export function column(table: CsvTable, name: string): number[] {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new Error(`column "${name}" not in header [${table.header.join(', ')}]`);
  }
  return table.rows.map((row) => {
    const value = row[idx] === 'inf' ? Infinity : Number(row[idx]);
    if (Number.isNaN(value)) {
      throw new Error(`column "${name}": non-numeric value "${row[idx]}"`);
    }
    return value;
  });
}

export function requireColumns(table: CsvTable, names: string[], path = ''): void {
  for (const name of names) {
    if (!table.header.includes(name)) {
      throw new Error(`${path}: schema mismatch, need columns [${names.join(', ')}], ` +
        `got [${table.header.join(', ')}]`);
    }
  }
}
