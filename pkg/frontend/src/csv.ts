/**
 * Reader for scenario CSV bundles: a header row, a "# units:" annotation
 * row, then numeric data rows.
 */

export interface Table {
  columns: string[];
  units: string[];
  rows: number[][];
}

export class SchemaError extends Error {}
export class EmptyDatasetError extends Error {}

export function parseCsv(text: string): Table {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length < 2) {
    throw new SchemaError("csv is missing its header or units row");
  }
  const columns = lines[0]!.split(",");
  const unitsLine = lines[1]!;
  if (!unitsLine.startsWith("# units: ")) {
    throw new SchemaError("second row must be the '# units:' annotation");
  }
  const units = unitsLine.slice("# units: ".length).split(",");
  if (units.length !== columns.length) {
    throw new SchemaError(
      `units row has ${units.length} entries for ${columns.length} columns`,
    );
  }
  const rows: number[][] = [];
  for (const line of lines.slice(2)) {
    const parts = line.split(",");
    if (parts.length !== columns.length) {
      throw new SchemaError(
        `data row has ${parts.length} fields, expected ${columns.length}`,
      );
    }
    rows.push(parts.map(Number));
  }
  if (rows.length === 0) {
    throw new EmptyDatasetError("csv contains no data rows");
  }
  return { columns, units, rows };
}

export function columnIndex(table: Table, name: string): number {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new SchemaError(`column '${name}' not present in csv schema`);
  }
  return idx;
}

export function columnValues(table: Table, name: string): number[] {
  const idx = columnIndex(table, name);
  return table.rows.map((r) => r[idx]!);
}

export function columnUnit(table: Table, name: string): string {
  return table.units[columnIndex(table, name)] ?? "";
}
