import { FigureKind, SCHEMAS, Table } from "./schema";

/**
 * Re-emit the plotted columns of a table exactly as they appeared in the
 * input file: raw cell text, input column order, same trailing newline.
 * Diagnostic columns that are not drawn (populations norm) are omitted.
 */
export function dumpTable(table: Table, kind: FigureKind): string {
  const schema = SCHEMAS[kind];
  const plotted = new Set([schema.xColumn, ...schema.seriesColumns]);
  const cols = table.columns.filter((c) => plotted.has(c));

  const lines = [cols.join(",")];
  const nRows = table.raw.get(cols[0])!.length;
  for (let i = 0; i < nRows; i++) {
    lines.push(cols.map((c) => table.raw.get(c)![i]).join(","));
  }
  return lines.join("\n") + (table.trailingNewline ? "\n" : "");
}
