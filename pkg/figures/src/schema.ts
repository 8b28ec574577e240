import { readFileSync } from "fs";
import Papa from "papaparse";

export type FigureKind = "populations" | "phase" | "sweep";

export const FIGURE_KINDS: FigureKind[] = ["populations", "phase", "sweep"];

/** Column layout expected from the simulator CLI for each figure kind. */
export interface KindSchema {
  xColumn: string;
  /** Columns drawn as curves. */
  seriesColumns: string[];
  /** Columns that must be present but are not plotted. */
  extraColumns: string[];
  xLabel: string;
  yLabel: string;
}

export const SCHEMAS: Record<FigureKind, KindSchema> = {
  populations: {
    xColumn: "t",
    seriesColumns: ["alpha_abs2", "beta_abs2"],
    // norm is a conservation diagnostic, carried along but not a curve
    extraColumns: ["norm"],
    xLabel: "t",
    yLabel: "population",
  },
  phase: {
    xColumn: "t",
    seriesColumns: ["phase"],
    extraColumns: [],
    xLabel: "t",
    yLabel: "phase (rad)",
  },
  sweep: {
    xColumn: "gamma_over_kappa",
    seriesColumns: ["F_aa", "F_ab", "F_ba", "F_bb"],
    extraColumns: [],
    xLabel: "gamma/kappa",
    yLabel: "fidelity",
  },
};

/** Raised when an input file does not match the documented CSV layout. */
export class SchemaError extends Error {
  constructor(
    message: string,
    public readonly file: string,
    public readonly column?: string,
  ) {
    super(message);
    this.name = "SchemaError";
  }
}

/**
 * A parsed CSV with the original cell text kept alongside the numbers.
 * Raw cells let --dump re-emit columns byte-for-byte.
 */
export interface Table {
  path: string;
  /** Header names in file order. */
  columns: string[];
  /** Raw cell text per column, in row order. */
  raw: Map<string, string[]>;
  /** Parsed values per column. */
  values: Map<string, number[]>;
  /** Whether the file ended with a newline. */
  trailingNewline: boolean;
}

export function loadTable(path: string, kind: FigureKind): Table {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch {
    throw new SchemaError(`input file not found: ${path}`, path);
  }
  const trailingNewline = text.endsWith("\n");

  const parsed = Papa.parse<string[]>(text, { delimiter: ",", skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0];
    const where = e.row === undefined ? "" : ` at row ${e.row + 1}`;
    throw new SchemaError(`${path}: CSV parse error${where}: ${e.message}`, path);
  }
  const rows = parsed.data;
  if (rows.length === 0) {
    throw new SchemaError(`${path}: empty file`, path);
  }

  const columns = rows[0];
  const schema = SCHEMAS[kind];
  const expected = [schema.xColumn, ...schema.seriesColumns, ...schema.extraColumns];

  const seen = new Set<string>();
  for (const name of columns) {
    if (seen.has(name)) {
      throw new SchemaError(`${path}: duplicate column '${name}'`, path, name);
    }
    seen.add(name);
    if (!expected.includes(name)) {
      throw new SchemaError(`${path}: unexpected column '${name}'`, path, name);
    }
  }
  for (const name of expected) {
    if (!seen.has(name)) {
      throw new SchemaError(`${path}: missing column '${name}'`, path, name);
    }
  }

  const body = rows.slice(1);
  if (body.length === 0) {
    throw new SchemaError(`${path}: no data rows`, path);
  }

  const raw = new Map<string, string[]>(columns.map((c) => [c, []]));
  const values = new Map<string, number[]>(columns.map((c) => [c, []]));
  body.forEach((row, i) => {
    if (row.length !== columns.length) {
      throw new SchemaError(
        `${path}: row ${i + 2} has ${row.length} cells, expected ${columns.length}`,
        path,
      );
    }
    row.forEach((cell, j) => {
      const name = columns[j];
      const v = Number(cell);
      if (cell.trim() === "" || !Number.isFinite(v)) {
        throw new SchemaError(
          `${path}: column '${name}' row ${i + 2}: not a number: '${cell}'`,
          path,
          name,
        );
      }
      raw.get(name)!.push(cell);
      values.get(name)!.push(v);
    });
  });

  return { path, columns, raw, values, trailingNewline };
}
