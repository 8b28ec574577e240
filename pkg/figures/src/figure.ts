import { basename } from "path";
import { FigureKind, SCHEMAS, Table, loadTable } from "./schema";

export interface FigureSpec {
  kind: FigureKind;
  inputs: string[];
  output?: string;
  xLabel?: string;
  yLabel?: string;
  title?: string;
  width?: number;
  height?: number;
}

export interface Series {
  label: string;
  x: number[];
  y: number[];
}

export interface FigureModel {
  kind: FigureKind;
  series: Series[];
  xLabel: string;
  yLabel: string;
  title?: string;
  xDomain: [number, number];
  yDomain: [number, number];
}

function stem(path: string): string {
  return basename(path).replace(/\.[^.]*$/, "");
}

/** Pull the plotted curves out of validated tables; one curve per series column per file. */
export function buildModel(spec: FigureSpec, tables: Table[]): FigureModel {
  const schema = SCHEMAS[spec.kind];
  const series: Series[] = [];
  for (const table of tables) {
    const x = table.values.get(schema.xColumn)!;
    for (const col of schema.seriesColumns) {
      const label = tables.length > 1 ? `${stem(table.path)} ${col}` : col;
      series.push({ label, x, y: table.values.get(col)! });
    }
  }

  let xMin = Infinity, xMax = -Infinity, yMin = Infinity, yMax = -Infinity;
  for (const s of series) {
    for (const v of s.x) { if (v < xMin) xMin = v; if (v > xMax) xMax = v; }
    for (const v of s.y) { if (v < yMin) yMin = v; if (v > yMax) yMax = v; }
  }

  return {
    kind: spec.kind,
    series,
    xLabel: spec.xLabel ?? schema.xLabel,
    yLabel: spec.yLabel ?? schema.yLabel,
    title: spec.title,
    xDomain: padDomain(xMin, xMax, 0),
    yDomain: padDomain(yMin, yMax, 0.05),
  };
}

/** Pad a data extent; a flat extent gets a fixed margin so the line sits mid-plot. */
export function padDomain(lo: number, hi: number, frac: number): [number, number] {
  const span = hi - lo;
  if (span <= Math.abs(hi) * 1e-12 || span === 0) {
    const pad = Math.max(0.5, Math.abs(hi) * 0.1);
    return [lo - pad, hi + pad];
  }
  return [lo - span * frac, hi + span * frac];
}

export function loadFigure(spec: FigureSpec): { tables: Table[]; model: FigureModel } {
  const tables = spec.inputs.map((p) => loadTable(p, spec.kind));
  return { tables, model: buildModel(spec, tables) };
}
