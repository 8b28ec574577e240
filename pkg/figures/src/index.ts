export { FigureKind, FIGURE_KINDS, SCHEMAS, SchemaError, Table, loadTable } from "./schema";
export { FigureSpec, FigureModel, Series, buildModel, loadFigure, padDomain } from "./figure";
export { renderFigure, ticks, tickStep, formatTick, PALETTE } from "./render";
export { dumpTable } from "./dump";
export { main } from "./cli";
