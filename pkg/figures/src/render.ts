import { createCanvas, SKRSContext2D } from "@napi-rs/canvas";
import { FigureModel } from "./figure";

export const PALETTE = [
  "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

const FONT = "DejaVu Sans";

/** Round tick step to a 1/2/5 decade multiple, d3-style. */
export function tickStep(lo: number, hi: number, count: number): number {
  const raw = (hi - lo) / Math.max(1, count);
  const pow = Math.pow(10, Math.floor(Math.log10(raw)));
  const frac = raw / pow;
  if (frac >= 5) return 10 * pow;
  if (frac >= 2) return 5 * pow;
  if (frac >= 1) return 2 * pow;
  return pow;
}

export function ticks(lo: number, hi: number, count: number): number[] {
  const step = tickStep(lo, hi, count);
  const start = Math.ceil(lo / step);
  const stop = Math.floor(hi / step);
  const out: number[] = [];
  for (let i = start; i <= stop; i++) out.push(i * step);
  return out;
}

export function formatTick(v: number, step: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e5 || a < 1e-4) return v.toExponential(1);
  const decimals = Math.max(0, -Math.floor(Math.log10(step)));
  return v.toFixed(Math.min(decimals, 10));
}

interface Frame {
  left: number;
  right: number;
  top: number;
  bottom: number;
}

/** Rasterize a figure model to a PNG buffer. Pure function of its inputs. */
export function renderFigure(model: FigureModel, width = 800, height = 500): Buffer {
  const canvas = createCanvas(width, height);
  const ctx = canvas.getContext("2d");

  ctx.fillStyle = "#ffffff";
  ctx.fillRect(0, 0, width, height);

  const frame: Frame = {
    left: 78,
    right: width - 24,
    top: model.title ? 46 : 24,
    bottom: height - 58,
  };

  const [x0, x1] = model.xDomain;
  const [y0, y1] = model.yDomain;
  const sx = (v: number) => frame.left + ((v - x0) / (x1 - x0)) * (frame.right - frame.left);
  const sy = (v: number) => frame.bottom - ((v - y0) / (y1 - y0)) * (frame.bottom - frame.top);

  const xTicks = ticks(x0, x1, 6);
  const yTicks = ticks(y0, y1, 6);
  const xStep = tickStep(x0, x1, 6);
  const yStep = tickStep(y0, y1, 6);

  // gridlines under everything else
  ctx.strokeStyle = "#dddddd";
  ctx.lineWidth = 1;
  for (const t of xTicks) {
    line(ctx, sx(t), frame.top, sx(t), frame.bottom);
  }
  for (const t of yTicks) {
    line(ctx, frame.left, sy(t), frame.right, sy(t));
  }

  // curves, clipped to the frame
  ctx.save();
  ctx.beginPath();
  ctx.rect(frame.left, frame.top, frame.right - frame.left, frame.bottom - frame.top);
  ctx.clip();
  model.series.forEach((s, i) => {
    ctx.strokeStyle = PALETTE[i % PALETTE.length];
    ctx.lineWidth = 2;
    ctx.lineJoin = "round";
    ctx.beginPath();
    for (let j = 0; j < s.x.length; j++) {
      const px = sx(s.x[j]);
      const py = sy(s.y[j]);
      if (j === 0) ctx.moveTo(px, py);
      else ctx.lineTo(px, py);
    }
    ctx.stroke();
  });
  ctx.restore();

  // frame on top of curve edges
  ctx.strokeStyle = "#000000";
  ctx.lineWidth = 1;
  ctx.strokeRect(frame.left, frame.top, frame.right - frame.left, frame.bottom - frame.top);

  ctx.fillStyle = "#000000";
  ctx.font = `12px ${FONT}`;
  ctx.textBaseline = "top";
  for (const t of xTicks) {
    line(ctx, sx(t), frame.bottom, sx(t), frame.bottom + 5, "#000000");
    const label = formatTick(t, xStep);
    const w = ctx.measureText(label).width;
    ctx.fillText(label, sx(t) - w / 2, frame.bottom + 8);
  }
  ctx.textBaseline = "middle";
  for (const t of yTicks) {
    line(ctx, frame.left - 5, sy(t), frame.left, sy(t), "#000000");
    const label = formatTick(t, yStep);
    const w = ctx.measureText(label).width;
    ctx.fillText(label, frame.left - 9 - w, sy(t));
  }

  ctx.font = `14px ${FONT}`;
  ctx.textBaseline = "alphabetic";
  const xlw = ctx.measureText(model.xLabel).width;
  ctx.fillText(model.xLabel, (frame.left + frame.right) / 2 - xlw / 2, height - 14);

  ctx.save();
  ctx.translate(18, (frame.top + frame.bottom) / 2);
  ctx.rotate(-Math.PI / 2);
  const ylw = ctx.measureText(model.yLabel).width;
  ctx.fillText(model.yLabel, -ylw / 2, 0);
  ctx.restore();

  if (model.title) {
    ctx.font = `15px ${FONT}`;
    const tw = ctx.measureText(model.title).width;
    ctx.fillText(model.title, (frame.left + frame.right) / 2 - tw / 2, 20);
  }

  drawLegend(ctx, model, frame);

  return canvas.toBuffer("image/png");
}

function line(ctx: SKRSContext2D, ax: number, ay: number, bx: number, by: number, color?: string) {
  if (color) ctx.strokeStyle = color;
  ctx.beginPath();
  ctx.moveTo(ax, ay);
  ctx.lineTo(bx, by);
  ctx.stroke();
}

function drawLegend(ctx: SKRSContext2D, model: FigureModel, frame: Frame) {
  ctx.font = `12px ${FONT}`;
  const rowH = 18;
  const swatch = 22;
  const pad = 8;
  let textW = 0;
  for (const s of model.series) {
    textW = Math.max(textW, ctx.measureText(s.label).width);
  }
  const boxW = pad + swatch + 6 + textW + pad;
  const boxH = pad + rowH * model.series.length + pad - 6;
  const bx = frame.right - boxW - 10;
  const by = frame.top + 10;

  ctx.fillStyle = "#ffffff";
  ctx.fillRect(bx, by, boxW, boxH);
  ctx.strokeStyle = "#999999";
  ctx.lineWidth = 1;
  ctx.strokeRect(bx, by, boxW, boxH);

  model.series.forEach((s, i) => {
    const cy = by + pad + rowH * i + 6;
    ctx.strokeStyle = PALETTE[i % PALETTE.length];
    ctx.lineWidth = 2;
    line(ctx, bx + pad, cy, bx + pad + swatch, cy);
    ctx.fillStyle = "#000000";
    ctx.textBaseline = "middle";
    ctx.fillText(s.label, bx + pad + swatch + 6, cy);
  });
  ctx.textBaseline = "alphabetic";
}
