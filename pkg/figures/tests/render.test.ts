import { describe, expect, it } from "vitest";
import { mkdtempSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import { PNG } from "pngjs";
import { buildModel, loadFigure, padDomain } from "../src/figure";
import { loadTable } from "../src/schema";
import { PALETTE, formatTick, renderFigure, tickStep, ticks } from "../src/render";

const golden = (name: string) => join(__dirname, "golden", name);

describe("tick machinery", () => {
  it("steps snap to 1/2/5 decades", () => {
    expect(tickStep(0, 10, 6)).toBe(2);
    expect(tickStep(0, 1, 6)).toBeCloseTo(0.2, 12);
    expect(tickStep(0, 100, 6)).toBe(20);
    expect(tickStep(0, 0.3, 6)).toBeCloseTo(0.05, 12);
  });

  it("ticks stay inside the domain", () => {
    expect(ticks(0, 10, 6)).toEqual([0, 2, 4, 6, 8, 10]);
    const t = ticks(2.64, 9.9, 6);
    expect(t[0]).toBeGreaterThanOrEqual(2.64);
    expect(t[t.length - 1]).toBeLessThanOrEqual(9.9);
  });

  it("formats against the step size", () => {
    expect(formatTick(0, 0.2)).toBe("0");
    expect(formatTick(0.2, 0.2)).toBe("0.2");
    expect(formatTick(1, 0.2)).toBe("1.0");
    expect(formatTick(250000, 50000)).toBe("2.5e+5");
    expect(formatTick(5e-5, 1e-5)).toBe("5.0e-5");
  });
});

describe("padDomain", () => {
  it("pads a normal extent by the fraction", () => {
    expect(padDomain(0, 1, 0.05)).toEqual([-0.05, 1.05]);
  });

  it("opens up a flat extent so the line is visible", () => {
    const [lo, hi] = padDomain(Math.PI, Math.PI, 0.05);
    expect(hi - lo).toBeGreaterThanOrEqual(1.0);
    expect((lo + hi) / 2).toBeCloseTo(Math.PI, 12);
  });
});

describe("buildModel", () => {
  it("one curve per series column, legend label from the column name", () => {
    const table = loadTable(golden("populations.csv"), "populations");
    const model = buildModel({ kind: "populations", inputs: [table.path] }, [table]);
    expect(model.series.map((s) => s.label)).toEqual(["alpha_abs2", "beta_abs2"]);
    expect(model.xLabel).toBe("t");
    expect(model.yLabel).toBe("population");
  });

  it("prefixes labels with the file stem when overlaying inputs", () => {
    const { model } = loadFigure({
      kind: "populations",
      inputs: [golden("populations.csv"), golden("populations2.csv")],
    });
    expect(model.series.map((s) => s.label)).toEqual([
      "populations alpha_abs2",
      "populations beta_abs2",
      "populations2 alpha_abs2",
      "populations2 beta_abs2",
    ]);
  });

  it("sweep produces the four fidelity curves in column order", () => {
    const { model } = loadFigure({ kind: "sweep", inputs: [golden("sweep.csv")] });
    expect(model.series.map((s) => s.label)).toEqual(["F_aa", "F_ab", "F_ba", "F_bb"]);
    for (const s of model.series) {
      for (let i = 1; i < s.y.length; i++) {
        expect(s.y[i]).toBeLessThanOrEqual(s.y[i - 1] + 1e-12);
      }
    }
  });

  it("axis label overrides win over the schema defaults", () => {
    const { model } = loadFigure({
      kind: "phase",
      inputs: [golden("phase.csv")],
      xLabel: "time",
      yLabel: "arg r",
    });
    expect(model.xLabel).toBe("time");
    expect(model.yLabel).toBe("arg r");
  });
});

function decode(buf: Buffer): PNG {
  return PNG.sync.read(buf);
}

function colorSet(png: PNG): Set<string> {
  const out = new Set<string>();
  for (let i = 0; i < png.data.length; i += 4) {
    out.add(`${png.data[i]},${png.data[i + 1]},${png.data[i + 2]}`);
  }
  return out;
}

function rgb(hex: string): string {
  return [1, 3, 5].map((i) => parseInt(hex.slice(i, i + 2), 16)).join(",");
}

describe("renderFigure", () => {
  it("writes a white-background PNG of the requested size", () => {
    const { model } = loadFigure({ kind: "sweep", inputs: [golden("sweep.csv")] });
    const png = decode(renderFigure(model, 640, 400));
    expect(png.width).toBe(640);
    expect(png.height).toBe(400);
    expect(png.data[0]).toBe(255);
    expect(png.data[1]).toBe(255);
    expect(png.data[2]).toBe(255);
  });

  it("draws exactly the population curves, no extras", () => {
    const { model } = loadFigure({ kind: "populations", inputs: [golden("populations.csv")] });
    const colors = colorSet(decode(renderFigure(model)));
    expect(colors.has(rgb(PALETTE[0]))).toBe(true);
    expect(colors.has(rgb(PALETTE[1]))).toBe(true);
    expect(colors.has(rgb(PALETTE[2]))).toBe(false);
    expect(colors.has(rgb("#dddddd"))).toBe(true);   // gridlines
    expect(colors.has(rgb("#999999"))).toBe(true);   // legend border
  });

  it("draws all four sweep curves", () => {
    const { model } = loadFigure({ kind: "sweep", inputs: [golden("sweep.csv")] });
    const colors = colorSet(decode(renderFigure(model)));
    for (let i = 0; i < 4; i++) {
      expect(colors.has(rgb(PALETTE[i]))).toBe(true);
    }
  });

  it("renders a constant-pi phase file as a flat mid-plot line", () => {
    const dir = mkdtempSync(join(tmpdir(), "figflat-"));
    const path = join(dir, "flat.csv");
    const rows = ["t,phase"];
    for (let i = 0; i <= 100; i++) rows.push(`${i * 0.1},3.14159265359`);
    writeFileSync(path, rows.join("\n") + "\n");

    const { model } = loadFigure({ kind: "phase", inputs: [path] });
    const png = decode(renderFigure(model, 800, 500));
    const target = rgb(PALETTE[0]);
    const ys: number[] = [];
    // scan only the left half of the frame: the legend swatch reuses the
    // curve color but sits in the top-right corner
    for (let y = 0; y < png.height; y++) {
      for (let x = 100; x < 600; x++) {
        const i = (y * png.width + x) * 4;
        if (`${png.data[i]},${png.data[i + 1]},${png.data[i + 2]}` === target) {
          ys.push(y);
          break;
        }
      }
    }
    expect(ys.length).toBeGreaterThan(0);
    expect(Math.max(...ys) - Math.min(...ys)).toBeLessThanOrEqual(3);
    const mid = (Math.max(...ys) + Math.min(...ys)) / 2;
    expect(mid).toBeGreaterThan(500 * 0.4);
    expect(mid).toBeLessThan(500 * 0.6);
  });

  it("is byte-deterministic", () => {
    const { model } = loadFigure({ kind: "phase", inputs: [golden("phase.csv")] });
    const a = renderFigure(model);
    const b = renderFigure(model);
    expect(a.equals(b)).toBe(true);
  });
});
