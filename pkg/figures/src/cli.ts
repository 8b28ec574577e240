#!/usr/bin/env node
import { mkdirSync, writeFileSync } from "fs";
import { dirname } from "path";
import yargs from "yargs";
import { FigureSpec, loadFigure } from "./figure";
import { renderFigure } from "./render";
import { dumpTable } from "./dump";
import { FIGURE_KINDS, FigureKind, SchemaError } from "./schema";

class UsageError extends Error {}

const KIND_HELP: Record<FigureKind, string> = {
  populations: "exciton and cavity occupation vs time from a trajectory CSV",
  phase: "reflected pulse phase vs time from a phase CSV",
  sweep: "basis-state fidelities vs gamma/kappa from a sweep CSV",
};

interface CliArgs {
  in: string[];
  out?: string;
  dump?: string;
  xlabel?: string;
  ylabel?: string;
  title?: string;
  width: number;
  height: number;
}

export async function main(argv: string[]): Promise<number> {
  let spec: (FigureSpec & { dump?: string }) | undefined;

  const parser = yargs(argv)
    .scriptName("figures")
    .usage("$0 <kind> --in data.csv [--in more.csv] --out figure.png")
    .strict()
    .exitProcess(false)
    .fail((msg, err) => {
      throw new UsageError(msg || (err ? err.message : "usage error"));
    });

  for (const kind of FIGURE_KINDS) {
    parser.command(
      kind,
      KIND_HELP[kind],
      (y) =>
        y
          .option("in", { type: "string", array: true, demandOption: true, describe: "input CSV path(s)" })
          .option("out", { type: "string", describe: "output PNG path" })
          .option("dump", { type: "string", describe: "re-emit the plotted columns to this CSV" })
          .option("xlabel", { type: "string", describe: "x axis label override" })
          .option("ylabel", { type: "string", describe: "y axis label override" })
          .option("title", { type: "string", describe: "figure title" })
          .option("width", { type: "number", default: 800 })
          .option("height", { type: "number", default: 500 }),
      (args) => {
        const a = args as unknown as CliArgs;
        spec = {
          kind,
          inputs: a.in,
          output: a.out,
          xLabel: a.xlabel,
          yLabel: a.ylabel,
          title: a.title,
          width: a.width,
          height: a.height,
          dump: a.dump,
        };
      },
    );
  }

  let parsed;
  try {
    parsed = await parser.parse();
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 2;
  }
  if ((parsed as { help?: boolean }).help) return 0;
  if (!spec) {
    console.error(`error: expected a figure kind: ${FIGURE_KINDS.join(" | ")}`);
    return 2;
  }

  if (!spec.output && !spec.dump) {
    console.error("error: nothing to do: pass --out and/or --dump");
    return 2;
  }
  if (spec.dump && spec.inputs.length !== 1) {
    console.error("error: --dump expects exactly one --in file");
    return 2;
  }
  if (!Number.isInteger(spec.width) || spec.width! < 200 || !Number.isInteger(spec.height) || spec.height! < 150) {
    console.error("error: --width/--height must be integers of at least 200x150");
    return 2;
  }

  try {
    const { tables, model } = loadFigure(spec);
    if (spec.output) {
      const png = renderFigure(model, spec.width, spec.height);
      writeOut(spec.output, png);
      console.log(`wrote ${spec.output} (${spec.width}x${spec.height}, ${model.series.length} series)`);
    }
    if (spec.dump) {
      writeOut(spec.dump, dumpTable(tables[0], spec.kind));
      console.log(`wrote ${spec.dump}`);
    }
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`error: ${err.message}`);
      return 3;
    }
    throw err;
  }
  return 0;
}

function writeOut(path: string, data: Buffer | string) {
  const dir = dirname(path);
  if (dir && dir !== ".") mkdirSync(dir, { recursive: true });
  writeFileSync(path, data);
}

if (require.main === module) {
  main(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
