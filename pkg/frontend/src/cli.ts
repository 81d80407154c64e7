#!/usr/bin/env node
/**
 * render --in <dir> --figs fig2b,fig3c [--out <dir>] [--format svg]
 *
 * Renders figure SVGs from a scenario bundle directory. Exit codes:
 * 0 success, 1 render/schema failure, 2 usage error.
 */

import * as process from "node:process";

import { EmptyDatasetError, SchemaError } from "./csv.js";
import { figureIds } from "./recipes.js";
import { ManifestError, renderFigures } from "./render.js";

interface Args {
  inputDir: string;
  outputDir: string;
  figs: string[];
  format: string;
}

function usage(): string {
  return (
    "usage: render --in <bundle-dir> [--figs fig2b,fig3c] " +
    "[--out <dir>] [--format svg]\n" +
    `known figure ids: ${figureIds().join(", ")}`
  );
}

export function parseArgs(argv: string[]): Args {
  let inputDir: string | undefined;
  let outputDir: string | undefined;
  let figs: string[] | undefined;
  let format = "svg";
  for (let i = 0; i < argv.length; i += 1) {
    const arg = argv[i]!;
    const next = () => {
      i += 1;
      const v = argv[i];
      if (v === undefined) throw new Error(`missing value for ${arg}`);
      return v;
    };
    switch (arg) {
      case "--in":
        inputDir = next();
        break;
      case "--out":
        outputDir = next();
        break;
      case "--figs":
        figs = next().split(",").filter((f) => f.length > 0);
        break;
      case "--format":
        format = next();
        break;
      case "--help":
      case "-h":
        throw new Error(usage());
      default:
        throw new Error(`unknown argument '${arg}'\n${usage()}`);
    }
  }
  if (inputDir === undefined) {
    throw new Error(`--in is required\n${usage()}`);
  }
  return {
    inputDir,
    outputDir: outputDir ?? inputDir,
    figs: figs ?? figureIds(),
    format,
  };
}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error((err as Error).message);
    return 2;
  }
  try {
    const written = renderFigures(
      args.inputDir,
      args.figs,
      args.outputDir,
      args.format,
    );
    for (const p of written) console.log(`wrote ${p}`);
    return 0;
  } catch (err) {
    if (
      err instanceof SchemaError ||
      err instanceof EmptyDatasetError ||
      err instanceof ManifestError
    ) {
      console.error(`render failed: ${err.message}`);
      return 1;
    }
    console.error(`render failed: ${(err as Error).message}`);
    return 1;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
