#!/usr/bin/env node
/**
 * plotfig <csv> --out <file> [--png] [--title <str>] [--width N] [--height N]
 *
 * Reads a curve CSV produced by the expanders CLI and writes one figure.
 * SVG by default; --png rasterizes through the optional @resvg/resvg-js
 * dependency. Malformed CSVs exit nonzero with the offending line number.
 */

import { readFileSync, writeFileSync } from "node:fs";
import process from "node:process";

import { CsvError, parseCurveFile } from "./csv.js";
import { render, type Style } from "./svg.js";

interface Options {
  input: string;
  out: string;
  png: boolean;
  style: Style;
}

function usage(): string {
  return "usage: plotfig <csv> --out <file> [--png] [--title <str>] [--width N] [--height N]";
}

function parseArgs(argv: string[]): Options {
  let input: string | undefined;
  let out: string | undefined;
  let png = false;
  const style: Style = {};
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    const next = (): string => {
      i += 1;
      if (i >= argv.length) {
        throw new Error(`${arg} needs a value`);
      }
      return argv[i];
    };
    switch (arg) {
      case "--out":
        out = next();
        break;
      case "--png":
        png = true;
        break;
      case "--title":
        style.title = next();
        break;
      case "--width":
        style.width = Number(next());
        break;
      case "--height":
        style.height = Number(next());
        break;
      case "--help":
      case "-h":
        console.log(usage());
        process.exit(0);
        break;
      default:
        if (arg.startsWith("--")) {
          throw new Error(`unknown flag ${arg}`);
        }
        if (input !== undefined) {
          throw new Error("only one input CSV is allowed");
        }
        input = arg;
    }
  }
  if (input === undefined || out === undefined) {
    throw new Error(usage());
  }
  if (style.width !== undefined && !(style.width > 100)) {
    throw new Error("--width must exceed 100");
  }
  if (style.height !== undefined && !(style.height > 100)) {
    throw new Error("--height must exceed 100");
  }
  return { input, out, png, style };
}

async function toPng(svg: string): Promise<Buffer> {
  let resvg;
  try {
    resvg = await import("@resvg/resvg-js");
  } catch {
    throw new Error("PNG output needs the optional @resvg/resvg-js dependency");
  }
  return new resvg.Resvg(svg).render().asPng();
}

export async function main(argv: string[]): Promise<number> {
  let options: Options;
  try {
    options = parseArgs(argv);
  } catch (error) {
    console.error(`plotfig: ${(error as Error).message}`);
    return 2;
  }
  try {
    const text = readFileSync(options.input, "utf-8");
    const curves = parseCurveFile(text, options.input);
    const svg = render(curves, options.style);
    if (options.png) {
      writeFileSync(options.out, await toPng(svg));
    } else {
      writeFileSync(options.out, svg);
    }
    return 0;
  } catch (error) {
    if (error instanceof CsvError) {
      console.error(`plotfig: ${options.input}: ${error.message}`);
    } else {
      console.error(`plotfig: ${(error as Error).message}`);
    }
    return 1;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
  main(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
