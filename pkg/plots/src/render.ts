/**
 * File-level pipeline and the argument handling behind the `plot` bin.
 *
 * Exit codes follow the companion CLI: 0 rendered, 1 the input was
 * unusable (schema mismatch, empty sweep, p=0 rows, unreadable file),
 * 2 the invocation itself was wrong.
 */

import { readFileSync, writeFileSync } from "node:fs";

import { Resvg } from "@resvg/resvg-js";

import { renderFigure } from "./figure.js";
import { SweepFormatError, parseSweep } from "./schema.js";

const USAGE = "usage: plot --in sweep.csv --out figure.svg|figure.png";

export function renderSweep(csvText: string): string {
  return renderFigure(parseSweep(csvText));
}

export function renderToFile(inPath: string, outPath: string): void {
  const svg = renderSweep(readFileSync(inPath, "utf8"));
  if (outPath.endsWith(".svg")) {
    writeFileSync(outPath, svg);
  } else {
    const png = new Resvg(svg, { fitTo: { mode: "width", value: 1360 } });
    writeFileSync(outPath, png.render().asPng());
  }
}

export function run(argv: string[]): number {
  const args = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 1) {
    const flag = argv[i];
    if (flag !== "--in" && flag !== "--out") {
      console.error(`unknown argument ${flag}\n${USAGE}`);
      return 2;
    }
    const value = argv[i + 1];
    if (value === undefined) {
      console.error(`${flag} needs a value\n${USAGE}`);
      return 2;
    }
    args.set(flag, value);
    i += 1;
  }
  const input = args.get("--in");
  const output = args.get("--out");
  if (!input || !output) {
    console.error(USAGE);
    return 2;
  }
  if (!output.endsWith(".svg") && !output.endsWith(".png")) {
    console.error(`--out must end in .svg or .png, got ${output}`);
    return 2;
  }
  try {
    renderToFile(input, output);
  } catch (err) {
    if (err instanceof SweepFormatError) {
      console.error(`error: ${err.message}`);
      return 1;
    }
    if (err instanceof Error && "code" in err) {
      console.error(`error: ${err.message}`);
      return 1;
    }
    throw err;
  }
  return 0;
}
