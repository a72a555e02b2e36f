#!/usr/bin/env node
/**
 * plotkit <figure-id> --in <dir> --out <file.svg>
 *
 * Discovers the figure's input tables in the given directory by the
 * file-name conventions of the rbmtfi CLI and writes one SVG.
 */

import { readdirSync } from "node:fs";
import { join } from "node:path";
import { pathToFileURL } from "node:url";
import { FIGURE_IDS, FigureId, FigureSpec } from "./figures.js";
import { renderFigure } from "./render.js";

const INPUT_PATTERNS: Record<FigureId, RegExp> = {
  fig2: /^energy\.csv$/,
  fig3: /^profile_L\d+_gamma[0-9.]+\.csv$/,
  fig4: /^tail_L\d+\.csv$/,
  fig5: /^thermo_gamma[0-9.]+_L\d+\.csv$/,
  fig6: /^variance_L\d+\.csv$/,
};

export function discoverInputs(figure: FigureId, dir: string): string[] {
  let names: string[];
  try {
    names = readdirSync(dir);
  } catch (err) {
    throw new Error(`cannot read input directory ${dir}: ${(err as Error).message}`);
  }
  const matched = names.filter((n) => INPUT_PATTERNS[figure].test(n)).sort();
  if (matched.length === 0) {
    throw new Error(
      `no ${figure} inputs in ${dir} (expected files matching ${INPUT_PATTERNS[figure]})`,
    );
  }
  return matched.map((n) => join(dir, n));
}

export function parseArgs(argv: string[]): FigureSpec {
  const [figure, ...rest] = argv;
  if (!figure || !FIGURE_IDS.includes(figure as FigureId)) {
    throw new Error(`usage: plotkit <${FIGURE_IDS.join("|")}> --in <dir> --out <file.svg>`);
  }
  let inDir: string | undefined;
  let outFile: string | undefined;
  for (let i = 0; i < rest.length; i += 2) {
    const flag = rest[i];
    const value = rest[i + 1];
    if (value === undefined) throw new Error(`flag ${flag} needs a value`);
    if (flag === "--in") inDir = value;
    else if (flag === "--out") outFile = value;
    else throw new Error(`unknown flag ${flag}`);
  }
  if (!inDir || !outFile) {
    throw new Error("both --in <dir> and --out <file.svg> are required");
  }
  return {
    figure: figure as FigureId,
    inputs: discoverInputs(figure as FigureId, inDir),
    output: outFile,
  };
}

export function main(argv: string[]): number {
  try {
    const spec = parseArgs(argv);
    const written = renderFigure(spec);
    console.log(`wrote ${written} (${spec.inputs.length} input table${spec.inputs.length === 1 ? "" : "s"})`);
    return 0;
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(main(process.argv.slice(2)));
}
