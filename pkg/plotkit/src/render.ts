/**
 * Server-side SVG rendering of a built option.  Each CLI invocation is a
 * fresh process, so identical inputs yield byte-identical SVG files.
 */

import { mkdirSync, writeFileSync } from "node:fs";
import { createRequire } from "node:module";
import { dirname } from "node:path";
import { buildOption, figureHeight, FigureSpec } from "./figures.js";
import type { PlotOption } from "./types.js";

// echarts ships CommonJS with `export =` types; load it through require so
// the same build works under Node's ESM loader.
const require = createRequire(import.meta.url);
const echarts = require("echarts") as typeof import("echarts");
import { FIGURE_WIDTH } from "./theme.js";

export function renderSvg(option: PlotOption, width: number, height: number): string {
  const chart = echarts.init(null, null, {
    renderer: "svg",
    ssr: true,
    width,
    height,
  });
  chart.setOption(option as Parameters<typeof chart.setOption>[0]);
  const svg = chart.renderToSVGString();
  chart.dispose();
  return svg;
}

/** Build, render and write one figure; returns the output path. */
export function renderFigure(spec: FigureSpec): string {
  const option = buildOption(spec);
  const svg = renderSvg(option, FIGURE_WIDTH, figureHeight(spec, option));
  mkdirSync(dirname(spec.output), { recursive: true });
  writeFileSync(spec.output, svg, "utf-8");
  return spec.output;
}
