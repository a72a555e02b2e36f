/**
 * Figure construction: each figure id maps a set of result tables onto an
 * echarts option object.  Builders are pure and never transform the data:
 * every plotted point is a value read from a CSV cell (log scaling happens
 * on the axis, not on the data).
 *
 * Input conventions (the file names the rbmtfi CLI emits):
 *   fig2  energy.csv                        energy + relative error vs field
 *   fig3  profile_L{n}_gamma{g}.csv         coupling profile per separation
 *   fig4  tail_L{n}.csv                     tail average vs field, per size
 *   fig5  thermo_gamma{g}_L{n}.csv          specific heat vs temperature
 *   fig6  variance_L{n}.csv                 energy variance vs field at T=1
 */

import { basename } from "node:path";
import { column, groupBy, readTable, requireColumns, Table } from "./csv.js";
import type { PlotAxis, PlotOption, PlotSeries } from "./types.js";
import { AXIS_STYLE, BASE_TEXT_STYLE, seriesColor } from "./theme.js";

export type FigureId = "fig2" | "fig3" | "fig4" | "fig5" | "fig6";

export const FIGURE_IDS: FigureId[] = ["fig2", "fig3", "fig4", "fig5", "fig6"];

export interface FigureSpec {
  figure: FigureId;
  /** input CSV paths, already discovered and sorted */
  inputs: string[];
  /** output image path (SVG) */
  output: string;
}

function lineSeries(
  name: string,
  points: [number, number][],
  index: number,
  extra: Partial<PlotSeries> = {},
): PlotSeries {
  return {
    type: "line",
    name,
    data: points,
    symbol: "circle",
    symbolSize: 7,
    lineStyle: { width: 2 },
    itemStyle: { color: seriesColor(index) },
    color: seriesColor(index),
    ...extra,
  };
}

function pairs(xs: number[], ys: number[]): [number, number][] {
  return xs.map((x, i) => [x, ys[i]]);
}

function numericSort(values: Iterable<number>): number[] {
  return [...values].sort((a, b) => a - b);
}

function baseOption(title: string) {
  return {
    animation: false,
    textStyle: BASE_TEXT_STYLE,
    title: { text: title, left: "center", textStyle: { fontSize: 16 } },
    legend: { bottom: 0, icon: "roundRect" },
    backgroundColor: "#ffffff",
  };
}

function byRowsAscending(rows: Record<string, number>[], key: string) {
  return [...rows].sort((a, b) => a[key] - b[key]);
}

/** fig2: two panels sharing the field axis; the error panel uses a log axis. */
export function buildFig2(tables: Table[]): PlotOption {
  const table = tables[0];
  requireColumns(table, ["gamma", "L", "energy", "exact_energy", "rel_error"]);
  const groups = groupBy(table, "L");
  const series: PlotSeries[] = [];
  let idx = 0;
  for (const L of numericSort(groups.keys())) {
    const rows = byRowsAscending(groups.get(L)!, "gamma");
    const gammas = rows.map((r) => r.gamma);
    series.push(lineSeries(
      `RBM L=${L}`,
      pairs(gammas, rows.map((r) => r.energy / L)),
      idx,
      { xAxisIndex: 0, yAxisIndex: 0 },
    ));
    series.push(lineSeries(
      `exact L=${L}`,
      pairs(gammas, rows.map((r) => r.exact_energy / L)),
      idx,
      {
        xAxisIndex: 0,
        yAxisIndex: 0,
        symbol: "rect",
        symbolSize: 6,
        lineStyle: { width: 1, type: "dashed" },
      },
    ));
    series.push(lineSeries(
      `L=${L}`,
      pairs(gammas, rows.map((r) => r.rel_error)),
      idx,
      { xAxisIndex: 1, yAxisIndex: 1 },
    ));
    idx += 1;
  }
  return {
    ...baseOption("Variational energy and relative error"),
    grid: [
      { top: 50, left: 80, right: 30, height: 270 },
      { top: 400, left: 80, right: 30, height: 270 },
    ],
    xAxis: [
      { type: "value", gridIndex: 0, name: "transverse field", ...AXIS_STYLE },
      { type: "value", gridIndex: 1, name: "transverse field", ...AXIS_STYLE },
    ],
    yAxis: [
      { type: "value", gridIndex: 0, name: "energy per site", scale: true, ...AXIS_STYLE },
      { type: "log", gridIndex: 1, name: "relative error", ...AXIS_STYLE },
    ],
    series,
  };
}

const PROFILE_NAME = /profile_L(\d+)_gamma([0-9.]+)\.csv$/;

/** fig3: aligned coupling profile, one curve per (size, field) input file. */
export function buildFig3(tables: Table[]): PlotOption {
  const series: PlotSeries[] = [];
  tables.forEach((table, idx) => {
    requireColumns(table, ["d", "W_d"]);
    const match = PROFILE_NAME.exec(basename(table.path));
    const label = match ? `L=${match[1]}, field=${match[2]}` : basename(table.path);
    series.push(lineSeries(label, pairs(column(table, "d"), column(table, "W_d")), idx,
                           { symbolSize: 5 }));
  });
  return {
    ...baseOption("Optimized coupling profile"),
    grid: { top: 50, left: 80, right: 30, bottom: 90 },
    xAxis: { type: "value", name: "separation", ...AXIS_STYLE },
    yAxis: { type: "value", name: "coupling", scale: true, ...AXIS_STYLE },
    series,
  };
}

const TAIL_NAME = /tail_L(\d+)\.csv$/;

/** fig4: long-range tail average vs field, one curve per chain size. */
export function buildFig4(tables: Table[]): PlotOption {
  const series: PlotSeries[] = [];
  tables.forEach((table, idx) => {
    requireColumns(table, ["gamma", "w_tail"]);
    const match = TAIL_NAME.exec(basename(table.path));
    const label = match ? `L=${match[1]}` : basename(table.path);
    const rows = byRowsAscending(table.rows, "gamma");
    series.push(lineSeries(label, pairs(rows.map((r) => r.gamma), rows.map((r) => r.w_tail)), idx));
  });
  return {
    ...baseOption("Coupling tail across the transition"),
    grid: { top: 50, left: 80, right: 30, bottom: 90 },
    xAxis: { type: "value", name: "transverse field", ...AXIS_STYLE },
    yAxis: { type: "value", name: "tail average", scale: true, ...AXIS_STYLE },
    series,
  };
}

const THERMO_NAME = /thermo_gamma([0-9.]+)_L(\d+)\.csv$/;

/** fig5: specific heat vs temperature; one panel per field, curve per size. */
export function buildFig5(tables: Table[]): PlotOption {
  const panels = new Map<string, Table[]>();
  for (const table of tables) {
    requireColumns(table, ["T", "c_per_site", "L", "gamma"]);
    const match = THERMO_NAME.exec(basename(table.path));
    const key = match ? match[1] : String(table.rows[0].gamma);
    panels.set(key, [...(panels.get(key) ?? []), table]);
  }
  const panelKeys = [...panels.keys()].sort((a, b) => Number(a) - Number(b));
  const grids: Record<string, unknown>[] = [];
  const xAxes: PlotAxis[] = [];
  const yAxes: PlotAxis[] = [];
  const series: PlotSeries[] = [];
  const panelHeight = 270;
  panelKeys.forEach((key, p) => {
    grids.push({ top: 50 + p * (panelHeight + 80), left: 80, right: 30, height: panelHeight });
    xAxes.push({ type: "value", gridIndex: p, name: "temperature", ...AXIS_STYLE });
    yAxes.push({
      type: "value", gridIndex: p, name: `specific heat per spin (field ${key})`,
      scale: true, ...AXIS_STYLE,
    });
    const sized = [...panels.get(key)!].sort((a, b) => a.rows[0].L - b.rows[0].L);
    sized.forEach((table, idx) => {
      const match = THERMO_NAME.exec(basename(table.path));
      const label = `L=${match ? match[2] : table.rows[0].L}` + (panelKeys.length > 1 ? ` (field ${key})` : "");
      const rows = byRowsAscending(table.rows, "T");
      series.push(lineSeries(label, pairs(rows.map((r) => r.T), rows.map((r) => r.c_per_site)),
                             idx, { xAxisIndex: p, yAxisIndex: p, symbolSize: 5 }));
    });
  });
  return {
    ...baseOption("Specific heat of the coupled-spin system"),
    grid: grids,
    xAxis: xAxes,
    yAxis: yAxes,
    series,
  };
}

/** fig6: energy variance per spin at the wave-function temperature. */
export function buildFig6(tables: Table[]): PlotOption {
  const series: PlotSeries[] = [];
  tables.forEach((table, idx) => {
    requireColumns(table, ["gamma", "var_per_site", "L"]);
    const rows = byRowsAscending(table.rows, "gamma");
    series.push(lineSeries(`L=${rows[0].L}`,
                           pairs(rows.map((r) => r.gamma), rows.map((r) => r.var_per_site)), idx));
  });
  return {
    ...baseOption("Energy variance at unit temperature"),
    grid: { top: 50, left: 80, right: 30, bottom: 90 },
    xAxis: { type: "value", name: "transverse field", ...AXIS_STYLE },
    yAxis: { type: "value", name: "variance per spin", scale: true, ...AXIS_STYLE },
    series,
  };
}

const BUILDERS: Record<FigureId, (tables: Table[]) => PlotOption> = {
  fig2: buildFig2,
  fig3: buildFig3,
  fig4: buildFig4,
  fig5: buildFig5,
  fig6: buildFig6,
};

export function buildOption(spec: FigureSpec): PlotOption {
  if (spec.inputs.length === 0) {
    throw new Error(`${spec.figure}: no input CSV files`);
  }
  const tables = spec.inputs.map(readTable);
  return BUILDERS[spec.figure](tables);
}

/** Height depends on the panel count (fig2 and fig5 are stacked panels). */
export function figureHeight(spec: FigureSpec, option: PlotOption): number {
  const grids = Array.isArray(option.grid) ? option.grid.length : 1;
  return grids > 1 ? 80 + grids * 350 : 520;
}
