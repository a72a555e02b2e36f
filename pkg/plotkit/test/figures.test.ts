import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";
import type { SeriesOption } from "echarts";
import { buildOption, figureHeight, FigureSpec } from "../src/figures.js";

function scratch(): string {
  return mkdtempSync(join(tmpdir(), "plotkit-fig-"));
}

function write(dir: string, name: string, content: string): string {
  const path = join(dir, name);
  writeFileSync(path, content);
  return path;
}

const TAIL_HEADER = "gamma,L,w_tail,w_tail_L,origin_index,energy,energy_err,exact_energy,rel_error,seed\n";

function seriesOf(option: ReturnType<typeof buildOption>): SeriesOption[] {
  return option.series as SeriesOption[];
}

describe("fig4", () => {
  it("draws one curve per size with L=<n> legend labels and exact data", () => {
    const dir = scratch();
    const t32 = write(dir, "tail_L32.csv",
      TAIL_HEADER +
      "0.5,32,0.0158,0.5056,3,-33.1,0.001,-33.2,0.003,1\n" +
      "1.5,32,0.0000152,0.000486,0,-52.1,0.001,-52.2,0.0001,2\n");
    const t64 = write(dir, "tail_L64.csv",
      TAIL_HEADER +
      "0.5,64,0.0079,0.5056,3,-66.2,0.001,-66.4,0.003,3\n" +
      "1.5,64,0.0000076,0.000486,0,-104.2,0.001,-104.4,0.0001,4\n");
    const spec: FigureSpec = { figure: "fig4", inputs: [t32, t64], output: "x.svg" };
    const option = buildOption(spec);
    const series = seriesOf(option);
    expect(series.map((s) => s.name)).toEqual(["L=32", "L=64"]);
    // plotted points equal CSV values exactly
    expect(series[0].data).toEqual([[0.5, 0.0158], [1.5, 0.0000152]]);
    expect(series[1].data).toEqual([[0.5, 0.0079], [1.5, 0.0000076]]);
  });

  it("fails on a tail file without the needed columns", () => {
    const dir = scratch();
    const bad = write(dir, "tail_L8.csv", "gamma,foo\n1,2\n");
    expect(() => buildOption({ figure: "fig4", inputs: [bad], output: "x.svg" }))
      .toThrow(/missing column 'w_tail'/);
  });
});

describe("fig2", () => {
  it("builds a two-panel layout with a log error axis", () => {
    const dir = scratch();
    const energy = write(dir, "energy.csv",
      "gamma,L,energy,energy_err,exact_energy,rel_error,seed\n" +
      "0.5,16,-17.0,0.01,-17.01,0.0006,1\n" +
      "1.0,16,-20.4,0.01,-20.41,0.0009,2\n");
    const option = buildOption({ figure: "fig2", inputs: [energy], output: "x.svg" });
    expect(Array.isArray(option.grid) && option.grid.length).toBe(2);
    const yAxes = option.yAxis as { type: string }[];
    expect(yAxes[1].type).toBe("log");
    const series = seriesOf(option);
    expect(series.map((s) => s.name)).toEqual(["RBM L=16", "exact L=16", "L=16"]);
    // energy panel holds per-site values, error panel raw rel_error values
    expect(series[0].data).toEqual([[0.5, -17.0 / 16], [1.0, -20.4 / 16]]);
    expect(series[2].data).toEqual([[0.5, 0.0006], [1.0, 0.0009]]);
    expect(figureHeight({ figure: "fig2", inputs: [energy], output: "x.svg" }, option))
      .toBeGreaterThan(600);
  });
});

describe("fig3 and fig5 and fig6", () => {
  it("labels profiles from their file names", () => {
    const dir = scratch();
    const p = write(dir, "profile_L64_gamma0.9.csv", "d,W_d\n0,0.55\n1,0.22\n2,0.021\n");
    const option = buildOption({ figure: "fig3", inputs: [p], output: "x.svg" });
    const series = seriesOf(option);
    expect(series[0].name).toBe("L=64, field=0.9");
    expect(series[0].data).toEqual([[0, 0.55], [1, 0.22], [2, 0.021]]);
  });

  it("fig5 groups panels by field value", () => {
    const dir = scratch();
    const header = "gamma,L,T,e_per_site,e_err,var_per_site,var_err,c_per_site,c_err,n_sweeps,seed\n";
    const a = write(dir, "thermo_gamma0.9_L32.csv",
      header + "0.9,32,0.5,-0.4,0.001,0.1,0.001,0.4,0.004,1000,1\n" +
               "0.9,32,1,-0.3,0.001,0.2,0.001,0.2,0.002,1000,1\n");
    const b = write(dir, "thermo_gamma1.1_L32.csv",
      header + "1.1,32,0.5,-0.3,0.001,0.05,0.001,0.2,0.002,1000,2\n");
    const option = buildOption({ figure: "fig5", inputs: [a, b], output: "x.svg" });
    expect(Array.isArray(option.grid) && option.grid.length).toBe(2);
    const series = seriesOf(option);
    expect(series.length).toBe(2);
    expect(series[0].data).toEqual([[0.5, 0.4], [1, 0.2]]);
  });

  it("fig6 plots variance against the field", () => {
    const dir = scratch();
    const header = "gamma,L,T,e_per_site,e_err,var_per_site,var_err,c_per_site,c_err,n_sweeps,seed\n";
    const v = write(dir, "variance_L64.csv",
      header + "0.8,64,1,-0.5,0.001,0.43,0.004,0.43,0.004,1000,1\n" +
               "1.2,64,1,-0.4,0.001,0.05,0.001,0.05,0.001,1000,2\n");
    const option = buildOption({ figure: "fig6", inputs: [v], output: "x.svg" });
    const series = seriesOf(option);
    expect(series[0].name).toBe("L=64");
    expect(series[0].data).toEqual([[0.8, 0.43], [1.2, 0.05]]);
  });

  it("rejects an empty input list", () => {
    expect(() => buildOption({ figure: "fig3", inputs: [], output: "x.svg" }))
      .toThrow(/no input CSV files/);
  });
});
