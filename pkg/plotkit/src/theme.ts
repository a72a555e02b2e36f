/**
 * Fixed plot styling. No runtime configuration: figures regenerate
 * identically from identical tables.
 */

export const SERIES_COLORS = [
  "#c23531",
  "#2f4554",
  "#61a0a8",
  "#d48265",
  "#749f83",
  "#ca8622",
];

export const FIGURE_WIDTH = 760;
export const FIGURE_HEIGHT = 520;
export const TWO_PANEL_HEIGHT = 760;

export const BASE_TEXT_STYLE = {
  fontFamily: "Helvetica, Arial, sans-serif",
  fontSize: 13,
  color: "#222222",
};

export const AXIS_STYLE = {
  nameTextStyle: { fontSize: 14 },
  axisLine: { lineStyle: { color: "#222222" } },
  axisTick: { lineStyle: { color: "#222222" } },
};

export function seriesColor(index: number): string {
  return SERIES_COLORS[index % SERIES_COLORS.length];
}
