/**
 * Minimal structural types for the chart options we build.  Only the fields
 * the figure builders actually set are modeled; the rendering layer hands
 * the object to echarts untouched.
 */

export interface PlotSeries {
  type: "line";
  name: string;
  /** [x, y] pairs copied verbatim from the CSV cells */
  data: [number, number][];
  symbol?: string;
  symbolSize?: number;
  lineStyle?: Record<string, unknown>;
  itemStyle?: Record<string, unknown>;
  color?: string;
  xAxisIndex?: number;
  yAxisIndex?: number;
}

export interface PlotAxis {
  type: "value" | "log";
  name?: string;
  gridIndex?: number;
  scale?: boolean;
  [key: string]: unknown;
}

export interface PlotOption {
  animation: boolean;
  backgroundColor: string;
  textStyle: Record<string, unknown>;
  title: Record<string, unknown>;
  legend: Record<string, unknown>;
  grid: Record<string, unknown> | Record<string, unknown>[];
  xAxis: PlotAxis | PlotAxis[];
  yAxis: PlotAxis | PlotAxis[];
  series: PlotSeries[];
}
