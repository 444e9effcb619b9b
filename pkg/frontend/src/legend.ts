/** The heat map's five count classes. Class boundaries come from the API's
 * color_class field (1, 2..10, 11..100, 101..1000, 1001+); the labels below
 * are the user-facing rendering of those boundaries and the swatch colors
 * are presentation only.
 */

export interface LegendEntry {
  classIndex: number;
  label: string;
  color: string;
}

export const LEGEND: readonly LegendEntry[] = Object.freeze([
  { classIndex: 1, label: "1", color: "#ffffb2" },
  { classIndex: 2, label: "2–10", color: "#fecc5c" },
  { classIndex: 3, label: "11–100", color: "#fd8d3c" },
  { classIndex: 4, label: "101–1,000", color: "#f03b20" },
  { classIndex: 5, label: "1,001+", color: "#bd0026" },
]);

export function colorForClass(classIndex: number): string {
  const entry = LEGEND.find((candidate) => candidate.classIndex === classIndex);
  return entry ? entry.color : "#999999";
}
