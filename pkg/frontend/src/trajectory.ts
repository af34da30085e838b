/** Geometry for the incumbent-distance series.
 *
 * One polyline: x is labels used, y is the best distance-to-target seen so
 * far.  The series the service sends is non-increasing by construction, so
 * the line only ever steps down or holds.
 */

export interface TrajectoryGeometry {
  width: number;
  height: number;
  pad: number;
  /** Pixel coordinates, one per series point. */
  points: [number, number][];
  /** SVG path data for the polyline; empty when there are no points. */
  path: string;
  /** Axis extents in data units. */
  xMax: number;
  yMax: number;
}

/** True when best-so-far never worsens (allowing float fuzz). */
export const isNonIncreasing = (series: [number, number][]): boolean =>
  series.every(([, v], i) => i === 0 || v <= series[i - 1][1] + 1e-12);

const round2 = (v: number): number => Math.round(v * 100) / 100;

export const trajectoryGeometry = (
  series: [number, number][],
  budget: number,
  width = 360,
  height = 120,
  pad = 10,
): TrajectoryGeometry => {
  const xMax = Math.max(budget, 1, ...series.map(([used]) => used));
  const yMax = Math.max(1e-12, ...series.map(([, v]) => v));
  const sx = (used: number): number => pad + ((width - 2 * pad) * used) / xMax;
  const sy = (v: number): number => height - pad - ((height - 2 * pad) * v) / yMax;
  const points = series.map(([used, v]): [number, number] => [
    round2(sx(used)),
    round2(sy(v)),
  ]);
  const path = points
    .map(([x, y], i) => `${i === 0 ? "M" : "L"}${x} ${y}`)
    .join(" ");
  return { width, height, pad, points, path, xMax, yMax };
};
