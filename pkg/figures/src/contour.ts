/**
 * Marching-squares level extraction for the ratio curves on the 2d
 * efficiency maps. Works directly in pixel coordinates so the linear
 * interpolation matches the panel's (log) axis mapping.
 */

export type Segment = [number, number, number, number];

/**
 * Level segments of z on the grid of pixel centers (xs[i], ys[j]),
 * z indexed [i][j]. Cells touching a non-finite corner are skipped.
 */
export function levelSegments(
  xs: number[],
  ys: number[],
  z: number[][],
  level: number,
): Segment[] {
  const segs: Segment[] = [];
  const cross = (a: number, b: number) => (level - a) / (b - a);
  for (let i = 0; i + 1 < xs.length; i++) {
    for (let j = 0; j + 1 < ys.length; j++) {
      const z00 = z[i][j];
      const z10 = z[i + 1][j];
      const z01 = z[i][j + 1];
      const z11 = z[i + 1][j + 1];
      if (![z00, z10, z01, z11].every(Number.isFinite)) continue;
      let code = 0;
      if (z00 > level) code |= 1;
      if (z10 > level) code |= 2;
      if (z11 > level) code |= 4;
      if (z01 > level) code |= 8;
      if (code === 0 || code === 15) continue;
      // edge midcrossings: bottom (j), right (i+1), top (j+1), left (i)
      const pts: Record<string, [number, number]> = {};
      if ((code & 1) !== ((code >> 1) & 1)) {
        pts.b = [xs[i] + cross(z00, z10) * (xs[i + 1] - xs[i]), ys[j]];
      }
      if (((code >> 1) & 1) !== ((code >> 2) & 1)) {
        pts.r = [xs[i + 1], ys[j] + cross(z10, z11) * (ys[j + 1] - ys[j])];
      }
      if (((code >> 3) & 1) !== ((code >> 2) & 1)) {
        pts.t = [xs[i] + cross(z01, z11) * (xs[i + 1] - xs[i]), ys[j + 1]];
      }
      if ((code & 1) !== ((code >> 3) & 1)) {
        pts.l = [xs[i], ys[j] + cross(z00, z01) * (ys[j + 1] - ys[j])];
      }
      const pairsFor = (c: number): [string, string][] => {
        switch (c) {
          case 1: case 14: return [["b", "l"]];
          case 2: case 13: return [["b", "r"]];
          case 3: case 12: return [["l", "r"]];
          case 4: case 11: return [["r", "t"]];
          case 6: case 9: return [["b", "t"]];
          case 7: case 8: return [["l", "t"]];
          case 5: {
            // saddle: disambiguate with the cell-center value
            const center = (z00 + z10 + z01 + z11) / 4;
            return center > level ? [["b", "r"], ["l", "t"]] : [["b", "l"], ["r", "t"]];
          }
          default: {
            const center = (z00 + z10 + z01 + z11) / 4;
            return center > level ? [["b", "l"], ["r", "t"]] : [["b", "r"], ["l", "t"]];
          }
        }
      };
      for (const [e0, e1] of pairsFor(code)) {
        const p0 = pts[e0];
        const p1 = pts[e1];
        if (p0 && p1) segs.push([p0[0], p0[1], p1[0], p1[1]]);
      }
    }
  }
  return segs;
}
