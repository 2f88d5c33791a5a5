// Screen-to-pad coordinate mapping. The on-screen panel stands in for a
// 65 x 49 mm pad; pixels map affinely onto the pad's 0..x_max / 0..y_max
// coordinate space. Screen y grows downward while pad levels grow upward,
// so the vertical axis flips unless the layout says the pad itself is
// inverted.

export const PAD_WIDTH_MM = 65;
export const PAD_HEIGHT_MM = 49;
export const PAD_ASPECT = PAD_WIDTH_MM / PAD_HEIGHT_MM;

/** Nominal pressure for a synthetic press; anything at or above the default
 * engine threshold works, the midpoint leaves headroom in both directions. */
export const PRESS_Z = 128;

export interface PadPoint {
  x: number;
  y: number;
}

function clamp01(v: number): number {
  return v < 0 ? 0 : v > 1 ? 1 : v;
}

export function pixelToPad(
  px: number,
  py: number,
  width: number,
  height: number,
  xMax = 6143,
  yMax = 6143,
  yInverted = false,
): PadPoint {
  const fx = clamp01(px / width);
  const fy = clamp01(py / height);
  const up = 1 - fy; // top of the panel is full level
  return {
    x: Math.round(fx * xMax),
    y: Math.round((yInverted ? fy : up) * yMax),
  };
}
