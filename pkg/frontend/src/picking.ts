/**
 * Screen-space point picking.
 *
 * The viewer projects every rendered voxel to pixel coordinates; a click
 * picks the depth-nearest point within a pixel tolerance.  Because the
 * tolerance is measured on screen, the matching world-space radius
 * shrinks as the camera zooms in - precise picks when close, forgiving
 * ones from afar.
 */

export interface ProjectedPoint {
  /** Position in the lightfield voxel array. */
  index: number;
  x: number;
  y: number;
  /** Camera-space depth; smaller is closer to the viewer. */
  depth: number;
}

export const DEFAULT_PICK_TOLERANCE_PX = 12;

/**
 * The pick under the cursor, or null when no point is within tolerance
 * (clicking empty sky is a no-op).  Among points inside the tolerance
 * disc the closest to the camera wins, with screen distance as the tie
 * break, so foreground canopy occludes the far side.
 */
export function pickNearest(
  points: readonly ProjectedPoint[],
  cursorX: number,
  cursorY: number,
  tolerancePx: number = DEFAULT_PICK_TOLERANCE_PX,
): ProjectedPoint | null {
  let best: ProjectedPoint | null = null;
  let bestKey: [number, number] = [Infinity, Infinity];
  const limit = tolerancePx * tolerancePx;
  for (const point of points) {
    const dx = point.x - cursorX;
    const dy = point.y - cursorY;
    const d2 = dx * dx + dy * dy;
    if (d2 > limit) continue;
    const key: [number, number] = [point.depth, d2];
    if (key[0] < bestKey[0] || (key[0] === bestKey[0] && key[1] < bestKey[1])) {
      best = point;
      bestKey = key;
    }
  }
  return best;
}
