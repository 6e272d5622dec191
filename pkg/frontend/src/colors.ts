/**
 * Fixed blue-to-red color ramp and the per-voxel color mapping.
 *
 * The ramp scale never auto-adjusts within a session, so the same voxel
 * keeps the same color across accept/undo and the eye can compare states.
 */

import type { CellIndex, VoxelEntry } from "./api";

export type ColorMode = "light-absorption" | "d-score" | "removed-preview";

export type Rgb = [number, number, number];

// D_i lives in [-0.25, ln 2]; fixed bounds keep the ramp stable.
const D_MIN = -0.25;
const D_MAX = Math.log(2);

export const PREVIEW_GRAY: Rgb = [0.45, 0.45, 0.45];
export const SUGGESTION_BLACK: Rgb = [0, 0, 0];

/** Piecewise blue -> cyan -> green -> yellow -> red over t in [0, 1]. */
export function ramp(t: number): Rgb {
  const x = Math.min(1, Math.max(0, t));
  if (x < 0.25) return [0, x / 0.25, 1];
  if (x < 0.5) return [0, 1, 1 - (x - 0.25) / 0.25];
  if (x < 0.75) return [(x - 0.5) / 0.25, 1, 0];
  return [1, 1 - (x - 0.75) / 0.25, 0];
}

/** Ramp position of a voxel under the given color mode. */
export function rampValue(voxel: VoxelEntry, mode: ColorMode): number {
  if (mode === "d-score") {
    return (voxel.d - D_MIN) / (D_MAX - D_MIN);
  }
  return voxel.p; // light-absorption and removed-preview share the p base
}

export function cellKey(index: CellIndex): string {
  return index.join(",");
}

/**
 * Color for one voxel: the fixed ramp over p or D_i, with voxels in the
 * pending cut's removed set grayed out under removed-preview.
 */
export function colorForVoxel(
  voxel: VoxelEntry,
  mode: ColorMode,
  removedCells: ReadonlySet<string> | null,
): Rgb {
  if (mode === "removed-preview" && removedCells?.has(cellKey(voxel.index))) {
    return PREVIEW_GRAY;
  }
  return ramp(rampValue(voxel, mode));
}
