"""Voxelization, horizontal slicing and 2D hull utilities.

The voxel grid is the unit of all downstream light accounting and graph
construction: each occupied cell keeps the indices of its member points and
their centroid, so prune classifications can be propagated back to points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .cloud import PointCloud
from .errors import ParameterError

DEFAULT_VOXEL_SIZE = 0.25  # meters; canopy scale vs handheld-scanner noise


@dataclass(frozen=True)
class VoxelCell:
    """One occupied cell: integer index, member points and their centroid."""

    index: tuple[int, int, int]
    centroid: np.ndarray  # (3,) mean of member points, meters
    point_indices: np.ndarray  # indices into the source cloud

    @property
    def count(self):
        return len(self.point_indices)


class VoxelGrid:
    """Sparse occupancy grid over a point cloud.

    ``cells`` maps integer 3-index -> VoxelCell, with
    index = floor((coord - origin) / voxel_size) per axis.  Every point of
    the source cloud lands in exactly one cell.  Iteration order over
    ``cells`` is sorted by index, which fixes node numbering downstream.
    """

    def __init__(self, voxel_size, origin, cells, n_points):
        self.voxel_size = float(voxel_size)
        self.origin = np.asarray(origin, dtype=np.float64)
        self.cells = cells
        self.n_points = int(n_points)

    def __len__(self):
        return len(self.cells)

    @property
    def index_array(self):
        return np.array(list(self.cells.keys()), dtype=np.int64)

    @property
    def centroid_array(self):
        return np.array([c.centroid for c in self.cells.values()])

    def index_bounds(self):
        """(imin, imax) inclusive integer bounds over occupied cells."""
        idx = self.index_array
        return idx.min(axis=0), idx.max(axis=0)

    def bounding_box(self):
        """World-space AABB covering all occupied cells."""
        imin, imax = self.index_bounds()
        lo = self.origin + imin * self.voxel_size
        hi = self.origin + (imax + 1) * self.voxel_size
        return lo, hi

    def cell_of_point(self, point):
        """Integer cell index the given world point falls in."""
        point = np.asarray(point, dtype=np.float64)
        return tuple(np.floor((point - self.origin) / self.voxel_size).astype(np.int64))

    def occupancy(self):
        """(dense bool array, imin) spanning the occupied index bounds."""
        imin, imax = self.index_bounds()
        shape = tuple((imax - imin + 1).astype(int))
        occ = np.zeros(shape, dtype=bool)
        idx = self.index_array - imin
        occ[idx[:, 0], idx[:, 1], idx[:, 2]] = True
        return occ, imin

    def drop_cells(self, indices) -> "VoxelGrid":
        """New grid without the given cell indices (points follow cells)."""
        gone = set(indices)
        cells = {k: v for k, v in self.cells.items() if k not in gone}
        kept = sum(c.count for c in cells.values())
        return VoxelGrid(self.voxel_size, self.origin, cells, kept)


def voxelize(cloud: PointCloud, voxel_size=DEFAULT_VOXEL_SIZE, origin=(0.0, 0.0, 0.0)) -> VoxelGrid:
    """Partition a cloud into cubic cells of the given edge length.

    The union of all cells' point_indices is exactly the cloud's index set.
    A fixed default origin keeps cell indexing translation-consistent:
    shifting the cloud by a multiple of voxel_size shifts indices by that
    multiple.
    """
    if voxel_size <= 0:
        raise ParameterError(f"voxel_size must be > 0, got {voxel_size}")
    if len(cloud) == 0:
        raise ParameterError("cannot voxelize an empty cloud")
    origin = np.asarray(origin, dtype=np.float64)
    idx = np.floor((cloud.xyz - origin) / voxel_size).astype(np.int64)
    # Sort rows lexicographically so cells come out in deterministic order.
    order = np.lexsort((idx[:, 2], idx[:, 1], idx[:, 0]))
    sorted_idx = idx[order]
    uniq, starts = np.unique(sorted_idx, axis=0, return_index=True)
    starts = list(starts) + [len(cloud)]
    cells = {}
    for k in range(len(uniq)):
        members = order[starts[k] : starts[k + 1]]
        members = np.sort(members)
        key = tuple(int(v) for v in uniq[k])
        cells[key] = VoxelCell(
            index=key,
            centroid=cloud.xyz[members].mean(axis=0),
            point_indices=members,
        )
    return VoxelGrid(voxel_size, origin, cells, len(cloud))


def slice_components(grid: VoxelGrid, z_lo, z_hi):
    """Connected components of cells whose centroid z lies in [z_lo, z_hi).

    Connectivity is 8-neighbor in the horizontal index plane; cells stacked
    in the same column belong to one component.  Returns a list of sets of
    cell indices (possibly empty).
    """
    if not z_lo < z_hi:
        raise ParameterError(f"need z_lo < z_hi, got [{z_lo}, {z_hi})")
    in_slice = [c for c in grid.cells.values() if z_lo <= c.centroid[2] < z_hi]
    if not in_slice:
        return []
    columns = {}
    for cell in in_slice:
        columns.setdefault(cell.index[:2], []).append(cell.index)
    seen = set()
    components = []
    for start in sorted(columns):
        if start in seen:
            continue
        stack = [start]
        seen.add(start)
        comp = []
        while stack:
            cx, cy = stack.pop()
            comp.extend(columns[(cx, cy)])
            for dx in (-1, 0, 1):
                for dy in (-1, 0, 1):
                    nb = (cx + dx, cy + dy)
                    if nb not in seen and nb in columns:
                        seen.add(nb)
                        stack.append(nb)
        components.append(set(comp))
    return components


def hull_area_2d(points) -> float:
    """Area of the 2D convex hull of the input points, in square meters.

    Fewer than 3 points, or a collinear set, has zero area.
    """
    points = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    if len(points) < 3:
        return 0.0
    try:
        hull = ConvexHull(points)
    except QhullError:
        return 0.0  # degenerate (collinear or coincident) input
    return float(hull.volume)  # in 2D, qhull "volume" is the area
