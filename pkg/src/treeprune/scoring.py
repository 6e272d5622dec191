"""Tree volume, total light, normalization and the combined score.

The combined score S = alpha * D + beta * V_norm + gamma * L_norm is
comparative, not absolute: volume and total light are always normalized by
the maximum over an explicit comparison set (e.g. the unpruned tree plus
each pruned variant), so the best tree of the set scores 1.0 on each
normalized component.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .errors import ParameterError
from .light import LightField
from .voxel import VoxelGrid, hull_area_2d, slice_components

DEFAULT_SLICE_HEIGHT = 0.5  # meters; resolves canopy taper at avocado scale


@dataclass(frozen=True)
class Coefficients:
    """Weights of the three score components."""

    alpha: float = 1.6
    beta: float = 0.8
    gamma: float = 0.3

    def as_dict(self):
        return {"alpha": self.alpha, "beta": self.beta, "gamma": self.gamma}


@dataclass(frozen=True)
class ScoreReport:
    """One tree's score components, normalized against a comparison set."""

    D: float
    volume: float
    total_light: float
    v_norm: float
    l_norm: float
    S: float
    coefficients: Coefficients

    def as_dict(self):
        return {
            "D": self.D,
            "volume": self.volume,
            "total_light": self.total_light,
            "v_norm": self.v_norm,
            "l_norm": self.l_norm,
            "S": self.S,
            "coefficients": self.coefficients.as_dict(),
        }

    def to_json(self, **kwargs):
        return json.dumps(self.as_dict(), **kwargs)


def tree_volume(grid: VoxelGrid, slice_height=DEFAULT_SLICE_HEIGHT) -> float:
    """Canopy volume by summing per-slice convex-hull footprints.

    The grid's z-extent is partitioned into horizontal slices; each
    connected component in a slice contributes its centroid-footprint hull
    area times the slice height.  Components too thin for a hull (fewer
    than 3 non-collinear columns) fall back to voxel_size^2 per cell so
    thin structures still register volume.
    """
    if slice_height <= 0:
        raise ParameterError(f"slice_height must be > 0, got {slice_height}")
    if len(grid) == 0:
        raise ParameterError("cannot measure an empty grid")
    centroids = grid.centroid_array
    z_min = float(centroids[:, 2].min())
    z_max = float(centroids[:, 2].max())
    n_slices = int(math.floor((z_max - z_min) / slice_height)) + 1
    volume = 0.0
    for k in range(n_slices):
        z_lo = z_min + k * slice_height
        components = slice_components(grid, z_lo, z_lo + slice_height)
        for comp in components:
            footprint = hull_area_2d([grid.cells[i].centroid[:2] for i in comp])
            if footprint == 0.0:
                footprint = grid.voxel_size**2 * len(comp)
            volume += footprint * slice_height
    return volume


def total_light(field: LightField) -> float:
    """Sum of absorbed energy over all voxels."""
    return field.total_absorbed()


def normalize_set(values):
    """Divide each value by the maximum of the set; the best becomes 1.0."""
    values = list(values)
    if not values:
        raise ParameterError("cannot normalize an empty set")
    if any(v <= 0 for v in values):
        raise ParameterError("normalization requires positive values")
    peak = max(values)
    return [v / peak for v in values]


def combined_score(
    D,
    v_norm,
    l_norm,
    coefficients: Coefficients = Coefficients(),
    volume=math.nan,
    total_light=math.nan,
) -> ScoreReport:
    """S = alpha * D + beta * v_norm + gamma * l_norm.

    The raw volume / total-light fields are carried through for reporting
    when the caller has them.
    """
    if not 0.0 < v_norm <= 1.0 or not 0.0 < l_norm <= 1.0:
        raise ParameterError(
            f"normalized components must be in (0, 1], got v={v_norm}, l={l_norm}"
        )
    s = coefficients.alpha * D + coefficients.beta * v_norm + coefficients.gamma * l_norm
    return ScoreReport(
        D=D,
        volume=volume,
        total_light=total_light,
        v_norm=v_norm,
        l_norm=l_norm,
        S=s,
        coefficients=coefficients,
    )
