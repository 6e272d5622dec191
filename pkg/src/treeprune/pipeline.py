"""Measurement bundle shared by the CLI, the service and the suggester.

``measure`` runs one cloud through voxelize -> raytrace -> score
components; ``score_reports`` normalizes a whole comparison set at once,
since volume and total light are meaningful only relative to the set.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cloud import PointCloud
from .config import PipelineConfig
from .errors import DegenerateLightError
from .light import (
    DistributionScore,
    LightField,
    SkyModel,
    build_sky_model,
    distribution_score,
    light_fraction,
    raytrace,
)
from .scoring import ScoreReport, combined_score, total_light, tree_volume
from .voxel import VoxelGrid, voxelize


@dataclass(frozen=True)
class TreeMetrics:
    """Raw per-tree quantities, before any comparison-set normalization."""

    grid: VoxelGrid
    field: LightField
    distribution: DistributionScore
    volume: float
    light: float

    @property
    def D(self):
        return self.distribution.value


def sky_for(config: PipelineConfig) -> SkyModel:
    return build_sky_model(
        config.latitude, config.season, config.day_step, config.hour_step
    )


def measure(cloud: PointCloud, config: PipelineConfig, sky: SkyModel | None = None) -> TreeMetrics:
    """Voxelize and raytrace one cloud; returns its raw score components."""
    if sky is None:
        sky = sky_for(config)
    grid = voxelize(cloud, config.voxel_size)
    field = raytrace(grid, sky, config.kappa, config.ray_spacing)
    if not field.absorbed:
        raise DegenerateLightError("tree absorbed no light under the given sky")
    p = light_fraction(field)
    dist = distribution_score(p, config.log_base)
    return TreeMetrics(
        grid=grid,
        field=field,
        distribution=dist,
        volume=tree_volume(grid, config.slice_height),
        light=total_light(field),
    )


def score_reports(metrics, config: PipelineConfig):
    """ScoreReports for a labeled comparison set, normalized over the set.

    ``metrics`` maps label -> TreeMetrics; every report's v_norm / l_norm
    divide by the set maxima, so the largest tree of the set scores 1.0.
    """
    if not metrics:
        return {}
    v_max = max(m.volume for m in metrics.values())
    l_max = max(m.light for m in metrics.values())
    reports = {}
    for label, m in metrics.items():
        reports[label] = combined_score(
            m.D,
            m.volume / v_max,
            m.light / l_max,
            config.coefficients,
            volume=m.volume,
            total_light=m.light,
        )
    return reports


def change_pct(base: float, variant: float) -> float:
    """Percentage change vs a baseline value."""
    return 100.0 * (variant - base) / abs(base)
