"""Single declarative configuration governing every pipeline stage.

One config object (or JSON file) fixes voxel size, raytracing, graph,
selection and benchmark parameters so a whole experiment is reproducible
from one artifact.  Defaults derive from the 0.25 m voxel:
neighbor_radius = 1.8 x, cut_radius = 2 x, ray_spacing and
match_tolerance = 0.5 x.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field

from .errors import ParameterError
from .scoring import Coefficients


@dataclass(frozen=True)
class PipelineConfig:
    voxel_size: float = 0.25
    neighbor_radius: float = 0.45
    cut_radius: float = 0.5
    kappa: float = 0.5
    ray_spacing: float = 0.125
    slice_height: float = 0.5
    coefficients: Coefficients = field(default_factory=Coefficients)
    latitude: float = -25.0
    season: tuple[int, int] = (1, 365)
    day_step: int = 30
    hour_step: float = 1.0
    log_base: float = math.e
    shade_percentile: float = 75.0
    select_percentile: float = 95.0
    min_separation: float = 1.0
    k: int = 7
    match_tolerance: float = 0.125
    seed: int = 0

    @classmethod
    def for_voxel_size(cls, voxel_size, **overrides):
        """Config with the radius/pitch/tolerance knobs rescaled to a voxel."""
        derived = {
            "voxel_size": voxel_size,
            "neighbor_radius": 1.8 * voxel_size,
            "cut_radius": 2.0 * voxel_size,
            "ray_spacing": 0.5 * voxel_size,
            "match_tolerance": 0.5 * voxel_size,
        }
        derived.update(overrides)
        return cls(**derived)

    def replace(self, **changes) -> "PipelineConfig":
        return dataclasses.replace(self, **changes)

    def as_dict(self):
        d = dataclasses.asdict(self)
        d["coefficients"] = self.coefficients.as_dict()
        d["season"] = list(self.season)
        return d

    @classmethod
    def from_dict(cls, data) -> "PipelineConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ParameterError(f"unknown config key {unknown[0]!r}")
        kwargs = dict(data)
        if "coefficients" in kwargs:
            coeffs = kwargs["coefficients"]
            extra = sorted(set(coeffs) - {"alpha", "beta", "gamma"})
            if extra:
                raise ParameterError(f"unknown config key 'coefficients.{extra[0]}'")
            kwargs["coefficients"] = Coefficients(**coeffs)
        if "season" in kwargs:
            kwargs["season"] = tuple(kwargs["season"])
        return cls(**kwargs)

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.as_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "PipelineConfig":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))
