"""Seasonal sky model, voxel raytracing and the light-distribution score.

The sky model integrates direct-beam solar positions over a season at a
fixed latitude.  Each sample is raytraced through the voxel grid with a
constant per-voxel absorption fraction; per-voxel absorbed energy yields
the light fraction p_i (relative to the brightest voxel) and the
distribution score D, which penalises voxels below a quarter of full light.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateLightError, NoSunError, ParameterError
from .voxel import VoxelGrid

DEFAULT_KAPPA = 0.5  # fraction of remaining ray energy absorbed per occupied voxel
SHADE_KNEE = 0.25  # light fraction below which a voxel counts as under-lit


@dataclass(frozen=True)
class SkyModel:
    """Weighted direct-beam sun directions integrated over a season.

    directions : (n, 3) unit vectors pointing from the sun toward the
        ground (negative z).  weights : (n,) dimensionless, sin(elevation).
    """

    directions: np.ndarray
    weights: np.ndarray
    latitude: float
    season: tuple[int, int]
    time_step: float

    def __post_init__(self):
        if len(self.directions) == 0:
            raise NoSunError("sky model has no samples")
        norms = np.linalg.norm(self.directions, axis=1)
        if not np.allclose(norms, 1.0, atol=1e-9):
            raise ParameterError("sky directions must be unit vectors")
        if np.any(self.directions[:, 2] >= 0):
            raise ParameterError("sky directions must point downward")
        if self.weights.sum() <= 0:
            raise ParameterError("sky weights must sum to a positive value")


def solar_direction(latitude_deg, day_of_year, solar_hour):
    """(east, north, up) unit vector toward the sun, and sin(elevation).

    Classic declination / hour-angle geometry with solar (not clock) time;
    no equation-of-time correction is applied.
    """
    phi = math.radians(latitude_deg)
    decl = math.radians(23.45) * math.sin(2.0 * math.pi * (284 + day_of_year) / 365.0)
    hour_angle = math.radians(15.0 * (solar_hour - 12.0))
    east = -math.cos(decl) * math.sin(hour_angle)
    north = math.sin(decl) * math.cos(phi) - math.cos(decl) * math.cos(hour_angle) * math.sin(phi)
    up = math.sin(phi) * math.sin(decl) + math.cos(phi) * math.cos(decl) * math.cos(hour_angle)
    return np.array([east, north, up]), up


def build_sky_model(latitude, season=(1, 365), day_step=15, hour_step=1.0) -> SkyModel:
    """Sample sun positions over (day, hour) pairs with positive elevation.

    ``season`` is an inclusive (start, end) day-of-year range; end < start
    wraps over the new year.  Sample weight is sin(elevation), a cheap
    stand-in for air-mass attenuation of the direct beam.
    """
    if not -90.0 <= latitude <= 90.0:
        raise ParameterError(f"latitude must be in [-90, 90], got {latitude}")
    if day_step <= 0 or hour_step <= 0:
        raise ParameterError("day_step and hour_step must be > 0")
    start, end = season
    if not (1 <= start <= 366 and 1 <= end <= 366):
        raise ParameterError(f"season days must be in [1, 366], got {season}")
    if end >= start:
        days = list(range(start, end + 1, int(day_step)))
    else:  # wraps the new year (southern-hemisphere growing seasons)
        days = list(range(start, 366, int(day_step)))
        days += list(range(1, end + 1, int(day_step)))
    hours = np.arange(0.0, 24.0, hour_step)
    directions = []
    weights = []
    for day in days:
        for hour in hours:
            sun, sin_el = solar_direction(latitude, day, float(hour))
            if sin_el > 0.0:
                directions.append(-sun)  # downwelling: from sun toward ground
                weights.append(sin_el)
    if not directions:
        raise NoSunError(
            f"no positive solar elevation at latitude {latitude} for days {season}"
        )
    return SkyModel(
        directions=np.array(directions),
        weights=np.array(weights),
        latitude=float(latitude),
        season=(start, end),
        time_step=float(hour_step),
    )


class LightField:
    """Per-voxel absorbed energy and light fractions for one grid.

    absorbed : dict cell-index -> L_i (relative units, summed over all rays
    and sky samples).  ``p`` is L_i / max L_j, so the brightest voxel is
    exactly 1.  ``escaped`` tracks energy that left the grid, kept as an
    independent conservation check.
    """

    def __init__(self, absorbed, total_emitted, escaped):
        self.absorbed = absorbed
        self.total_emitted = float(total_emitted)
        self.escaped = float(escaped)
        peak = max(absorbed.values()) if absorbed else 0.0
        if peak > 0.0:
            self.p = {k: v / peak for k, v in absorbed.items()}
        else:
            self.p = {}

    def total_absorbed(self):
        return float(sum(self.absorbed.values()))


def _ray_basis(direction):
    """Two unit vectors spanning the plane perpendicular to ``direction``."""
    d = direction / np.linalg.norm(direction)
    if abs(d[2]) > 0.999999:
        u = np.array([1.0, 0.0, 0.0])
    else:
        u = np.cross(d, np.array([0.0, 0.0, 1.0]))
        u /= np.linalg.norm(u)
    v = np.cross(d, u)
    v /= np.linalg.norm(v)
    return u, v


def _sample_rays(direction, lo, hi, ray_spacing):
    """Origins of a parallel ray lattice covering the AABB from above.

    The lattice lies on a plane perpendicular to the ray direction, offset
    outside the box, with pitch ``ray_spacing`` spanning the box's
    projected footprint.
    """
    center = 0.5 * (lo + hi)
    half_diag = 0.5 * float(np.linalg.norm(hi - lo))
    u, v = _ray_basis(direction)
    offsets = np.arange(-half_diag, half_diag + 0.5 * ray_spacing, ray_spacing)
    su, sv = np.meshgrid(offsets, offsets, indexing="ij")
    su = su.ravel()
    sv = sv.ravel()
    start = center - direction * (half_diag * 2.0 + ray_spacing)
    return start + su[:, None] * u[None, :] + sv[:, None] * v[None, :]


def _clip_to_box(origins, direction, lo, hi):
    """Slab-test entry parameters; returns (t_enter, hit_mask)."""
    t0 = np.zeros(len(origins))
    t1 = np.full(len(origins), np.inf)
    for ax in range(3):
        d = direction[ax]
        o = origins[:, ax]
        if abs(d) < 1e-300:
            inside = (o >= lo[ax]) & (o <= hi[ax])
            t1 = np.where(inside, t1, -np.inf)
        else:
            ta = (lo[ax] - o) / d
            tb = (hi[ax] - o) / d
            near = np.minimum(ta, tb)
            far = np.maximum(ta, tb)
            t0 = np.maximum(t0, near)
            t1 = np.minimum(t1, far)
    return t0, t1 > t0


def raytrace(grid: VoxelGrid, sky: SkyModel, kappa=DEFAULT_KAPPA, ray_spacing=None) -> LightField:
    """Accumulate per-voxel absorbed energy from every sky sample.

    For each sample, parallel rays at ``ray_spacing`` pitch traverse the
    grid by exact integer stepping.  Each occupied cell hit absorbs
    kappa x (remaining energy); the remainder attenuates by (1 - kappa).
    Ray energy equals the sample weight, so total_emitted is
    sum(weight x ray count).  Default pitch is voxel_size / 2.
    """
    if not 0.0 < kappa <= 1.0:
        raise ParameterError(f"kappa must be in (0, 1], got {kappa}")
    if ray_spacing is None:
        ray_spacing = grid.voxel_size / 2.0
    if ray_spacing <= 0:
        raise ParameterError(f"ray_spacing must be > 0, got {ray_spacing}")
    if len(grid) == 0:
        return LightField({}, 0.0, 0.0)

    occ, imin = grid.occupancy()
    shape = np.array(occ.shape, dtype=np.int64)
    lo = grid.origin + imin * grid.voxel_size
    hi = lo + shape * grid.voxel_size
    flat_absorbed = np.zeros(occ.size, dtype=np.float64)
    occ_flat = occ.ravel()
    strides = np.array([shape[1] * shape[2], shape[2], 1], dtype=np.int64)
    size = grid.voxel_size

    total_emitted = 0.0
    escaped = 0.0
    eps = 1e-9 * size

    for direction, weight in zip(sky.directions, sky.weights):
        origins = _sample_rays(direction, lo, hi, ray_spacing)
        total_emitted += weight * len(origins)
        t_enter, hits = _clip_to_box(origins, direction, lo, hi)
        escaped += weight * int(np.count_nonzero(~hits))
        if not np.any(hits):
            continue
        origins = origins[hits]
        t_enter = t_enter[hits]
        pos = origins + direction[None, :] * (t_enter + eps)[:, None]
        cell = np.floor((pos - lo[None, :]) / size).astype(np.int64)
        np.clip(cell, 0, shape - 1, out=cell)

        step = np.where(direction >= 0, 1, -1)
        with np.errstate(divide="ignore"):
            t_delta = np.where(direction != 0, size / np.abs(direction), np.inf)
        # Parametric distance to the next boundary plane along each axis.
        next_bound = lo[None, :] + (cell + (step > 0).astype(np.int64)) * size
        with np.errstate(divide="ignore", invalid="ignore"):
            t_max = np.where(
                direction[None, :] != 0,
                (next_bound - origins) / direction[None, :],
                np.inf,
            )

        energy = np.full(len(origins), weight)
        active = np.ones(len(origins), dtype=bool)
        max_steps = int(shape.sum()) + 3
        for _ in range(max_steps):
            idx = np.flatnonzero(active)
            if idx.size == 0:
                break
            cur = cell[idx]
            flat = cur @ strides
            hit_occ = occ_flat[flat]
            if np.any(hit_occ):
                hit_rows = idx[hit_occ]
                deposit = kappa * energy[hit_rows]
                np.add.at(flat_absorbed, flat[hit_occ], deposit)
                energy[hit_rows] *= 1.0 - kappa
            # Advance each active ray across its nearest boundary.
            tm = t_max[idx]
            axis = np.argmin(tm, axis=1)
            rows = np.arange(idx.size)
            cell[idx, axis] += step[axis]
            t_max[idx, axis] += t_delta[axis]
            out = (cell[idx, axis] < 0) | (cell[idx, axis] >= shape[axis])
            if np.any(out):
                done = idx[out]
                escaped += float(energy[done].sum())
                active[done] = False
        leftover = np.flatnonzero(active)
        if leftover.size:  # numerical safety; should not trigger
            escaped += float(energy[leftover].sum())

    absorbed = {}
    for index in grid.cells:
        flat = int(np.dot(np.array(index, dtype=np.int64) - imin, strides))
        value = flat_absorbed[flat]
        if value != 0.0:
            absorbed[index] = float(value)
    return LightField(absorbed, total_emitted, escaped)


def light_fraction(field: LightField):
    """p_i = L_i / max_j L_j for every absorbing voxel; the max is exactly 1."""
    if not field.absorbed or max(field.absorbed.values()) <= 0.0:
        raise DegenerateLightError("no voxel absorbed any light")
    return dict(field.p)


@dataclass(frozen=True)
class DistributionScore:
    """Distribution score D = mean of per-voxel responses D_i."""

    value: float
    per_voxel: dict = field(repr=False)


def response(p, log_base=math.e):
    """Per-voxel response: -(0.5 - p)^2 for p <= 0.25, else log(1 + p).

    The jump at p = 0.25 is intentional and preserved.  Natural log by
    default; the base only rescales the upper branch.
    """
    if p <= SHADE_KNEE:
        return -((0.5 - p) ** 2)
    return math.log(1.0 + p) / math.log(log_base)


def distribution_score(p, log_base=math.e) -> DistributionScore:
    """Mean per-voxel response over a map of light fractions."""
    if not p:
        raise ParameterError("light-fraction map is empty")
    per_voxel = {}
    for key, value in p.items():
        if not 0.0 <= value <= 1.0 + 1e-12:
            raise ParameterError(f"light fraction out of [0, 1]: {value}")
        per_voxel[key] = response(min(value, 1.0), log_base)
    return DistributionScore(value=sum(per_voxel.values()) / len(per_voxel), per_voxel=per_voxel)


def save_lightfield_csv(field: LightField, path):
    """Write ``ix,iy,iz,absorbed,p`` rows sorted by cell index."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("ix,iy,iz,absorbed,p\n")
        for index in sorted(field.absorbed):
            fh.write(
                f"{index[0]},{index[1]},{index[2]},"
                f"{field.absorbed[index]!r},{field.p[index]!r}\n"
            )
