"""Procedural trees, mesh-level ground-truth pruning and a virtual scanner.

A seeded recursive branching model generates avocado-scale tree meshes
(cylindrical branch segments, small leaf discs on terminal branches).
Pruning at the mesh stage removes a segment and its whole distal subtree,
which gives exact removal ground truth; a pinhole ray-fan scanner with
occlusion and Gaussian noise then produces labeled point clouds before and
after pruning, so the graph-based prune simulator can be scored with
precision / recall / F1 on real-looking data.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .cloud import LABEL_FOLIAGE, LABEL_TRUNK, LABEL_UNKNOWN, PointCloud
from .errors import InvalidCutError, ParameterError, UndefinedRecallError

KIND_BRANCH = "branch"
KIND_LEAF = "leaf"

GROUND_ID = -1  # provenance tag for ground-plane returns


@dataclass(frozen=True)
class Segment:
    """One mesh primitive: a branch cylinder or a leaf disc.

    For leaves ``start`` is the disc center and ``end - start`` its unit
    normal; ``radius`` is the disc radius.
    """

    id: int
    parent: int | None
    start: tuple[float, float, float]
    end: tuple[float, float, float]
    radius: float
    kind: str = KIND_BRANCH


class TreeMesh:
    """Segments linked into a tree by parent ids, rooted at the trunk."""

    def __init__(self, segments, root_id=0):
        self.segments = {s.id: s for s in segments}
        self.root_id = root_id
        self.children = {s.id: [] for s in segments}
        for s in segments:
            if s.parent is not None:
                self.children[s.parent].append(s.id)

    def __len__(self):
        return len(self.segments)

    def ordered(self):
        return [self.segments[i] for i in sorted(self.segments)]

    def descendants(self, seg_id):
        """The segment itself plus its entire distal subtree."""
        out = set()
        stack = [seg_id]
        while stack:
            cur = stack.pop()
            out.add(cur)
            stack.extend(self.children.get(cur, []))
        return out

    def subtree_surface(self, seg_id):
        """Lateral + disc surface area of a subtree; a scan-mass proxy."""
        total = 0.0
        for sid in self.descendants(seg_id):
            s = self.segments[sid]
            if s.kind == KIND_LEAF:
                total += math.pi * s.radius**2
            else:
                length = float(np.linalg.norm(np.subtract(s.end, s.start)))
                total += 2.0 * math.pi * s.radius * length
        return total

    def to_json(self, **kwargs):
        return json.dumps(
            {
                "root_id": self.root_id,
                "segments": [
                    {
                        "id": s.id,
                        "parent": s.parent,
                        "start": [float(v) for v in s.start],
                        "end": [float(v) for v in s.end],
                        "radius": s.radius,
                        "kind": s.kind,
                    }
                    for s in self.ordered()
                ],
            },
            **kwargs,
        )

    @classmethod
    def from_json(cls, text) -> "TreeMesh":
        data = json.loads(text)
        segments = [
            Segment(
                id=s["id"],
                parent=s["parent"],
                start=tuple(s["start"]),
                end=tuple(s["end"]),
                radius=s["radius"],
                kind=s["kind"],
            )
            for s in data["segments"]
        ]
        return cls(segments, root_id=data["root_id"])


@dataclass(frozen=True)
class SynthParams:
    """Branching-model knobs, scaled to read like a mature avocado tree."""

    depth: int = 4
    branches_per_node: tuple[int, int] = (2, 4)
    branch_angle: tuple[float, float] = (25.0, 60.0)
    length_decay: float = 0.72
    leaf_density: float = 14.0  # leaves per meter of terminal branch
    trunk_height: float = 1.2
    seed: int = 0

    def __post_init__(self):
        if self.depth < 1:
            raise ParameterError("depth must be >= 1")
        if not 0.0 < self.length_decay <= 1.0:
            raise ParameterError("length_decay must be in (0, 1]")
        if self.leaf_density < 0:
            raise ParameterError("leaf_density must be >= 0")


def _rotated_directions(parent_dir, n, angle_range, rng):
    """n child directions tilted off the parent axis at jittered azimuths."""
    d = parent_dir / np.linalg.norm(parent_dir)
    pivot = np.array([0.0, 0.0, 1.0]) if abs(d[2]) < 0.999 else np.array([1.0, 0.0, 0.0])
    u = np.cross(d, pivot)
    u /= np.linalg.norm(u)
    v = np.cross(d, u)
    base_phase = rng.uniform(0.0, 2.0 * math.pi)
    dirs = []
    for i in range(n):
        theta = math.radians(rng.uniform(*angle_range))
        phi = base_phase + 2.0 * math.pi * i / n + rng.normal(0.0, 0.25)
        child = (
            math.cos(theta) * d
            + math.sin(theta) * (math.cos(phi) * u + math.sin(phi) * v)
        )
        dirs.append(child / np.linalg.norm(child))
    return dirs


def generate_tree(params: SynthParams) -> TreeMesh:
    """Deterministic recursive branching tree for a fixed seed.

    A single trunk segment rises from the origin; each level spawns
    branches_per_node children, shrinking in length and radius, and the
    deepest level carries leaf discs at leaf_density per meter.
    """
    rng = np.random.default_rng(params.seed)
    segments = []
    trunk = Segment(
        id=0,
        parent=None,
        start=(0.0, 0.0, 0.0),
        end=(0.0, 0.0, params.trunk_height),
        radius=0.12,
        kind=KIND_BRANCH,
    )
    segments.append(trunk)
    next_id = [1]

    def grow(parent: Segment, direction, length, radius, level):
        if level > params.depth:
            return
        lo, hi = params.branches_per_node
        count = int(rng.integers(lo, hi + 1))
        if level == 1:
            # The trunk always splits into at least four scaffold limbs.
            count = max(count, 4)
        for child_dir in _rotated_directions(direction, count, params.branch_angle, rng):
            child_len = length * rng.uniform(0.85, 1.15)
            start = np.asarray(parent.end)
            end = start + child_dir * child_len
            seg = Segment(
                id=next_id[0],
                parent=parent.id,
                start=tuple(start),
                end=tuple(end),
                radius=max(radius, 0.01),
                kind=KIND_BRANCH,
            )
            next_id[0] += 1
            segments.append(seg)
            if level == params.depth:
                _attach_leaves(seg, child_len, params.leaf_density, rng, segments, next_id)
            else:
                grow(seg, child_dir, child_len * params.length_decay, radius * 0.62, level + 1)

    first_len = params.trunk_height * 1.15
    grow(trunk, np.array([0.0, 0.0, 1.0]), first_len, 0.075, 1)
    return TreeMesh(segments, root_id=0)


def _attach_leaves(branch: Segment, length, density, rng, segments, next_id):
    n_leaves = int(round(density * length))
    start = np.asarray(branch.start)
    end = np.asarray(branch.end)
    for _ in range(n_leaves):
        t = rng.uniform(0.1, 1.0)
        center = start + t * (end - start) + rng.normal(0.0, 0.04, size=3)
        normal = rng.normal(size=3)
        normal /= np.linalg.norm(normal)
        segments.append(
            Segment(
                id=next_id[0],
                parent=branch.id,
                start=tuple(center),
                end=tuple(center + normal),
                radius=0.05,
                kind=KIND_LEAF,
            )
        )
        next_id[0] += 1


def mesh_prune(mesh: TreeMesh, cut_segment_ids):
    """Remove each cut segment plus its entire descendant subtree.

    Returns (pruned mesh, removed segment ids, cut points) where cut
    points are the cut segments' midpoints.  Cutting the root is invalid.
    """
    removed = set()
    cut_points = []
    for seg_id in cut_segment_ids:
        if seg_id == mesh.root_id:
            raise InvalidCutError("cannot cut the root segment")
        if seg_id not in mesh.segments:
            raise InvalidCutError(f"segment {seg_id} does not exist")
        seg = mesh.segments[seg_id]
        cut_points.append(tuple(0.5 * (np.asarray(seg.start) + np.asarray(seg.end))))
        removed |= mesh.descendants(seg_id)
    pruned = TreeMesh(
        [s for s in mesh.ordered() if s.id not in removed], root_id=mesh.root_id
    )
    return pruned, removed, cut_points


def largest_limbs(mesh: TreeMesh, n=4):
    """The n first-order limbs with the greatest subtree surface area."""
    limbs = mesh.children.get(mesh.root_id, [])
    ranked = sorted(limbs, key=lambda sid: (-mesh.subtree_surface(sid), sid))
    return ranked[:n]


@dataclass(frozen=True)
class PlacedTree:
    tree_id: int
    mesh: TreeMesh
    offset: tuple[float, float, float]


@dataclass(frozen=True)
class Scene:
    """A row of placed trees atop a ground plane."""

    trees: tuple
    ground: bool = True

    def to_json(self, **kwargs):
        return json.dumps(
            {
                "ground": self.ground,
                "trees": [
                    {
                        "tree_id": p.tree_id,
                        "offset": [float(v) for v in p.offset],
                        "mesh": json.loads(p.mesh.to_json()),
                    }
                    for p in self.trees
                ],
            },
            **kwargs,
        )

    @classmethod
    def from_json(cls, text) -> "Scene":
        data = json.loads(text)
        trees = tuple(
            PlacedTree(
                tree_id=t["tree_id"],
                mesh=TreeMesh.from_json(json.dumps(t["mesh"])),
                offset=tuple(t["offset"]),
            )
            for t in data["trees"]
        )
        return cls(trees=trees, ground=data["ground"])

    def bounds(self):
        lo = np.full(3, np.inf)
        hi = np.full(3, -np.inf)
        for placed in self.trees:
            off = np.asarray(placed.offset)
            for seg in placed.mesh.segments.values():
                for pt in (seg.start, seg.end):
                    p = np.asarray(pt) + off
                    lo = np.minimum(lo, p - seg.radius)
                    hi = np.maximum(hi, p + seg.radius)
        if self.ground:
            lo[2] = min(lo[2], 0.0)
        return lo, hi


def build_stand(meshes, spacing, order_seed=0) -> Scene:
    """Place the trees in a row at the given spacing, in seeded order."""
    if spacing <= 0:
        raise ParameterError(f"spacing must be > 0, got {spacing}")
    order = np.random.default_rng(order_seed).permutation(len(meshes))
    placed = tuple(
        PlacedTree(
            tree_id=int(tree_idx),
            mesh=meshes[tree_idx],
            offset=(slot * float(spacing), 0.0, 0.0),
        )
        for slot, tree_idx in enumerate(order)
    )
    return Scene(trees=placed)


@dataclass(frozen=True)
class ScanConfig:
    """Virtual scanner: pinhole ray fans with occlusion and noise."""

    sensor_positions: tuple
    angular_resolution: float = 0.25  # degrees
    noise_sigma: float = 0.02  # meters, isotropic
    max_range: float = 60.0

    def __post_init__(self):
        if self.angular_resolution <= 0:
            raise ParameterError("angular_resolution must be > 0")
        if self.noise_sigma < 0:
            raise ParameterError("noise_sigma must be >= 0")
        if not self.sensor_positions:
            raise ParameterError("need at least one sensor position")


def stand_scan_config(scene: Scene, standoff=4.0, height=1.8, n_sensors=4, **overrides) -> ScanConfig:
    """Sensors at the corners of the scene footprint.

    Four corners give near-complete coverage; two (opposite corners) leave
    handheld-scan-like occlusion shadows.
    """
    lo, hi = scene.bounds()
    corners = (
        (lo[0] - standoff, lo[1] - standoff, height),
        (hi[0] + standoff, hi[1] + standoff, height),
        (hi[0] + standoff, lo[1] - standoff, height),
        (lo[0] - standoff, hi[1] + standoff, height),
    )
    if n_sensors not in (1, 2, 3, 4):
        raise ParameterError("n_sensors must be 1..4")
    return ScanConfig(sensor_positions=corners[:n_sensors], **overrides)


class _ScenePrimitives:
    """Flat arrays of all scene primitives, ready for vectorized hits."""

    def __init__(self, scene: Scene):
        cyl_p0, cyl_axis, cyl_len, cyl_rad, cyl_tree, cyl_seg, cyl_trunk = [], [], [], [], [], [], []
        disc_c, disc_n, disc_rad, disc_tree, disc_seg = [], [], [], [], []
        for placed in scene.trees:
            off = np.asarray(placed.offset)
            for seg in placed.mesh.ordered():
                if seg.kind == KIND_LEAF:
                    disc_c.append(np.asarray(seg.start) + off)
                    n = np.subtract(seg.end, seg.start)
                    disc_n.append(n / np.linalg.norm(n))
                    disc_rad.append(seg.radius)
                    disc_tree.append(placed.tree_id)
                    disc_seg.append(seg.id)
                else:
                    p0 = np.asarray(seg.start) + off
                    axis = np.subtract(seg.end, seg.start)
                    length = float(np.linalg.norm(axis))
                    if length <= 0:
                        continue
                    cyl_p0.append(p0)
                    cyl_axis.append(axis / length)
                    cyl_len.append(length)
                    cyl_rad.append(seg.radius)
                    cyl_tree.append(placed.tree_id)
                    cyl_seg.append(seg.id)
                    cyl_trunk.append(seg.parent is None)
        self.cyl_p0 = np.array(cyl_p0).reshape(-1, 3)
        self.cyl_axis = np.array(cyl_axis).reshape(-1, 3)
        self.cyl_len = np.array(cyl_len)
        self.cyl_rad = np.array(cyl_rad)
        self.disc_c = np.array(disc_c).reshape(-1, 3)
        self.disc_n = np.array(disc_n).reshape(-1, 3)
        self.disc_rad = np.array(disc_rad)
        self.tree_ids = np.array(cyl_tree + disc_tree, dtype=np.int64)
        self.seg_ids = np.array(cyl_seg + disc_seg, dtype=np.int64)
        labels = [LABEL_TRUNK if t else LABEL_FOLIAGE for t in cyl_trunk]
        labels += [LABEL_FOLIAGE] * len(disc_seg)
        self.labels = np.array(labels, dtype=np.uint8)
        self.n_cyl = len(self.cyl_len)
        # Bounding spheres for azimuthal culling.
        cyl_mid = self.cyl_p0 + 0.5 * self.cyl_len[:, None] * self.cyl_axis
        cyl_bound = 0.5 * self.cyl_len + self.cyl_rad
        self.centers = np.vstack([cyl_mid, self.disc_c]) if len(self.tree_ids) else np.zeros((0, 3))
        self.bound_r = np.concatenate([cyl_bound, self.disc_rad]) if len(self.tree_ids) else np.zeros(0)


def _cylinder_hits(origin, dirs, prims: _ScenePrimitives, subset):
    """Smallest positive ray parameter per (ray, cylinder); inf on miss."""
    p0 = prims.cyl_p0[subset]
    axis = prims.cyl_axis[subset]
    length = prims.cyl_len[subset]
    radius = prims.cyl_rad[subset]
    delta = origin[None, :] - p0  # (m, 3)
    d_dot_a = dirs @ axis.T  # (n, m)
    delta_dot_a = np.einsum("md,md->m", delta, axis)  # (m,)
    d_perp = dirs[:, None, :] - d_dot_a[:, :, None] * axis[None, :, :]
    delta_perp = delta - delta_dot_a[:, None] * axis
    a = np.einsum("nmd,nmd->nm", d_perp, d_perp)
    b = 2.0 * np.einsum("nmd,md->nm", d_perp, delta_perp)
    c = np.einsum("md,md->m", delta_perp, delta_perp) - radius**2
    disc = b * b - 4.0 * a * c[None, :]
    hit = (disc >= 0.0) & (a > 1e-12)
    sqrt_disc = np.sqrt(np.where(hit, disc, 0.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(hit, (-b - sqrt_disc) / (2.0 * a), np.inf)
    # Reject hits behind the sensor or outside the finite segment extent.
    s = delta_dot_a[None, :] + t * d_dot_a
    valid = hit & (t > 1e-6) & (s >= 0.0) & (s <= length[None, :])
    return np.where(valid, t, np.inf)


def _disc_hits(origin, dirs, prims: _ScenePrimitives, subset):
    """Ray parameter per (ray, disc); inf on miss."""
    centers = prims.disc_c[subset]
    normals = prims.disc_n[subset]
    radius = prims.disc_rad[subset]
    denom = dirs @ normals.T  # (n, m)
    numer = np.einsum("md,md->m", centers - origin[None, :], normals)  # (m,)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(np.abs(denom) > 1e-12, numer[None, :] / denom, np.inf)
    pts = origin[None, None, :] + t[:, :, None] * dirs[:, None, :]
    within = np.einsum("nmd,nmd->nm", pts - centers[None, :, :], pts - centers[None, :, :])
    valid = (t > 1e-6) & np.isfinite(t) & (within <= radius[None, :] ** 2)
    return np.where(valid, t, np.inf)


def virtual_scan(scene: Scene, config: ScanConfig, seed=0, window_bounds=None) -> PointCloud:
    """Scan the scene: first hit per ray, Gaussian noise, full provenance.

    Rays fan out from each sensor over a regular angular grid covering the
    scene bounds (or ``window_bounds`` when given, so a pruned scene can be
    scanned with the same grid as its reference).  Every returned point
    carries the hit segment's tree id and segment id; ground returns carry
    GROUND_ID for both.
    """
    prims = _ScenePrimitives(scene)
    lo, hi = scene.bounds() if window_bounds is None else window_bounds
    corners = np.array(
        [[x, y, z] for x in (lo[0], hi[0]) for y in (lo[1], hi[1]) for z in (lo[2], hi[2])]
    )
    center = 0.5 * (lo + hi)
    res = math.radians(config.angular_resolution)
    rng = np.random.default_rng(seed)

    points, tree_ids, seg_ids, labels = [], [], [], []
    for sensor in config.sensor_positions:
        sensor = np.asarray(sensor, dtype=np.float64)
        to_center = center - sensor
        az_center = math.atan2(to_center[1], to_center[0])
        rel = corners - sensor[None, :]
        az = np.arctan2(rel[:, 1], rel[:, 0])
        d_az = (az - az_center + math.pi) % (2.0 * math.pi) - math.pi
        el = np.arctan2(rel[:, 2], np.hypot(rel[:, 0], rel[:, 1]))
        pad = 2.0 * res
        az_values = az_center + np.arange(d_az.min() - pad, d_az.max() + pad, res)
        el_values = np.arange(el.min() - pad, el.max() + pad, res)
        sin_el = np.sin(el_values)
        cos_el = np.cos(el_values)

        if len(prims.tree_ids):
            rel_c = prims.centers - sensor[None, :]
            dist_c = np.linalg.norm(rel_c, axis=1)
            prim_az = np.arctan2(rel_c[:, 1], rel_c[:, 0])
            ratio = np.clip(prims.bound_r / np.maximum(dist_c, 1e-9), 0.0, 1.0)
            prim_halfwidth = np.arcsin(ratio) + res
        for az_value in az_values:
            dirs = np.column_stack(
                (cos_el * math.cos(az_value), cos_el * math.sin(az_value), sin_el)
            )
            n = len(dirs)
            best_t = np.full(n, np.inf)
            best_prim = np.full(n, -1, dtype=np.int64)
            if len(prims.tree_ids):
                d_prim = (prim_az - az_value + math.pi) % (2.0 * math.pi) - math.pi
                cand = np.flatnonzero(np.abs(d_prim) <= prim_halfwidth)
                cyl_subset = cand[cand < prims.n_cyl]
                disc_subset = cand[cand >= prims.n_cyl] - prims.n_cyl
                if cyl_subset.size:
                    t_cyl = _cylinder_hits(sensor, dirs, prims, cyl_subset)
                    k = np.argmin(t_cyl, axis=1)
                    t_best = t_cyl[np.arange(n), k]
                    better = t_best < best_t
                    best_t[better] = t_best[better]
                    best_prim[better] = cyl_subset[k[better]]
                if disc_subset.size:
                    t_disc = _disc_hits(sensor, dirs, prims, disc_subset)
                    k = np.argmin(t_disc, axis=1)
                    t_best = t_disc[np.arange(n), k]
                    better = t_best < best_t
                    best_t[better] = t_best[better]
                    best_prim[better] = prims.n_cyl + disc_subset[k[better]]
            if scene.ground:
                dz = dirs[:, 2]
                with np.errstate(divide="ignore", invalid="ignore"):
                    t_ground = np.where(dz < -1e-12, -sensor[2] / dz, np.inf)
                ground_xy = sensor[None, :2] + t_ground[:, None] * dirs[:, :2]
                on_plane = (
                    (ground_xy[:, 0] >= lo[0] - 2.0)
                    & (ground_xy[:, 0] <= hi[0] + 2.0)
                    & (ground_xy[:, 1] >= lo[1] - 2.0)
                    & (ground_xy[:, 1] <= hi[1] + 2.0)
                )
                t_ground = np.where(on_plane, t_ground, np.inf)
                better = t_ground < best_t
                best_t[better] = t_ground[better]
                best_prim[better] = -2  # ground marker
            returned = np.isfinite(best_t) & (best_t <= config.max_range)
            if not np.any(returned):
                continue
            rows = np.flatnonzero(returned)
            hits = sensor[None, :] + best_t[rows, None] * dirs[rows]
            points.append(hits)
            prim_rows = best_prim[rows]
            is_ground = prim_rows == -2
            safe = np.where(is_ground, 0, prim_rows)
            tree_ids.append(np.where(is_ground, GROUND_ID, prims.tree_ids[safe]))
            seg_ids.append(np.where(is_ground, GROUND_ID, prims.seg_ids[safe]))
            labels.append(np.where(is_ground, LABEL_UNKNOWN, prims.labels[safe]))

    if not points:
        return PointCloud(
            np.zeros((0, 3)),
            np.zeros(0, dtype=np.uint8),
            np.zeros(0, dtype=np.int64),
            np.zeros(0, dtype=np.int64),
        )
    xyz = np.vstack(points)
    if config.noise_sigma > 0:
        xyz = xyz + rng.normal(0.0, config.noise_sigma, size=xyz.shape)
    return PointCloud(
        xyz,
        np.concatenate(labels).astype(np.uint8),
        np.concatenate(tree_ids),
        np.concatenate(seg_ids),
        crs_note="virtual scan",
    )


def sample_tree_cloud(
    params: SynthParams,
    n_sensors=4,
    noise_sigma=0.02,
    angular_resolution=0.25,
    seed=0,
) -> PointCloud:
    """Scanned single-tree cloud with the ground returns stripped."""
    mesh = generate_tree(params)
    scene = Scene(trees=(PlacedTree(0, mesh, (0.0, 0.0, 0.0)),), ground=True)
    config = stand_scan_config(
        scene,
        n_sensors=n_sensors,
        noise_sigma=noise_sigma,
        angular_resolution=angular_resolution,
    )
    cloud = virtual_scan(scene, config, seed)
    return cloud.subset(np.flatnonzero(cloud.source_ids != GROUND_ID))


@dataclass(frozen=True)
class GroundTruthPair:
    """Matched scans of one stand before and after mesh-level pruning."""

    reference_scan: PointCloud
    pruned_scan: PointCloud
    removed_segment_ids: frozenset  # of (tree_id, segment_id)
    cut_points: tuple  # of (tree_id, (x, y, z))


def evaluate_f1(
    predicted_removed: PointCloud,
    reference_scan: PointCloud,
    ground_truth_scan: PointCloud,
    match_tolerance: float,
):
    """Precision / recall / F1 of predicted removal against scan ground truth.

    A reference point should have been removed iff no ground-truth point
    lies within match_tolerance of it.  Predicted membership is exact
    coordinate identity (the prediction subsets the reference scan).
    """
    if match_tolerance <= 0:
        raise ParameterError("match_tolerance must be > 0")
    if len(reference_scan) == 0:
        raise ParameterError("reference scan is empty")
    if len(ground_truth_scan):
        dist, _ = cKDTree(ground_truth_scan.xyz).query(reference_scan.xyz, k=1)
        should_remove = dist > match_tolerance
    else:
        should_remove = np.ones(len(reference_scan), dtype=bool)
    if not np.any(should_remove):
        raise UndefinedRecallError("ground truth contains no removed points")
    if len(predicted_removed):
        dist, _ = cKDTree(predicted_removed.xyz).query(reference_scan.xyz, k=1)
        predicted = dist <= 1e-9
    else:
        predicted = np.zeros(len(reference_scan), dtype=bool)
    tp = int(np.count_nonzero(predicted & should_remove))
    fp = int(np.count_nonzero(predicted & ~should_remove))
    fn = int(np.count_nonzero(~predicted & should_remove))
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn)
    f1 = 2.0 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1
