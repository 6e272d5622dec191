"""Ground-truth F1 benchmark for the graph-based prune simulator.

Protocol: three procedural base trees, each with four fixed major-limb cut
candidates.  For every (spacing, replicate) a stand of the three trees is
built twice - once unpruned, once mesh-pruned with 1-4 randomly chosen
cuts per tree - and both are scanned with the same virtual-scanner grid.
The simulator then predicts removed points on the unpruned scan from the
known cut locations, and is scored per tree against what actually vanished
from the pruned scan.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .cloud import PointCloud
from .config import PipelineConfig
from .errors import EmptyCutError, UndefinedRecallError
from .graph import CutSpec, build_graph, shortest_paths, simulate_prune
from .synth import (
    GROUND_ID,
    GroundTruthPair,
    SynthParams,
    build_stand,
    generate_tree,
    largest_limbs,
    mesh_prune,
    stand_scan_config,
    virtual_scan,
)
from .voxel import voxelize

DEFAULT_SPACINGS = (3.0, 4.0, 5.0, 6.0, 7.0, 8.0)
DEFAULT_REPLICATES = 8
CUT_CANDIDATES_PER_TREE = 4
# Two opposite-corner sensors leave realistic occlusion shadows; 3 cm noise
# matches handheld-scanner registration error.
DEFAULT_SCAN = {"n_sensors": 2, "noise_sigma": 0.03}


@dataclass(frozen=True)
class BenchmarkRow:
    spacing: float
    replicate: int
    tree_id: int
    n_cuts: int
    precision: float
    recall: float
    f1: float


@dataclass
class BenchmarkResult:
    rows: list

    def mean_f1(self):
        return float(np.mean([r.f1 for r in self.rows]))

    def mean_by_spacing(self):
        out = {}
        for row in self.rows:
            out.setdefault(row.spacing, []).append(row.f1)
        return {k: float(np.mean(v)) for k, v in sorted(out.items())}

    def mean_by_spacing_cuts(self):
        out = {}
        for row in self.rows:
            out.setdefault((row.spacing, row.n_cuts), []).append(row.f1)
        return {k: float(np.mean(v)) for k, v in sorted(out.items())}

    def csv_by_spacing(self) -> str:
        lines = ["spacing,mean_f1,n_trees"]
        groups = {}
        for row in self.rows:
            groups.setdefault(row.spacing, []).append(row.f1)
        for spacing, values in sorted(groups.items()):
            lines.append(f"{spacing:g},{np.mean(values):.4f},{len(values)}")
        return "\n".join(lines) + "\n"

    def csv_by_spacing_cuts(self) -> str:
        lines = ["spacing,n_cuts,mean_f1,n_trees"]
        for (spacing, n_cuts), value in self.mean_by_spacing_cuts().items():
            count = sum(
                1 for r in self.rows if r.spacing == spacing and r.n_cuts == n_cuts
            )
            lines.append(f"{spacing:g},{n_cuts},{value:.4f},{count}")
        return "\n".join(lines) + "\n"

    def csv_rows(self) -> str:
        lines = ["spacing,replicate,tree_id,n_cuts,precision,recall,f1"]
        for r in self.rows:
            lines.append(
                f"{r.spacing:g},{r.replicate},{r.tree_id},{r.n_cuts},"
                f"{r.precision:.4f},{r.recall:.4f},{r.f1:.4f}"
            )
        return "\n".join(lines) + "\n"


def _assign_to_trees(cloud: PointCloud, offsets):
    """Nearest-trunk-base assignment of scan points to stand slots.

    Stand scans are not segmented (single-tree segmentation is upstream of
    this toolkit), so points go to the horizontally nearest tree origin -
    overlapping canopies at small spacings therefore bleed, as they would
    through any real segmentation.
    """
    origins = np.array([o[:2] for o in offsets])
    d = np.linalg.norm(cloud.xyz[:, None, :2] - origins[None, :, :], axis=2)
    return np.argmin(d, axis=1)


def predicted_removal(tree_cloud: PointCloud, cut_locations, config: PipelineConfig):
    """Graph-pipeline removal prediction for one tree and known cut points.

    Returns indices into ``tree_cloud``.  Cut locations that match no
    graph node (fully occluded matter) are skipped with a warning.
    """
    if len(tree_cloud) == 0:
        return np.array([], dtype=np.int64)
    grid = voxelize(tree_cloud, config.voxel_size)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # disconnected specks are expected here
        graph = build_graph(grid, config.neighbor_radius, tree_cloud)
    paths = shortest_paths(graph)
    cuts = []
    for loc in cut_locations:
        cut = CutSpec(tuple(loc), config.cut_radius)
        try:
            simulate_prune(graph, paths, [cut], grid)
        except EmptyCutError:
            warnings.warn(f"cut at {loc} matches no scanned matter; skipped", stacklevel=2)
            continue
        cuts.append(cut)
    if not cuts:
        return np.array([], dtype=np.int64)
    result = simulate_prune(graph, paths, cuts, grid)
    return np.asarray(result.removed_point_indices, dtype=np.int64)


def make_base_trees(seed, tree_params: SynthParams | None = None):
    """The three unique tree models and their fixed cut candidates."""
    import dataclasses

    base = tree_params or SynthParams()
    trees = []
    for i in range(3):
        mesh = generate_tree(dataclasses.replace(base, seed=seed * 1009 + i))
        trees.append((mesh, largest_limbs(mesh, CUT_CANDIDATES_PER_TREE)))
    return trees


def build_ground_truth_stand(base_trees, spacing, rng, scan_overrides=None):
    """One stand pair: reference and mesh-pruned scenes, scanned identically.

    Returns (GroundTruthPair, per-slot cut metadata, reference scene).
    """
    meshes = [mesh for mesh, _ in base_trees]
    pruned_meshes = []
    cut_meta = []  # per base-tree: (n_cuts, removed ids, cut points)
    for mesh, candidates in base_trees:
        n_cuts = int(rng.integers(1, CUT_CANDIDATES_PER_TREE + 1))
        chosen = sorted(rng.choice(candidates, size=n_cuts, replace=False).tolist())
        pruned, removed, cut_points = mesh_prune(mesh, chosen)
        pruned_meshes.append(pruned)
        cut_meta.append({"n_cuts": n_cuts, "removed": removed, "cut_points": cut_points})

    order_seed = int(rng.integers(0, 2**31))
    reference_scene = build_stand(meshes, spacing, order_seed)
    pruned_scene = build_stand(pruned_meshes, spacing, order_seed)
    window = reference_scene.bounds()
    scan_kwargs = dict(DEFAULT_SCAN)
    scan_kwargs.update(scan_overrides or {})
    scan_config = stand_scan_config(reference_scene, **scan_kwargs)
    seed_ref = int(rng.integers(0, 2**31))
    seed_gt = int(rng.integers(0, 2**31))
    reference_scan = virtual_scan(reference_scene, scan_config, seed_ref, window)
    pruned_scan = virtual_scan(pruned_scene, scan_config, seed_gt, window)

    removed_ids = frozenset(
        (placed.tree_id, seg)
        for placed in reference_scene.trees
        for seg in cut_meta[placed.tree_id]["removed"]
    )
    world_cuts = tuple(
        (placed.tree_id, tuple(np.asarray(point) + placed.offset))
        for placed in reference_scene.trees
        for point in cut_meta[placed.tree_id]["cut_points"]
    )
    pair = GroundTruthPair(
        reference_scan=reference_scan,
        pruned_scan=pruned_scan,
        removed_segment_ids=removed_ids,
        cut_points=world_cuts,
    )
    return pair, cut_meta, reference_scene


def run_f1_benchmark(
    config: PipelineConfig,
    spacings=DEFAULT_SPACINGS,
    replicates=DEFAULT_REPLICATES,
    tree_params: SynthParams | None = None,
    scan_overrides=None,
) -> BenchmarkResult:
    """Full protocol: per-tree F1 rows over all spacings and replicates."""
    from .synth import evaluate_f1  # local import keeps module load light

    base_trees = make_base_trees(config.seed, tree_params)
    rows = []
    for spacing in spacings:
        for rep in range(replicates):
            rng = np.random.default_rng(
                np.random.SeedSequence([config.seed, int(round(spacing * 1000)), rep])
            )
            pair, cut_meta, scene = build_ground_truth_stand(
                base_trees, spacing, rng, scan_overrides
            )
            ref = pair.reference_scan
            offsets = [None] * len(scene.trees)
            for placed in scene.trees:
                offsets[placed.tree_id] = placed.offset
            tree_points = ref.source_ids != GROUND_ID
            assign = np.full(len(ref), -1, dtype=np.int64)
            assign[tree_points] = _assign_to_trees(ref.subset(np.flatnonzero(tree_points)), offsets)

            for tree_id in range(len(scene.trees)):
                member_rows = np.flatnonzero(assign == tree_id)
                if member_rows.size == 0:
                    continue
                sub = ref.subset(member_rows)
                cut_locations = [
                    loc for owner, loc in pair.cut_points if owner == tree_id
                ]
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore")
                    removed_local = predicted_removal(sub, cut_locations, config)
                predicted = sub.subset(removed_local)
                try:
                    precision, recall, f1 = evaluate_f1(
                        predicted, sub, pair.pruned_scan, config.match_tolerance
                    )
                except UndefinedRecallError:
                    continue
                rows.append(
                    BenchmarkRow(
                        spacing=float(spacing),
                        replicate=rep,
                        tree_id=tree_id,
                        n_cuts=cut_meta[tree_id]["n_cuts"],
                        precision=precision,
                        recall=recall,
                        f1=f1,
                    )
                )
    return BenchmarkResult(rows=rows)
