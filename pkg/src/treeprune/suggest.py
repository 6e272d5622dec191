"""Candidate cut generation, filtering and what-if evaluation.

Voxels that cast shade (many under-lit voxels directly below) mark the
problem areas; summing, for every node, how often it sits on a trunk path
to a high-shade endpoint - corrected for the trunk-artery bias by the
inverse of the remaining-path proportion - yields the influence score j.
The top-percentile, spatially separated nodes become the suggested cuts,
each re-scored by actually simulating the prune and raytracing the
remainder.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from .cloud import PointCloud
from .config import PipelineConfig
from .errors import DegenerateLightError, EmptyCloudError, ParameterError
from .graph import CutSpec, TreeGraph, apply_prune, build_graph, shortest_paths, simulate_prune
from .pipeline import TreeMetrics, change_pct, measure, score_reports, sky_for
from .scoring import ScoreReport
from .voxel import VoxelGrid

BASELINE_LABEL = "None"
ALL_CUTS_LABEL = "All"


@dataclass(frozen=True)
class ShadeField:
    """Per-cell count of occupied voxels directly below with lower D_i."""

    score: dict


@dataclass(frozen=True)
class CandidateScore:
    """Path-influence score j per node; zero off all high-shade paths."""

    j: dict


@dataclass
class SuggestionSet:
    """Ranked candidates, the selected cut set and per-cut re-scores."""

    candidates: list  # (node, location, j) sorted by j descending
    selected: list  # dicts with node / location / j / label
    reports: dict = field(default_factory=dict)  # label -> ScoreReport
    changes: dict = field(default_factory=dict)  # label -> (D change %, S change %)
    errors: dict = field(default_factory=dict)  # label -> message for failed variants
    baseline: ScoreReport | None = None

    def to_json(self, **kwargs):
        payload = {
            "selected": [
                {
                    "label": s["label"],
                    "node": s["node"],
                    "location": [float(v) for v in s["location"]],
                    "j": s["j"],
                }
                for s in self.selected
            ],
            "reports": {k: r.as_dict() for k, r in self.reports.items()},
            "changes": {
                k: {"D_change_pct": v[0], "S_change_pct": v[1]}
                for k, v in self.changes.items()
            },
            "errors": dict(self.errors),
        }
        return json.dumps(payload, **kwargs)

    def to_csv(self) -> str:
        """Comparison-table layout: Cut, D, V_norm, L_norm, S, changes."""
        lines = ["cut,D,V_norm,L_norm,S,D_change_pct,S_change_pct"]
        for label, report in self.reports.items():
            d_chg, s_chg = self.changes.get(label, (0.0, 0.0))
            lines.append(
                f"{label},{report.D:.6f},{report.v_norm:.6f},{report.l_norm:.6f},"
                f"{report.S:.6f},{d_chg:.2f},{s_chg:.2f}"
            )
        return "\n".join(lines) + "\n"

    def overlay_cloud(self) -> PointCloud:
        """Selected cut points as a small cloud, for rendering over the tree."""
        if not self.selected:
            raise EmptyCloudError("no cuts selected")
        return PointCloud(np.array([s["location"] for s in self.selected]))


def trunk_cell_centroids(grid: VoxelGrid, cloud: PointCloud):
    """Centroids of cells holding at least one trunk-labeled point."""
    from .cloud import LABEL_TRUNK

    trunk_rows = set(np.flatnonzero(cloud.labels == LABEL_TRUNK).tolist())
    if not trunk_rows:
        return np.zeros((0, 3))
    out = [
        cell.centroid
        for cell in grid.cells.values()
        if trunk_rows.intersection(cell.point_indices.tolist())
    ]
    return np.array(out).reshape(-1, 3)


def shade_scores(grid: VoxelGrid, d_per_cell) -> ShadeField:
    """For each cell, count same-column cells below it with strictly lower D_i.

    Ties do not count as shading; the bottom cell of any column scores 0.
    """
    missing = [idx for idx in grid.cells if idx not in d_per_cell]
    if missing:
        raise ParameterError(f"D_i missing for cell {missing[0]}")
    columns = {}
    for idx in grid.cells:
        columns.setdefault((idx[0], idx[1]), []).append(idx)
    score = {}
    for column in columns.values():
        column.sort(key=lambda idx: idx[2])
        values = [d_per_cell[idx] for idx in column]
        for hi in range(len(column)):
            score[column[hi]] = sum(
                1 for lo in range(hi) if values[lo] < values[hi]
            )
    return ShadeField(score=score)


def path_influence(
    graph: TreeGraph, paths, shade: ShadeField, shade_threshold=75.0
) -> CandidateScore:
    """Influence score j per node from paths to high-shade endpoints.

    Endpoints are the nodes whose shade score reaches the given percentile
    of the nonzero shade scores.  A node at position i on an endpoint's
    trunk path (endpoint first, m nodes total) contributes 1 / ((i+1) / m),
    so deep nodes near the endpoint dominate over trunk arteries.  The
    trunk itself is never a candidate.
    """
    node_shade = {}
    for cell, value in shade.score.items():
        node = graph.node_of_cell.get(cell)
        if node is not None:
            node_shade[node] = value
    nonzero = [v for v in node_shade.values() if v > 0]
    if not nonzero:
        warnings.warn("no voxel shades another; no candidates", stacklevel=2)
        return CandidateScore(j={})
    threshold = np.percentile(nonzero, shade_threshold)
    endpoints = [n for n, v in sorted(node_shade.items()) if v >= threshold]
    j = {}
    for endpoint in endpoints:
        path = paths.get(endpoint)
        if path is None:
            continue
        m = len(path)
        for pos, node in enumerate(path):
            if node == graph.trunk:
                continue
            j[node] = j.get(node, 0.0) + m / (pos + 1)
    return CandidateScore(j=j)


def select_candidates(
    scores: CandidateScore,
    graph: TreeGraph,
    percentile=95.0,
    min_separation=1.0,
    k=7,
    trunk_exclusion=None,
    trunk_points=None,
) -> SuggestionSet:
    """Greedy top-percentile selection with a spatial separation floor.

    The pool is every node scoring at or above the given percentile of the
    positive j values, minus the trunk's neighborhood (every node within
    trunk_exclusion of the trunk matter - the trunk-labeled voxels when
    known, else the trunk node - since severing the trunk is never a limb
    suggestion); descending-j order, keeping a node only when at least
    min_separation from all kept ones, until k survive.  A pool smaller
    than k returns all survivors with a shortfall warning.
    """
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    if min_separation < 0:
        raise ParameterError(f"min_separation must be >= 0, got {min_separation}")
    positive = [(node, value) for node, value in scores.j.items() if value > 0]
    if not positive:
        warnings.warn("no positive influence scores; nothing to suggest", stacklevel=2)
        return SuggestionSet(candidates=[], selected=[])
    threshold = np.percentile([v for _, v in positive], percentile)
    pool = [(node, value) for node, value in positive if value >= threshold]
    if trunk_exclusion is None:
        trunk_exclusion = 2.0 * 2.0 * graph.voxel_size  # 2 x default cut radius
    if trunk_points is None or not len(trunk_points):
        trunk_points = graph.centroids[graph.trunk][None, :]
    trunk_points = np.asarray(trunk_points, dtype=np.float64).reshape(-1, 3)

    def clear_of_trunk(node):
        gap = np.linalg.norm(trunk_points - graph.centroids[node][None, :], axis=1)
        return float(gap.min()) > trunk_exclusion

    pool = [
        (node, value)
        for node, value in pool
        if node != graph.trunk and clear_of_trunk(node)
    ]
    pool.sort(key=lambda item: (-item[1], item[0]))
    candidates = [
        (node, tuple(float(c) for c in graph.centroids[node]), value)
        for node, value in pool
    ]
    kept = []
    for node, value in pool:
        pos = graph.centroids[node]
        if all(
            np.linalg.norm(pos - graph.centroids[other]) >= min_separation
            for other, _ in kept
        ):
            kept.append((node, value))
        if len(kept) == k:
            break
    if len(kept) < k:
        warnings.warn(
            f"only {len(kept)} of {k} requested cut points available after "
            "separation filtering",
            stacklevel=2,
        )
    selected = [
        {
            "label": chr(ord("A") + i),
            "node": node,
            "location": tuple(float(c) for c in graph.centroids[node]),
            "j": value,
        }
        for i, (node, value) in enumerate(kept)
    ]
    return SuggestionSet(candidates=candidates, selected=selected)


def evaluate_suggestions(
    cloud: PointCloud,
    suggestions: SuggestionSet,
    config: PipelineConfig,
    sky=None,
    grid=None,
    graph=None,
    paths=None,
    baseline: TreeMetrics | None = None,
) -> SuggestionSet:
    """Re-score the tree for each cut alone and for all cuts together.

    Every variant is pruned, re-voxelized and re-raytraced; volume and
    total light are normalized over {unpruned, variants}, so the unpruned
    row is exactly 1.000 / 1.000.  A cut that removes the whole tree is
    reported under ``errors`` and the other variants proceed.
    """
    if not suggestions.selected:
        raise ParameterError("no cuts selected to evaluate")
    if sky is None:
        sky = sky_for(config)
    if baseline is None:
        baseline = measure(cloud, config, sky)
    if grid is None:
        grid = baseline.grid
    if graph is None:
        graph = build_graph(grid, config.neighbor_radius, cloud)
    if paths is None:
        paths = shortest_paths(graph)

    metrics = {BASELINE_LABEL: baseline}
    errors = {}
    variants = [(s["label"], [s]) for s in suggestions.selected]
    variants.append((ALL_CUTS_LABEL, suggestions.selected))
    for label, cut_set in variants:
        cuts = [CutSpec(s["location"], config.cut_radius) for s in cut_set]
        result = simulate_prune(graph, paths, cuts, grid)
        kept, _ = apply_prune(cloud, result)
        if len(kept) == 0:
            errors[label] = "cut removes the entire tree"
            continue
        try:
            metrics[label] = measure(kept, config, sky)
        except (DegenerateLightError, ParameterError) as exc:
            errors[label] = str(exc)
    reports = score_reports(metrics, config)
    base_report = reports[BASELINE_LABEL]
    changes = {}
    for label, report in reports.items():
        changes[label] = (
            change_pct(base_report.D, report.D),
            change_pct(base_report.S, report.S),
        )
    suggestions.reports = reports
    suggestions.changes = changes
    suggestions.errors = errors
    suggestions.baseline = base_report
    return suggestions


def suggest_cuts(cloud: PointCloud, config: PipelineConfig) -> SuggestionSet:
    """Full suggestion pipeline: light field -> shade -> influence ->
    selection -> per-cut re-scoring."""
    sky = sky_for(config)
    baseline = measure(cloud, config, sky)
    grid = baseline.grid
    shade = shade_scores(grid, baseline.distribution.per_voxel)
    graph = build_graph(grid, config.neighbor_radius, cloud)
    paths = shortest_paths(graph)
    influence = path_influence(graph, paths, shade, config.shade_percentile)
    suggestions = select_candidates(
        influence,
        graph,
        percentile=config.select_percentile,
        min_separation=config.min_separation,
        k=config.k,
        trunk_exclusion=2.0 * config.cut_radius,
        trunk_points=trunk_cell_centroids(grid, cloud),
    )
    if not suggestions.selected:
        suggestions.baseline = score_reports({BASELINE_LABEL: baseline}, config)[BASELINE_LABEL]
        suggestions.reports = {BASELINE_LABEL: suggestions.baseline}
        suggestions.changes = {BASELINE_LABEL: (0.0, 0.0)}
        return suggestions
    return evaluate_suggestions(
        cloud, suggestions, config, sky=sky, grid=grid, graph=graph, paths=paths,
        baseline=baseline,
    )
