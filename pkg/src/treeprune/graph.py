"""Radius-neighbor graph over voxel centroids and prune classification.

A node per occupied voxel, an edge wherever two centroids lie within the
neighbor radius, one trunk node.  Pruning marks every node within a cut's
radius, then removes each node whose shortest path to the trunk passes
through a marked node; the classification propagates to the points inside
the removed voxels.
"""

from __future__ import annotations

import heapq
import json
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .cloud import LABEL_TRUNK, PointCloud
from .errors import ConsistencyError, EmptyCutError, ParameterError
from .voxel import VoxelGrid

# Connects all 26-neighborhood centroids (max separation sqrt(3) * size)
# with slack for centroid offset inside the cells.
NEIGHBOR_RADIUS_FACTOR = 1.8
# A cut should sever a limb's full cross-section.
CUT_RADIUS_FACTOR = 2.0

_REL_TOL = 1e-9  # slack for floating shortest-distance comparisons


@dataclass(frozen=True)
class CutSpec:
    """A cut: 3D location plus the radius of matter marked as severed."""

    location: tuple[float, float, float]
    cut_radius: float

    def __post_init__(self):
        if self.cut_radius <= 0:
            raise ParameterError(f"cut_radius must be > 0, got {self.cut_radius}")


class TreeGraph:
    """Voxel-centroid graph with Euclidean edge weights and a trunk node.

    Node ids are 0..n-1 in sorted-cell-index order (the grid's iteration
    order), which keeps every downstream tie-break deterministic.
    """

    def __init__(self, centroids, cell_indices, adjacency, trunk, neighbor_radius,
                 voxel_size=1.0, origin=(0.0, 0.0, 0.0)):
        self.centroids = np.asarray(centroids, dtype=np.float64)
        self.cell_indices = list(cell_indices)
        self.adjacency = adjacency  # node -> list of (neighbor, weight), neighbor ascending
        self.trunk = int(trunk)
        self.neighbor_radius = float(neighbor_radius)
        self.voxel_size = float(voxel_size)
        self.origin = np.asarray(origin, dtype=np.float64)
        self.node_of_cell = {idx: i for i, idx in enumerate(self.cell_indices)}
        self.unreachable = self._unreachable_from_trunk()

    def __len__(self):
        return len(self.cell_indices)

    def _unreachable_from_trunk(self):
        seen = {self.trunk}
        stack = [self.trunk]
        while stack:
            node = stack.pop()
            for nbr, _ in self.adjacency[node]:
                if nbr not in seen:
                    seen.add(nbr)
                    stack.append(nbr)
        return frozenset(range(len(self.cell_indices))) - seen


@dataclass(frozen=True)
class PruneResult:
    """Kept / removed classification of nodes and source-cloud points."""

    cut_nodes: frozenset
    removed_nodes: frozenset
    kept_nodes: frozenset
    removed_point_indices: np.ndarray = field(repr=False)
    unreachable_nodes: frozenset = frozenset()

    def to_json(self, **kwargs):
        return json.dumps(
            {
                "cut_nodes": sorted(self.cut_nodes),
                "removed_count": len(self.removed_nodes),
                "kept_count": len(self.kept_nodes),
                "removed_point_indices": [int(i) for i in self.removed_point_indices],
            },
            **kwargs,
        )


def _trunk_node(centroids, node_of_cell, cell_of_point, cloud):
    if cloud is not None and len(cloud):
        trunk_mask = cloud.labels == LABEL_TRUNK
        if np.any(trunk_mask):
            rows = np.flatnonzero(trunk_mask)
            lowest = rows[np.argmin(cloud.xyz[rows, 2])]
            cell = cell_of_point(cloud.xyz[lowest])
            if cell in node_of_cell:
                return node_of_cell[cell]
        center = cloud.xyz[:, :2].mean(axis=0)
    else:
        center = centroids[:, :2].mean(axis=0)
    horiz = np.linalg.norm(centroids[:, :2] - center[None, :], axis=1)
    central = np.flatnonzero(horiz <= 0.5)
    if central.size:
        return int(central[np.argmin(centroids[central, 2])])
    return int(np.argmin(centroids[:, 2]))


def find_trunk(graph: TreeGraph, cloud: PointCloud | None = None) -> int:
    """Pick the trunk node.

    Preference order: the node containing the lowest trunk-labeled point;
    else the lowest node within 0.5 m horizontal distance of the cloud's
    horizontal centroid; else the lowest node overall.
    """

    def cell_of_point(point):
        return tuple(np.floor((np.asarray(point) - graph.origin) / graph.voxel_size).astype(np.int64))

    return _trunk_node(graph.centroids, graph.node_of_cell, cell_of_point, cloud)


def build_graph(grid: VoxelGrid, neighbor_radius=None, cloud: PointCloud | None = None) -> TreeGraph:
    """One node per cell; edges between all centroid pairs within radius.

    Default radius is 1.8 x voxel_size.  A graph whose trunk cannot reach
    every node is allowed: a warning reports the unreachable count and
    those nodes are classified kept by the prune simulator.
    """
    if len(grid) == 0:
        raise ParameterError("cannot build a graph over an empty grid")
    if neighbor_radius is None:
        neighbor_radius = NEIGHBOR_RADIUS_FACTOR * grid.voxel_size
    if neighbor_radius <= 0:
        raise ParameterError(f"neighbor_radius must be > 0, got {neighbor_radius}")
    cell_indices = list(grid.cells.keys())
    centroids = grid.centroid_array
    adjacency = {i: [] for i in range(len(cell_indices))}
    if len(cell_indices) > 1:
        tree = cKDTree(centroids)
        for a, b in tree.query_pairs(neighbor_radius, output_type="ndarray"):
            w = float(np.linalg.norm(centroids[a] - centroids[b]))
            adjacency[int(a)].append((int(b), w))
            adjacency[int(b)].append((int(a), w))
    for node in adjacency:
        adjacency[node].sort()
    node_of_cell = {idx: i for i, idx in enumerate(cell_indices)}
    trunk = _trunk_node(centroids, node_of_cell, grid.cell_of_point, cloud)
    graph = TreeGraph(
        centroids, cell_indices, adjacency, trunk, neighbor_radius,
        grid.voxel_size, grid.origin,
    )
    if graph.unreachable:
        warnings.warn(
            f"{len(graph.unreachable)} of {len(graph)} nodes unreachable from trunk",
            stacklevel=2,
        )
    return graph


def shortest_paths(graph: TreeGraph):
    """Minimal-weight path from every reachable node to the trunk.

    Dijkstra from the trunk gives exact distances (equivalent to running
    A* per node with an admissible heuristic); ties are broken by always
    preferring the smallest next-hop node id, which makes each path the
    lexicographically smallest among the minimum-weight ones.  Unreachable
    nodes are absent from the result.
    """
    n = len(graph)
    dist = np.full(n, np.inf)
    dist[graph.trunk] = 0.0
    heap = [(0.0, graph.trunk)]
    while heap:
        d, node = heapq.heappop(heap)
        if d > dist[node]:
            continue
        for nbr, w in graph.adjacency[node]:
            nd = d + w
            if nd < dist[nbr]:
                dist[nbr] = nd
                heapq.heappush(heap, (nd, nbr))

    next_hop = {}
    for node in range(n):
        if node == graph.trunk or not np.isfinite(dist[node]):
            continue
        tol = _REL_TOL * max(1.0, dist[node])
        for nbr, w in graph.adjacency[node]:  # ascending id: first match wins
            if dist[nbr] < dist[node] and abs(w + dist[nbr] - dist[node]) <= tol:
                next_hop[node] = nbr
                break
    paths = {}
    for node in range(n):
        if not np.isfinite(dist[node]):
            continue
        path = [node]
        cur = node
        while cur != graph.trunk:
            cur = next_hop[cur]
            path.append(cur)
        paths[node] = path
    return paths


def removed_node_set(paths, cut_nodes):
    """Cut nodes plus every node whose trunk path crosses one."""
    cut_nodes = set(cut_nodes)
    removed = set(cut_nodes)
    for node, path in paths.items():
        if node in removed:
            continue
        if any(step in cut_nodes for step in path):
            removed.add(node)
    return removed


def cut_node_set(graph: TreeGraph, cuts):
    """All nodes within each cut's radius of its location.

    A cut outside the canopy bounds or matching nothing raises
    EmptyCutError naming the cut.
    """
    tree = cKDTree(graph.centroids)
    box_lo = graph.centroids.min(axis=0)
    box_hi = graph.centroids.max(axis=0)
    cut_nodes = set()
    for cut in cuts:
        loc = np.asarray(cut.location, dtype=np.float64)
        if np.any(loc < box_lo - cut.cut_radius) or np.any(loc > box_hi + cut.cut_radius):
            raise EmptyCutError(
                f"cut at {tuple(round(v, 3) for v in loc)} lies outside the tree bounds"
            )
        matched = tree.query_ball_point(loc, cut.cut_radius)
        if not matched:
            raise EmptyCutError(
                f"cut at {tuple(round(v, 3) for v in loc)} matched no nodes "
                f"within radius {cut.cut_radius}"
            )
        cut_nodes.update(int(m) for m in matched)
    return cut_nodes


def simulate_prune(graph: TreeGraph, paths, cuts, grid: VoxelGrid | None = None) -> PruneResult:
    """Classify nodes and points as removed for a set of cuts.

    A node is removed when it is within a cut's radius or its trunk path
    crosses such a node.  Unreachable nodes are never removed by paths.
    When the source grid is given, the removed cells' point indices are
    collected for propagation back to the cloud.
    """
    if not cuts:
        raise ParameterError("need at least one cut")
    cut_nodes = cut_node_set(graph, cuts)
    removed = removed_node_set(paths, cut_nodes)
    kept = set(range(len(graph))) - removed
    point_indices = []
    if grid is not None:
        for node in removed:
            point_indices.append(grid.cells[graph.cell_indices[node]].point_indices)
    removed_points = (
        np.sort(np.concatenate(point_indices)) if point_indices else np.array([], dtype=np.int64)
    )
    return PruneResult(
        cut_nodes=frozenset(cut_nodes),
        removed_nodes=frozenset(removed),
        kept_nodes=frozenset(kept),
        removed_point_indices=removed_points,
        unreachable_nodes=graph.unreachable,
    )


def apply_prune(cloud: PointCloud, result: PruneResult):
    """Split the cloud into (kept, removed) clouds, preserving point order."""
    removed_idx = np.asarray(result.removed_point_indices, dtype=np.int64)
    if removed_idx.size and (removed_idx.min() < 0 or removed_idx.max() >= len(cloud)):
        raise ConsistencyError(
            f"removed point index out of range for cloud of {len(cloud)} points"
        )
    mask = np.zeros(len(cloud), dtype=bool)
    mask[removed_idx] = True
    kept = cloud.subset(np.flatnonzero(~mask))
    removed = cloud.subset(np.flatnonzero(mask))
    return kept, removed
