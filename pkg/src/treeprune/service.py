"""Stateless-protocol HTTP facade for the interactive what-if UI.

Upload a tree, inspect its light field, preview a cut without committing,
accept or undo cuts.  Sessions live in memory (optionally snapshotted to
disk); the current cloud is always exactly what replaying the accepted cut
history against the original cloud produces, and caches are rebuilt
whenever the current cloud changes, so any interleaving of previews leaves
the session untouched.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field as dataclass_field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .cloud import BINARY_FORMAT, CSV_FORMAT, PointCloud, load_cloud, save_cloud
from .config import PipelineConfig
from .errors import EmptyCutError, TreepruneError
from .graph import CutSpec, apply_prune, build_graph, shortest_paths, simulate_prune
from .pipeline import change_pct, measure, score_reports, sky_for
from .suggest import suggest_cuts

BASELINE_KEY = "baseline"
CURRENT_KEY = "current"


@dataclass
class Session:
    """One uploaded tree and its accepted-cut history."""

    tree_id: str
    original: PointCloud
    cuts: list = dataclass_field(default_factory=list)  # accepted cut dicts
    current: PointCloud = None
    _cache: dict = dataclass_field(default_factory=dict)

    def __post_init__(self):
        if self.current is None:
            self.current = self.original

    def invalidate(self):
        self._cache.clear()

    def cached(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]


def _parse_cloud_body(body: bytes, content_type: str) -> PointCloud:
    suffix = ".bin" if "octet-stream" in (content_type or "") else ".csv"
    format = BINARY_FORMAT if suffix == ".bin" else CSV_FORMAT
    fd, tmp = tempfile.mkstemp(suffix=suffix)
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(body)
        return load_cloud(tmp, format)
    finally:
        os.unlink(tmp)


def _apply_cut(cloud: PointCloud, cut, config: PipelineConfig) -> PointCloud:
    """Prune one accepted cut from the cloud; the replay building block."""
    from .voxel import voxelize

    grid = voxelize(cloud, config.voxel_size)
    graph = build_graph(grid, config.neighbor_radius, cloud)
    paths = shortest_paths(graph)
    spec = CutSpec(tuple(cut["location"]), cut["cut_radius"])
    result = simulate_prune(graph, paths, [spec], grid)
    kept, _ = apply_prune(cloud, result)
    return kept


def _removed_indices(cloud: PointCloud, cut, config: PipelineConfig):
    from .voxel import voxelize

    grid = voxelize(cloud, config.voxel_size)
    graph = build_graph(grid, config.neighbor_radius, cloud)
    paths = shortest_paths(graph)
    spec = CutSpec(tuple(cut["location"]), cut["cut_radius"])
    result = simulate_prune(graph, paths, [spec], grid)
    removed_cells = sorted(graph.cell_indices[n] for n in result.removed_nodes)
    return result, removed_cells, apply_prune(cloud, result)


def create_app(config: PipelineConfig | None = None, snapshot_dir=None, static_dir=None) -> FastAPI:
    config = config or PipelineConfig()
    app = FastAPI(title="treeprune service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    sessions: dict[str, Session] = {}
    counter = {"next": 1}
    sky = sky_for(config)

    def error(status, code, message):
        return JSONResponse(status_code=status, content={"code": code, "message": message})

    def snapshot(session: Session):
        if snapshot_dir is None:
            return
        root = Path(snapshot_dir) / session.tree_id
        root.mkdir(parents=True, exist_ok=True)
        save_cloud(session.original, root / "original.csv")
        with open(root / "history.json", "w", encoding="utf-8") as fh:
            json.dump(session.cuts, fh, indent=2)

    def restore_snapshots():
        if snapshot_dir is None or not Path(snapshot_dir).is_dir():
            return
        for entry in sorted(Path(snapshot_dir).iterdir()):
            cloud_path = entry / "original.csv"
            if not cloud_path.is_file():
                continue
            original = load_cloud(cloud_path)
            cuts = []
            history = entry / "history.json"
            if history.is_file():
                cuts = json.loads(history.read_text())
            session = Session(tree_id=entry.name, original=original, cuts=cuts)
            for cut in cuts:
                session.current = _apply_cut(session.current, cut, config)
            sessions[entry.name] = session
            try:
                number = int(entry.name.rsplit("-", 1)[-1])
                counter["next"] = max(counter["next"], number + 1)
            except ValueError:
                pass

    restore_snapshots()

    def session_or_none(tree_id) -> Session | None:
        return sessions.get(tree_id)

    def pair_reports(session: Session, variant_cloud: PointCloud):
        """Reports normalized over {original tree, variant}."""
        base = session.cached(
            BASELINE_KEY, lambda: measure(session.original, config, sky)
        )
        variant = measure(variant_cloud, config, sky)
        reports = score_reports({"baseline": base, "variant": variant}, config)
        return reports["baseline"], reports["variant"]

    def current_state_payload(session: Session):
        baseline, current = pair_reports(session, session.current)
        return {
            "id": session.tree_id,
            "n_points": len(session.current),
            "history_length": len(session.cuts),
            "history": session.cuts,
            "baseline": baseline.as_dict(),
            "current": current.as_dict(),
            "changes": {
                "D_change_pct": change_pct(baseline.D, current.D),
                "S_change_pct": change_pct(baseline.S, current.S),
            },
        }

    @app.post("/trees", status_code=201)
    async def upload_tree(request: Request):
        body = await request.body()
        if not body.strip():
            return error(400, "EmptyCloudError", "request body is empty")
        try:
            cloud = _parse_cloud_body(body, request.headers.get("content-type", ""))
        except TreepruneError as exc:
            return error(400, type(exc).__name__, str(exc))
        tree_id = f"tree-{counter['next']}"
        counter["next"] += 1
        session = Session(tree_id=tree_id, original=cloud)
        sessions[tree_id] = session
        snapshot(session)
        return {"id": tree_id, "n_points": len(cloud)}

    @app.get("/trees/{tree_id}")
    def tree_info(tree_id: str):
        session = session_or_none(tree_id)
        if session is None:
            return error(404, "UnknownTree", f"no tree {tree_id!r}")
        try:
            return current_state_payload(session)
        except TreepruneError as exc:
            return error(422, type(exc).__name__, str(exc))

    @app.get("/trees/{tree_id}/lightfield")
    def lightfield(tree_id: str):
        session = session_or_none(tree_id)
        if session is None:
            return error(404, "UnknownTree", f"no tree {tree_id!r}")

        def build():
            metrics = measure(session.current, config, sky)
            voxels = []
            per_voxel = metrics.distribution.per_voxel
            for index in sorted(metrics.field.p):
                cell = metrics.grid.cells[index]
                voxels.append(
                    {
                        "index": list(index),
                        "centroid": [float(c) for c in cell.centroid],
                        "p": metrics.field.p[index],
                        "d": per_voxel[index],
                    }
                )
            return {"id": session.tree_id, "voxel_count": len(voxels), "voxels": voxels}

        try:
            payload = session.cached(CURRENT_KEY + ":lightfield", build)
        except TreepruneError as exc:
            return error(422, type(exc).__name__, str(exc))
        return payload

    @app.post("/trees/{tree_id}/simulate")
    async def simulate(tree_id: str, request: Request):
        session = session_or_none(tree_id)
        if session is None:
            return error(404, "UnknownTree", f"no tree {tree_id!r}")
        spec = await request.json()
        cut = {
            "location": spec.get("location"),
            "cut_radius": spec.get("cut_radius", config.cut_radius),
        }
        if not cut["location"] or len(cut["location"]) != 3:
            return error(422, "ParameterError", "location must be [x, y, z]")
        try:
            result, removed_cells, (kept, removed) = _removed_indices(session.current, cut, config)
            baseline, variant = pair_reports(session, kept)
        except EmptyCutError as exc:
            return error(422, "EmptyCutError", str(exc))
        except TreepruneError as exc:
            return error(422, type(exc).__name__, str(exc))
        return {
            "removed_point_indices": [int(i) for i in result.removed_point_indices],
            "removed_cells": [list(cell) for cell in removed_cells],
            "removed_count": len(result.removed_point_indices),
            "baseline": baseline.as_dict(),
            "report": variant.as_dict(),
            "changes": {
                "D_change_pct": change_pct(baseline.D, variant.D),
                "S_change_pct": change_pct(baseline.S, variant.S),
            },
        }

    @app.post("/trees/{tree_id}/cuts")
    async def accept_cut(tree_id: str, request: Request):
        session = session_or_none(tree_id)
        if session is None:
            return error(404, "UnknownTree", f"no tree {tree_id!r}")
        spec = await request.json()
        cut = {
            "location": list(spec.get("location") or []),
            "cut_radius": spec.get("cut_radius", config.cut_radius),
        }
        if len(cut["location"]) != 3:
            return error(422, "ParameterError", "location must be [x, y, z]")
        try:
            new_current = _apply_cut(session.current, cut, config)
        except EmptyCutError as exc:
            return error(422, "EmptyCutError", str(exc))
        except TreepruneError as exc:
            return error(422, type(exc).__name__, str(exc))
        session.cuts.append(cut)
        session.current = new_current
        session.invalidate()
        snapshot(session)
        try:
            return current_state_payload(session)
        except TreepruneError as exc:
            return error(422, type(exc).__name__, str(exc))

    @app.delete("/trees/{tree_id}/cuts/last")
    def undo_cut(tree_id: str):
        session = session_or_none(tree_id)
        if session is None:
            return error(404, "UnknownTree", f"no tree {tree_id!r}")
        if not session.cuts:
            return error(409, "EmptyHistory", "no accepted cuts to undo")
        session.cuts.pop()
        # Replay the remaining history from the original cloud.
        current = session.original
        for cut in session.cuts:
            current = _apply_cut(current, cut, config)
        session.current = current
        session.invalidate()
        snapshot(session)
        return current_state_payload(session)

    @app.get("/trees/{tree_id}/suggestions")
    def suggestions(tree_id: str, k: int | None = None):
        session = session_or_none(tree_id)
        if session is None:
            return error(404, "UnknownTree", f"no tree {tree_id!r}")
        run_config = config.replace(k=k) if k else config

        def build():
            import warnings

            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                result = suggest_cuts(session.current, run_config)
            return json.loads(result.to_json())

        try:
            return session.cached(f"{CURRENT_KEY}:suggestions:k={run_config.k}", build)
        except TreepruneError as exc:
            return error(422, type(exc).__name__, str(exc))

    if static_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
