"""Batch entry points: score, prune, suggest, benchmark, serve.

Every command is a pure function of (inputs, config file, flags, seed);
flag values override the config file, which overrides defaults.  Outputs
are written atomically (temp file + rename) so reruns are byte-stable, and
failures print machine-readable JSON to stderr with a nonzero exit code.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import tempfile
import warnings
from pathlib import Path

from .cloud import CSV_FORMAT, load_cloud, save_cloud
from .config import PipelineConfig
from .errors import TreepruneError
from .graph import CutSpec, apply_prune, build_graph, shortest_paths, simulate_prune
from .pipeline import measure, score_reports, sky_for
from .suggest import suggest_cuts
from .voxel import voxelize

_FLAG_FIELDS = {
    "voxel_size": float,
    "neighbor_radius": float,
    "cut_radius": float,
    "kappa": float,
    "ray_spacing": float,
    "slice_height": float,
    "latitude": float,
    "day_step": int,
    "hour_step": float,
    "shade_percentile": float,
    "select_percentile": float,
    "min_separation": float,
    "k": int,
    "match_tolerance": float,
    "seed": int,
}


def atomic_write(path, data):
    """Write text or bytes via a temp file in the target directory."""
    path = Path(path)
    mode = "wb" if isinstance(data, bytes) else "w"
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, mode) as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_save_cloud(cloud, path, format=CSV_FORMAT):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    os.close(fd)
    try:
        save_cloud(cloud, tmp, format)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def add_config_flags(parser):
    parser.add_argument("--config", help="JSON pipeline config file")
    for name, kind in _FLAG_FIELDS.items():
        parser.add_argument(f"--{name.replace('_', '-')}", type=kind, default=None)


def resolve_config(args) -> PipelineConfig:
    """flag > config file > default."""
    config = PipelineConfig.load(args.config) if args.config else PipelineConfig()
    overrides = {}
    for name in _FLAG_FIELDS:
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    return config.replace(**overrides) if overrides else config


def cmd_score(args):
    config = resolve_config(args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    sky = sky_for(config)
    metrics = {}
    failures = {}
    for path in args.clouds:
        name = Path(path).stem
        try:
            cloud = load_cloud(path, args.format)
            metrics[name] = measure(cloud, config, sky)
        except TreepruneError as exc:
            failures[name] = str(exc)
            print(json.dumps({"code": type(exc).__name__, "file": path, "message": str(exc)}),
                  file=sys.stderr)
    if not metrics:
        raise TreepruneError("no input cloud could be scored")
    reports = score_reports(metrics, config)
    lines = ["tree,D,V_norm,L_norm,S"]
    for name, report in reports.items():
        lines.append(f"{name},{report.D:.6f},{report.v_norm:.6f},{report.l_norm:.6f},{report.S:.6f}")
    atomic_write(out_dir / "scores.csv", "\n".join(lines) + "\n")
    payload = {name: report.as_dict() for name, report in reports.items()}
    if failures:
        payload["_failures"] = failures
    atomic_write(out_dir / "scores.json", json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return 0


def load_cut_points(path):
    points = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise TreepruneError(f"{path}:{lineno}: cut points need 3 columns")
            points.append(tuple(float(v) for v in parts))
    if not points:
        raise TreepruneError(f"{path}: no cut points")
    return points


def cmd_prune(args):
    config = resolve_config(args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    cloud = load_cloud(args.cloud, args.format)
    cut_points = load_cut_points(args.cuts)
    grid = voxelize(cloud, config.voxel_size)
    graph = build_graph(grid, config.neighbor_radius, cloud)
    paths = shortest_paths(graph)
    cuts = [CutSpec(p, config.cut_radius) for p in cut_points]
    result = simulate_prune(graph, paths, cuts, grid)
    kept, removed = apply_prune(cloud, result)
    atomic_save_cloud(kept, out_dir / "kept.csv")
    atomic_save_cloud(removed, out_dir / "removed.csv")
    atomic_write(out_dir / "prune.json", result.to_json(indent=2) + "\n")
    # Overlay with an extra removed/kept channel for rendering.
    removed_rows = set(int(i) for i in result.removed_point_indices)
    lines = []
    for i in range(len(cloud)):
        x, y, z = (float(v) for v in cloud.xyz[i])
        flag = 1 if i in removed_rows else 0
        lines.append(f"{x!r},{y!r},{z!r},{int(cloud.labels[i])},{flag}")
    atomic_write(out_dir / "classified.csv", "\n".join(lines) + "\n")
    return 0


def cmd_suggest(args):
    config = resolve_config(args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    cloud = load_cloud(args.cloud, args.format)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        result = suggest_cuts(cloud, config)
    atomic_write(out_dir / "suggestions.json", result.to_json(indent=2) + "\n")
    atomic_write(out_dir / "suggestions.csv", result.to_csv())
    if result.selected:
        atomic_save_cloud(result.overlay_cloud(), out_dir / "cut_points.csv")
    return 0


def cmd_benchmark(args):
    from .benchmark import run_f1_benchmark

    config = resolve_config(args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    spacings = tuple(float(s) for s in args.spacings.split(","))
    result = run_f1_benchmark(config, spacings=spacings, replicates=args.replicates)
    atomic_write(out_dir / "f1_by_spacing.csv", result.csv_by_spacing())
    atomic_write(out_dir / "f1_by_spacing_cuts.csv", result.csv_by_spacing_cuts())
    atomic_write(out_dir / "f1_per_tree.csv", result.csv_rows())
    return 0


def cmd_serve(args):
    import uvicorn

    from .service import create_app

    config = resolve_config(args)
    app = create_app(config, snapshot_dir=args.snapshot_dir, static_dir=args.static_dir)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="treeprune",
        description="Score, prune and improve fruit-tree point clouds by light distribution.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_score = sub.add_parser("score", help="score one or more tree clouds as a comparison set")
    p_score.add_argument("clouds", nargs="+")
    p_score.add_argument("--format", default=CSV_FORMAT)
    p_score.add_argument("--out", default="scores")
    add_config_flags(p_score)
    p_score.set_defaults(func=cmd_score)

    p_prune = sub.add_parser("prune", help="simulate cuts and split the cloud")
    p_prune.add_argument("cloud")
    p_prune.add_argument("--cuts", required=True, help="CSV of x,y,z cut locations")
    p_prune.add_argument("--format", default=CSV_FORMAT)
    p_prune.add_argument("--out", default="prune")
    add_config_flags(p_prune)
    p_prune.set_defaults(func=cmd_prune)

    p_suggest = sub.add_parser("suggest", help="suggest and evaluate cut points")
    p_suggest.add_argument("cloud")
    p_suggest.add_argument("--format", default=CSV_FORMAT)
    p_suggest.add_argument("--out", default="suggestions")
    add_config_flags(p_suggest)
    p_suggest.set_defaults(func=cmd_suggest)

    p_bench = sub.add_parser("benchmark", help="synthetic ground-truth F1 benchmark")
    p_bench.add_argument("--spacings", default="3,4,5,6,7,8")
    p_bench.add_argument("--replicates", type=int, default=8)
    p_bench.add_argument("--out", default="benchmark")
    add_config_flags(p_bench)
    p_bench.set_defaults(func=cmd_benchmark)

    p_serve = sub.add_parser("serve", help="run the interactive what-if HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8765)
    p_serve.add_argument("--snapshot-dir", default=None)
    p_serve.add_argument("--static-dir", default=None, help="built UI bundle to serve at /")
    add_config_flags(p_serve)
    p_serve.set_defaults(func=cmd_serve)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TreepruneError as exc:
        print(json.dumps({"code": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
