"""Ground-truth validation of the prune simulator on one synthetic stand.

Trees are pruned at the mesh stage (exact ground truth), the stand is
virtually scanned before and after, and the simulator's predicted removal
on the before-scan is scored against what actually disappeared.

The full protocol (6 spacings x 8 replicates = 144 trees) runs via
``treeprune benchmark``; this demo does a single stand for speed.

Run from the repository root:  python3 demos/04_ground_truth_f1.py
"""

import numpy as np

from treeprune import PipelineConfig, evaluate_f1
from treeprune.benchmark import (
    _assign_to_trees,
    build_ground_truth_stand,
    make_base_trees,
    predicted_removal,
)
from treeprune.synth import GROUND_ID

config = PipelineConfig(seed=7)
spacing = 5.0
base_trees = make_base_trees(config.seed)
for i, (mesh, limbs) in enumerate(base_trees):
    print(f"tree {i}: {len(mesh)} segments, cut candidates (major limbs): {limbs}")

rng = np.random.default_rng(404)
pair, cut_meta, scene = build_ground_truth_stand(base_trees, spacing, rng)
print(f"\nstand at {spacing} m spacing: reference scan {len(pair.reference_scan)} pts, "
      f"pruned scan {len(pair.pruned_scan)} pts")
print(f"mesh ground truth: {len(pair.removed_segment_ids)} segments removed, "
      f"{len(pair.cut_points)} cut points")

ref = pair.reference_scan
tree_rows = np.flatnonzero(ref.source_ids != GROUND_ID)
assign = np.full(len(ref), -1)
offsets = [None] * 3
for placed in scene.trees:
    offsets[placed.tree_id] = placed.offset
assign[tree_rows] = _assign_to_trees(ref.subset(tree_rows), offsets)

print("\ntree  cuts  points  precision  recall     F1")
for tree_id in range(3):
    sub = ref.subset(np.flatnonzero(assign == tree_id))
    cuts = [loc for owner, loc in pair.cut_points if owner == tree_id]
    removed = predicted_removal(sub, cuts, config)
    p, r, f1 = evaluate_f1(
        sub.subset(removed), sub, pair.pruned_scan, config.match_tolerance
    )
    print(f"{tree_id:>4}  {cut_meta[tree_id]['n_cuts']:>4}  {len(sub):>6}  "
          f"{p:9.3f}  {r:6.3f}  {f1:6.3f}")
