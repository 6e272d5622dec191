import warnings

import numpy as np
import pytest

from treeprune.config import PipelineConfig
from treeprune.errors import ParameterError
from treeprune.light import save_lightfield_csv
from treeprune.pipeline import measure, score_reports, sky_for
from treeprune.suggest import evaluate_suggestions, select_candidates, suggest_cuts
from treeprune.synth import (
    Scene,
    SynthParams,
    TreeMesh,
    generate_tree,
    sample_tree_cloud,
)
from treeprune.benchmark import build_ground_truth_stand, make_base_trees


@pytest.fixture(scope="module")
def fast_config():
    # A handful of sky samples keeps raytracing cheap in unit tests.
    return PipelineConfig(season=(80, 81), day_step=1, hour_step=4.0, ray_spacing=0.25)


@pytest.fixture(scope="module")
def tree_cloud():
    return sample_tree_cloud(SynthParams(seed=11), angular_resolution=0.5)


class TestMeasure:
    def test_components_positive(self, fast_config, tree_cloud):
        metrics = measure(tree_cloud, fast_config)
        assert metrics.volume > 0
        assert metrics.light > 0
        assert -0.25 <= metrics.D <= np.log(2)

    def test_reports_normalized_over_set(self, fast_config, tree_cloud):
        m = measure(tree_cloud, fast_config)
        half = tree_cloud.subset(np.flatnonzero(tree_cloud.xyz[:, 2] < tree_cloud.xyz[:, 2].mean()))
        m_half = measure(half, fast_config)
        reports = score_reports({"full": m, "half": m_half}, fast_config)
        assert reports["full"].v_norm == 1.0
        assert reports["half"].v_norm < 1.0
        assert max(r.l_norm for r in reports.values()) == 1.0

    def test_lightfield_csv_layout(self, fast_config, tree_cloud, tmp_path):
        metrics = measure(tree_cloud, fast_config)
        path = tmp_path / "field.csv"
        save_lightfield_csv(metrics.field, path)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "ix,iy,iz,absorbed,p"
        first = lines[1].split(",")
        assert len(first) == 5
        assert float(first[4]) <= 1.0


class TestEvaluateSuggestions:
    def test_baseline_row_and_changes(self, fast_config, tree_cloud):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            result = suggest_cuts(tree_cloud, fast_config)
        assert result.reports["None"].v_norm == 1.0
        assert result.reports["None"].l_norm == 1.0
        assert result.changes["None"] == (0.0, 0.0)
        labels = list(result.reports)
        assert labels[0] == "None"
        assert labels[-1] == "All"
        for label, rep in result.reports.items():
            assert rep.v_norm <= 1.0
            assert rep.l_norm <= 1.0

    def test_requires_selection(self, fast_config, tree_cloud):
        from treeprune.suggest import SuggestionSet

        empty = SuggestionSet(candidates=[], selected=[])
        with pytest.raises(ParameterError):
            evaluate_suggestions(tree_cloud, empty, fast_config)


class TestGroundTruthStand:
    def test_pair_invariants(self):
        base_trees = make_base_trees(seed=3)
        rng = np.random.default_rng(5)
        pair, cut_meta, scene = build_ground_truth_stand(base_trees, spacing=6.0, rng=rng)
        # Removed ids are full distal subtrees of the cut segments.
        for tree_id, meta in enumerate(cut_meta):
            mesh = base_trees[tree_id][0]
            removed = meta["removed"]
            for seg_id in removed:
                for child in mesh.children.get(seg_id, []):
                    assert child in removed  # closed under descent
        # Cut points lie on removed segments (midpoints by construction).
        removed_lookup = {(t, s) for t, s in pair.removed_segment_ids}
        offsets = {p.tree_id: np.asarray(p.offset) for p in scene.trees}
        for tree_id, loc in pair.cut_points:
            mesh = base_trees[tree_id][0]
            local = np.asarray(loc) - offsets[tree_id]
            hit = False
            for seg_id in [s for t, s in removed_lookup if t == tree_id]:
                seg = mesh.segments[seg_id]
                mid = 0.5 * (np.asarray(seg.start) + np.asarray(seg.end))
                if np.allclose(local, mid, atol=1e-9):
                    hit = True
                    break
            assert hit

    def test_scans_nonempty_and_scoped(self):
        base_trees = make_base_trees(seed=3)
        rng = np.random.default_rng(5)
        pair, _, _ = build_ground_truth_stand(base_trees, spacing=5.0, rng=rng)
        assert len(pair.reference_scan) > 1000
        assert len(pair.pruned_scan) > 1000
        # No pruned-scan point carries a removed segment id.
        pruned_ids = {
            (int(t), int(s))
            for t, s in zip(pair.pruned_scan.source_ids, pair.pruned_scan.segment_ids)
        }
        assert not (pruned_ids & pair.removed_segment_ids)


class TestMeshJson:
    def test_mesh_round_trip(self):
        mesh = generate_tree(SynthParams(seed=6))
        clone = TreeMesh.from_json(mesh.to_json())
        assert clone.root_id == mesh.root_id
        assert clone.ordered() == mesh.ordered()

    def test_scene_round_trip(self):
        from treeprune.synth import build_stand

        meshes = [generate_tree(SynthParams(seed=s)) for s in range(3)]
        scene = build_stand(meshes, 4.0, order_seed=1)
        clone = Scene.from_json(scene.to_json())
        assert clone.ground == scene.ground
        assert [p.tree_id for p in clone.trees] == [p.tree_id for p in scene.trees]
        assert clone.trees[0].mesh.ordered() == scene.trees[0].mesh.ordered()
