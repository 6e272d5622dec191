import json

import numpy as np
import pytest
from fastapi.testclient import TestClient

from treeprune.cloud import save_cloud
from treeprune.config import PipelineConfig
from treeprune.service import create_app
from treeprune.synth import SynthParams, sample_tree_cloud


@pytest.fixture(scope="module")
def tree_body():
    from treeprune.cloud import format_csv_row

    cloud = sample_tree_cloud(SynthParams(seed=7), angular_resolution=0.6)
    lines = [
        format_csv_row(*cloud.xyz[i], label=cloud.labels[i]) for i in range(len(cloud))
    ]
    return ("\n".join(lines) + "\n").encode()


@pytest.fixture()
def client():
    app = create_app(PipelineConfig())
    with TestClient(app) as c:
        yield c


@pytest.fixture()
def tree_id(client, tree_body):
    response = client.post("/trees", content=tree_body, headers={"content-type": "text/csv"})
    assert response.status_code == 201
    return response.json()["id"]


def canopy_location(client, tree_id, quantile=0.9):
    voxels = client.get(f"/trees/{tree_id}/lightfield").json()["voxels"]
    zs = sorted(v["centroid"][2] for v in voxels)
    target_z = zs[int(quantile * (len(zs) - 1))]
    candidates = [v for v in voxels if v["centroid"][2] >= target_z]
    return candidates[0]["centroid"]


class TestUpload:
    def test_valid_csv_gets_id(self, client, tree_body):
        response = client.post("/trees", content=tree_body, headers={"content-type": "text/csv"})
        assert response.status_code == 201
        assert response.json()["id"].startswith("tree-")

    def test_empty_body_400(self, client):
        response = client.post("/trees", content=b"", headers={"content-type": "text/csv"})
        assert response.status_code == 400
        assert response.json()["code"]

    def test_reupload_gets_new_id(self, client, tree_body):
        a = client.post("/trees", content=tree_body, headers={"content-type": "text/csv"})
        b = client.post("/trees", content=tree_body, headers={"content-type": "text/csv"})
        assert a.json()["id"] != b.json()["id"]

    def test_unknown_tree_404(self, client):
        assert client.get("/trees/tree-999/lightfield").status_code == 404


class TestLightfield:
    def test_voxels_cover_grid_and_max_p_is_one(self, client, tree_id):
        payload = client.get(f"/trees/{tree_id}/lightfield").json()
        voxels = payload["voxels"]
        assert payload["voxel_count"] == len(voxels)
        assert len(voxels) > 50
        assert max(v["p"] for v in voxels) == 1.0

    def test_repeated_call_identical(self, client, tree_id):
        a = client.get(f"/trees/{tree_id}/lightfield")
        b = client.get(f"/trees/{tree_id}/lightfield")
        assert a.content == b.content


class TestSimulate:
    def test_far_outside_422(self, client, tree_id):
        response = client.post(
            f"/trees/{tree_id}/simulate", json={"location": [99.0, 99.0, 99.0]}
        )
        assert response.status_code == 422
        assert response.json()["code"] == "EmptyCutError"

    def test_simulate_reports_identity_and_no_mutation(self, client, tree_id):
        before = client.get(f"/trees/{tree_id}/lightfield").content
        loc = canopy_location(client, tree_id)
        response = client.post(f"/trees/{tree_id}/simulate", json={"location": loc})
        assert response.status_code == 200
        payload = response.json()
        assert payload["removed_count"] >= 1
        report = payload["report"]
        coeffs = report["coefficients"]
        s = (
            coeffs["alpha"] * report["D"]
            + coeffs["beta"] * report["v_norm"]
            + coeffs["gamma"] * report["l_norm"]
        )
        assert report["S"] == pytest.approx(s, abs=1e-12)
        assert report["v_norm"] <= 1.0
        # Any number of simulates leaves the session untouched.
        client.post(f"/trees/{tree_id}/simulate", json={"location": loc})
        after = client.get(f"/trees/{tree_id}/lightfield").content
        assert before == after
        assert client.get(f"/trees/{tree_id}").json()["history_length"] == 0


class TestAcceptUndo:
    def test_accept_then_undo_restores_lightfield(self, client, tree_id):
        baseline = client.get(f"/trees/{tree_id}/lightfield").content
        loc = canopy_location(client, tree_id)
        accepted = client.post(f"/trees/{tree_id}/cuts", json={"location": loc})
        assert accepted.status_code == 200
        assert accepted.json()["history_length"] == 1
        changed = client.get(f"/trees/{tree_id}/lightfield").content
        assert changed != baseline
        undone = client.delete(f"/trees/{tree_id}/cuts/last")
        assert undone.status_code == 200
        assert undone.json()["history_length"] == 0
        restored = client.get(f"/trees/{tree_id}/lightfield").content
        assert restored == baseline

    def test_two_accepts_nested_removal(self, client, tree_id):
        info0 = client.get(f"/trees/{tree_id}").json()
        n0 = info0["n_points"]
        loc1 = canopy_location(client, tree_id, 0.95)
        r1 = client.post(f"/trees/{tree_id}/cuts", json={"location": loc1})
        n1 = r1.json()["n_points"]
        loc2 = canopy_location(client, tree_id, 0.9)
        r2 = client.post(f"/trees/{tree_id}/cuts", json={"location": loc2})
        n2 = r2.json()["n_points"]
        assert n0 > n1 > n2 or (n0 > n1 and n1 >= n2)
        assert r2.json()["history_length"] == 2

    def test_undo_empty_history_409(self, client, tree_id):
        response = client.delete(f"/trees/{tree_id}/cuts/last")
        assert response.status_code == 409


class TestSuggestions:
    def test_k_one_rows(self, client, tree_id):
        payload = client.get(f"/trees/{tree_id}/suggestions", params={"k": 1}).json()
        assert set(payload["reports"]) == {"None", "A", "All"}
        assert payload["changes"]["None"]["D_change_pct"] == 0.0
        assert payload["changes"]["None"]["S_change_pct"] == 0.0
        assert payload["reports"]["None"]["v_norm"] == 1.0

    def test_deterministic_per_session(self, client, tree_id):
        a = client.get(f"/trees/{tree_id}/suggestions", params={"k": 2})
        b = client.get(f"/trees/{tree_id}/suggestions", params={"k": 2})
        assert a.content == b.content


class TestSnapshots:
    def test_restore_after_restart(self, tree_body, tmp_path):
        snapshot_dir = tmp_path / "snaps"
        app = create_app(PipelineConfig(), snapshot_dir=str(snapshot_dir))
        with TestClient(app) as client:
            tree_id = client.post(
                "/trees", content=tree_body, headers={"content-type": "text/csv"}
            ).json()["id"]
            loc = canopy_location(client, tree_id)
            client.post(f"/trees/{tree_id}/cuts", json={"location": loc})
            n_after = client.get(f"/trees/{tree_id}").json()["n_points"]

        app2 = create_app(PipelineConfig(), snapshot_dir=str(snapshot_dir))
        with TestClient(app2) as client2:
            info = client2.get(f"/trees/{tree_id}").json()
            assert info["history_length"] == 1
            assert info["n_points"] == n_after
