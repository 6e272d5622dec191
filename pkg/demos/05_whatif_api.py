"""Drive the interactive what-if HTTP API in-process.

The same service behind ``treeprune serve`` handles upload, light-field
queries, non-mutating cut previews, and accept/undo with full replay
semantics - here exercised through the ASGI test client so no port is
needed.

Run from the repository root:  python3 demos/05_whatif_api.py
"""

from fastapi.testclient import TestClient

from treeprune import PipelineConfig, SynthParams, sample_tree_cloud
from treeprune.cloud import format_csv_row
from treeprune.service import create_app

app = create_app(PipelineConfig())
client = TestClient(app)

cloud = sample_tree_cloud(SynthParams(seed=11), angular_resolution=0.5)
body = "\n".join(
    format_csv_row(*cloud.xyz[i], label=cloud.labels[i]) for i in range(len(cloud))
)
tree = client.post("/trees", content=body, headers={"content-type": "text/csv"}).json()
print(f"uploaded: {tree}")
tid = tree["id"]

field = client.get(f"/trees/{tid}/lightfield").json()
print(f"light field: {field['voxel_count']} voxels, "
      f"max p = {max(v['p'] for v in field['voxels'])}")

# Pick a bright-ish upper voxel as the pending cut, exactly as the UI does.
voxels = sorted(field["voxels"], key=lambda v: v["centroid"][2])
pending = voxels[int(0.9 * len(voxels))]["centroid"]
print(f"\npreviewing cut at {[round(c, 2) for c in pending]} ...")
preview = client.post(f"/trees/{tid}/simulate", json={"location": pending}).json()
print(f"  would remove {preview['removed_count']} points; "
      f"D {preview['changes']['D_change_pct']:+.2f}%, "
      f"S {preview['changes']['S_change_pct']:+.2f}%")
print(f"  history unchanged: {client.get(f'/trees/{tid}').json()['history_length']} cuts")

print("\naccepting the cut ...")
accepted = client.post(f"/trees/{tid}/cuts", json={"location": pending}).json()
print(f"  now {accepted['n_points']} points, history {accepted['history_length']}")

print("undoing ...")
undone = client.delete(f"/trees/{tid}/cuts/last").json()
print(f"  back to {undone['n_points']} points, history {undone['history_length']}")

suggestions = client.get(f"/trees/{tid}/suggestions", params={"k": 2}).json()
print("\nserver-side suggestions:")
for label, changes in suggestions["changes"].items():
    print(f"  {label:>4}: D {changes['D_change_pct']:+7.2f}%  "
          f"S {changes['S_change_pct']:+7.2f}%")
