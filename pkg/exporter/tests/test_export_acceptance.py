"""End-to-end gate: exported files feed the point-cloud toolkit unmodified."""

import json
import subprocess
import sys

import numpy as np
import pytest

pytest.importorskip("torch")
pytest.importorskip("embedding_exporter")
topoprobe = pytest.importorskip("topoprobe")

from embedding_exporter import ExportSpec, export_layers

from dsgen import make_image_dataset


def _report(num: int, ok: bool, detail: str):
    print(f"ACCEPTANCE {num}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, detail


def test_criterion_10_exporter_contract(tmp_path):
    # small fixed-weight CNN, 2 classes x 50 samples
    data = make_image_dataset(tmp_path / "data", ("0", "1"), 60, seed=42)
    spec = ExportSpec(
        model="tiny_cnn",
        dataset_dir=data,
        classes=("0", "1"),
        samples_per_class=50,
        vectorization="global_average_pool",
        epoch=1,
        output_dir=tmp_path / "run",
    )
    manifest_path = export_layers(spec)

    widths = {1: 8, 2: 16, 3: 32}
    manifest = topoprobe.load_manifest(manifest_path)
    assert len(manifest.entries) == 6
    shape_ok = True
    for e in manifest.entries:
        cloud = topoprobe.load_point_cloud(e.path)
        shape_ok &= cloud.points.shape == (50, widths[e.layer_index])

    cmd = [
        sys.executable, "-m", "topoprobe", "trajectory",
        "--manifest", str(manifest_path),
        "--batch-size", "50", "--n-batches", "1",
        "--measures", "E_alpha_0", "--seed", "0",
    ]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    cli_ok = proc.returncode == 0
    rows = json.loads(proc.stdout)["series"] if cli_ok else []
    rows_ok = (
        len(rows) == 3
        and all(r["n_batches"] == 2 for r in rows)
        and all(np.isfinite(r["mean"]) for r in rows)
    )
    _report(
        10,
        shape_ok and cli_ok and rows_ok,
        f"6 files of shapes (50, width); trajectory rc={proc.returncode}, "
        f"rows={[(r['layer_index'], round(r['mean'], 3)) for r in rows]}",
    )
