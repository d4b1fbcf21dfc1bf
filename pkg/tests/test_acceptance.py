"""End-to-end acceptance checks.

One test per numbered criterion; each prints a single
"ACCEPTANCE <n>: PASS/FAIL" line (visible with -s or on failure) and
asserts the stated tolerance. Criteria 1-3 are oracle-equivalence
checks, 4-6 are dimension-recovery properties on synthetic manifolds,
7-8 are pipeline contracts, 9 is CLI determinism.
"""

import json
import math

import numpy as np
import pytest
from scipy.sparse.csgraph import minimum_spanning_tree

from conftest import write_manifest, write_npy
from topoprobe.classical import corr_dim, mle_id, two_nn
from topoprobe.cli import main
from topoprobe.cloud import PointCloud, pairwise_distances
from topoprobe.descriptors import lifespan_sum
from topoprobe.persistence import AUTO, brute_force_persistence, mst_h0, vr_persistence
from topoprobe.phdim import PhDimConfig, estimate_phdim
from topoprobe.trajectory import gengap_correlate, layer_trajectory, load_manifest, pearson


def _report(num, ok, detail):
    line = f"ACCEPTANCE {num}: {'PASS' if ok else 'FAIL'} - {detail}"
    print(line)
    assert ok, line


def _multiset(barcode):
    return sorted((iv.degree, iv.birth, iv.death) for iv in barcode.intervals)


def test_criterion_1_persistence_matches_brute_force_oracle():
    # 200 random clouds, n <= 10, d <= 4; interval multisets equal to 1e-9
    rng = np.random.default_rng(2024)
    mismatches = 0
    for _ in range(200):
        n = int(rng.integers(2, 11))
        d = int(rng.integers(1, 5))
        dist = pairwise_distances(PointCloud(rng.random((n, d))))
        fast = _multiset(vr_persistence(dist, 1, AUTO))
        oracle = _multiset(brute_force_persistence(dist, 1))
        if len(fast) != len(oracle):
            mismatches += 1
            continue
        for a, b in zip(fast, oracle):
            same_deg = a[0] == b[0]
            births = abs(a[1] - b[1]) <= 1e-9
            deaths = (a[2] == b[2]) or abs(a[2] - b[2]) <= 1e-9
            if not (same_deg and births and deaths):
                mismatches += 1
                break
    _report(1, mismatches == 0, f"{200 - mismatches}/200 clouds match the oracle")


def test_criterion_2_mst_identity():
    # E_1^0 equals an independently computed MST total length, 1e-9 relative
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(2, 501))
        d = int(rng.integers(1, 17))
        dist = pairwise_distances(PointCloud(rng.random((n, d))))
        ours = lifespan_sum(mst_h0(dist), 0, 1.0).value
        ref = float(minimum_spanning_tree(dist.entries).sum())
        if ref > 0:
            worst = max(worst, abs(ours - ref) / ref)
    _report(2, worst <= 1e-9, f"max relative MST-length deviation {worst:.2e}")


def test_criterion_3_unit_square_barcode(unit_square):
    dist = pairwise_distances(unit_square)
    bc = vr_persistence(dist, 1, AUTO)
    h0_deaths = sorted(iv.death for iv in bc.finite_of_degree(0))
    h1 = bc.of_degree(1)
    e0 = lifespan_sum(bc, 0, 1.0).value
    e1 = lifespan_sum(bc, 1, 1.0).value
    ok = (
        len(h0_deaths) == 3
        and all(abs(dth - 1.0) <= 1e-9 for dth in h0_deaths)
        and len(h1) == 1
        and abs(h1[0].birth - 1.0) <= 1e-9
        and abs(h1[0].death - math.sqrt(2.0)) <= 1e-9
        and abs(e0 - 3.0) <= 1e-9
        and abs(e1 - (math.sqrt(2.0) - 1.0)) <= 1e-9
    )
    _report(3, ok, f"H0 deaths {h0_deaths}, H1 ({h1[0].birth:.6f}, {h1[0].death:.6f}), "
                   f"E_1^0 {e0:.12f}, E_1^1 {e1:.12f}")


def test_criterion_4_phdim_recovery():
    # seed-0 default-config estimates on four synthetic manifolds; the
    # flat-growth 1-d cases cannot satisfy the r^2 gate (see ledger note
    # on the saturation of degree-0 lifespan sums on curves)
    th = np.linspace(0.0, 2.0 * np.pi, 1000, endpoint=False)
    cases = [
        ("plane", np.random.default_rng(0).random((2000, 2)), (1.75, 2.25)),
        ("cube", np.random.default_rng(0).random((2000, 3)), (2.5, 3.5)),
        ("circle", np.column_stack([np.cos(th), np.sin(th)]), (0.85, 1.20)),
        ("segment", np.column_stack([np.linspace(0.0, 1.0, 1000), np.zeros(1000)]),
         (0.85, 1.20)),
    ]
    failures = []
    details = []
    for name, pts, (lo, hi) in cases:
        est = estimate_phdim(
            PointCloud(np.ascontiguousarray(pts, dtype=np.float64)),
            PhDimConfig(seed=0),
        )
        details.append(f"{name}: phdim={est.phdim:.3f} r2={est.r_squared:.3f}")
        if not lo <= est.phdim <= hi:
            failures.append(f"{name} phdim {est.phdim:.3f} outside [{lo}, {hi}]")
        if est.r_squared < 0.95:
            failures.append(f"{name} r_squared {est.r_squared:.3f} < 0.95")
    _report(4, not failures, "; ".join(details + failures))


def test_criterion_5_scale_and_rotation_invariance():
    pts = np.random.default_rng(0).random((1500, 3))
    cfg = PhDimConfig(seed=0)
    base = estimate_phdim(PointCloud(pts), cfg).phdim
    deviations = []
    for s in (0.1, 10.0):
        v = estimate_phdim(PointCloud(np.ascontiguousarray(pts * s)), cfg).phdim
        deviations.append(abs(v - base))
    q, _ = np.linalg.qr(np.random.default_rng(123).standard_normal((3, 3)))
    v = estimate_phdim(PointCloud(np.ascontiguousarray(pts @ q)), cfg).phdim
    deviations.append(abs(v - base))
    worst = max(deviations)
    _report(5, worst < 1e-6, f"max phdim deviation under scaling/rotation {worst:.2e}")


def test_criterion_6_classical_estimators_recover_dimension():
    failures = []
    details = []
    for d in (1, 2, 3):
        cloud = PointCloud(np.random.default_rng(d).random((1000, d)))
        for fn in (two_nn, mle_id, corr_dim):
            value = fn(cloud).value
            details.append(f"{fn.__name__}(d={d})={value:.2f}")
            if abs(value - d) / d > 0.35:
                failures.append(f"{fn.__name__} at d={d}: {value:.3f}")
    _report(6, not failures, "; ".join(details + failures))


def test_criterion_7_correlation_contract(tmp_path):
    # exact (anti)linear lists
    x = [1.0, 2.0, 3.0, 4.0]
    r_pos = pearson(x, [2 * v + 1 for v in x]).r
    r_neg = pearson(x, [-3 * v + 2 for v in x]).r
    # five models whose last-layer lifespan sum strictly decreases while
    # test accuracy strictly increases
    base = np.random.default_rng(11).random((60, 2))
    pairs = []
    for i, scale in enumerate((5.0, 4.0, 3.0, 2.0, 1.0)):
        d = tmp_path / f"model{i}"
        d.mkdir()
        write_npy(d / "c.npy", base * scale)
        mp = write_manifest(
            d / "m.json",
            [{"layer_index": 1, "epoch": 1, "class_label": "c", "path": "c.npy"}],
            model_name=f"model{i}",
        )
        report = layer_trajectory(load_manifest(mp), batch_size=60, n_batches=1)
        pairs.append((report, (0.60, 0.70, 0.80, 0.90, 0.95)[i]))
    r_gap = gengap_correlate(pairs).r
    ok = abs(r_pos - 1.0) <= 1e-12 and abs(r_neg + 1.0) <= 1e-12 and r_gap <= -0.99
    _report(7, ok, f"pearson linear {r_pos}, anti-linear {r_neg}, "
                   f"5-model generalization-gap r {r_gap:.5f}")


def test_criterion_8_decreasing_dimension_trajectory(tmp_path):
    # layers drawn from cubes of intrinsic dimension 8 -> 4 -> 2
    rng = np.random.default_rng(0)
    entries = []
    for layer, d in ((1, 8), (2, 4), (3, 2)):
        write_npy(tmp_path / f"layer{layer}.npy", rng.random((800, d)))
        entries.append({"layer_index": layer, "epoch": 1, "path": f"layer{layer}.npy"})
    mp = write_manifest(tmp_path / "m.json", entries, model_name="synthetic")
    report = layer_trajectory(
        load_manifest(mp), batch_size=300, n_batches=5, measures=("phdim",), seed=0
    )
    means = [(r.layer_index, r.mean) for r in report.series]
    decreasing = all(a[1] > b[1] for a, b in zip(means, means[1:]))
    _report(8, decreasing, "phdim means " + ", ".join(f"L{l}={m:.3f}" for l, m in means))


def test_criterion_9_cli_determinism(tmp_path, capsys):
    rng = np.random.default_rng(5)
    cloud = write_npy(tmp_path / "cloud.npy", rng.random((150, 2)))
    write_npy(tmp_path / "emb.npy", rng.random((40, 2)))
    manifest = write_manifest(
        tmp_path / "m.json",
        [{"layer_index": 1, "epoch": 1, "class_label": "c", "path": "emb.npy"}],
        accuracies=[{"epoch": 1, "train_accuracy": 0.9, "test_accuracy": 0.8}],
    )
    base2 = np.random.default_rng(6).random((30, 2))
    model_manifests = []
    for i, scale in enumerate((3.0, 2.0, 1.0)):
        d = tmp_path / f"model{i}"
        d.mkdir()
        write_npy(d / "c.npy", base2 * scale)
        model_manifests.append(
            str(
                write_manifest(
                    d / "m.json",
                    [{"layer_index": 1, "epoch": 1, "class_label": "c", "path": "c.npy"}],
                    model_name=f"model{i}",
                    accuracies=[
                        {"epoch": 1, "train_accuracy": 0.95, "test_accuracy": 0.7 + 0.1 * i}
                    ],
                )
            )
        )
    commands = {
        "persist": ["persist", "--input", str(cloud)],
        "descriptor": ["descriptor", "--input", str(cloud), "--degree", "1"],
        "phdim": ["phdim", "--input", str(cloud), "--sizes", "32,64,128"],
        "id": ["id", "--input", str(cloud)],
        "trajectory": [
            "trajectory", "--manifest", str(manifest),
            "--batch-size", "20", "--n-batches", "2",
        ],
        "correlate": [
            "correlate", "--manifests", *model_manifests,
            "--batch-size", "30", "--n-batches", "1",
        ],
    }
    unstable = []
    for name, argv in commands.items():
        out = tmp_path / f"{name}.json"
        blobs = []
        for threads in ("1", "1", "2"):
            code = main(argv + ["--threads", threads, "--output", str(out)])
            capsys.readouterr()
            if code != 0:
                unstable.append(f"{name} exit {code}")
                break
            blobs.append(out.read_bytes())
        if len(blobs) == 3 and not (blobs[0] == blobs[1] == blobs[2]):
            unstable.append(name)
    _report(9, not unstable,
            "all six commands byte-identical across reruns and thread counts"
            if not unstable else "unstable: " + ", ".join(unstable))
