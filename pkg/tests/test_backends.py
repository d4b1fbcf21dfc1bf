"""The compiled and pure-Python kernels must be interchangeable.

The two implementations reduce the filtration differently (factored
columns with a lazy heap versus plain set arithmetic), so agreement
here is a real cross-check, not a tautology.
"""

import subprocess
import sys

import numpy as np
import pytest

from topoprobe import _backend, _core_py
from topoprobe.cloud import PointCloud, pairwise_distances
from topoprobe.persistence import _sorted_edges, enclosing_radius

compiled = pytest.importorskip("topoprobe._core")


def _edge_data(pts):
    dm = pairwise_distances(PointCloud(np.ascontiguousarray(pts, dtype=np.float64)))
    thr = enclosing_radius(dm)
    w, ei, ej = _sorted_edges(dm, thr)
    return dm.entries, thr, w, ei, ej


def test_backend_is_compiled_by_default():
    assert _backend.BACKEND == "compiled"


def test_kruskal_flags_agree():
    rng = np.random.default_rng(0)
    for _ in range(25):
        n = int(rng.integers(2, 200))
        dist, thr, w, ei, ej = _edge_data(rng.random((n, int(rng.integers(1, 6)))))
        fc = compiled.kruskal_merge_flags(ei, ej, n)
        fp = _core_py.kruskal_merge_flags(ei, ej, n)
        assert np.array_equal(fc, fp)
        assert int(fc.sum()) == n - 1


def test_h1_pairs_agree():
    rng = np.random.default_rng(1)
    for trial in range(30):
        n = int(rng.integers(3, 90))
        d = int(rng.integers(2, 5))
        pts = rng.random((n, d))
        if trial % 4 == 0:
            pts = np.round(pts * 8) / 8.0  # exercise tied distances
        dist, thr, w, ei, ej = _edge_data(pts)
        flags = compiled.kruskal_merge_flags(ei, ej, n)
        ec, dc = compiled.h1_pairs(dist, thr, w, ei, ej, flags, n)
        ep, dp = _core_py.h1_pairs(dist, thr, w, ei, ej, flags, n)
        assert np.array_equal(np.asarray(ec), np.asarray(ep)), trial
        assert np.array_equal(np.asarray(dc), np.asarray(dp)), trial


def test_h1_pairs_empty_inputs():
    dist, thr, w, ei, ej = _edge_data(np.array([[0.0], [5.0]]))
    flags = compiled.kruskal_merge_flags(ei, ej, 2)
    for impl in (compiled, _core_py):
        e, d = impl.h1_pairs(dist, thr, w, ei, ej, flags, 2)
        assert len(e) == 0 and len(d) == 0


def test_python_backend_env_override():
    code = (
        "import topoprobe; import sys; "
        "sys.exit(0 if topoprobe.BACKEND == 'python' else 1)"
    )
    proc = subprocess.run(
        [sys.executable, "-c", code],
        env={"TOPOPROBE_BACKEND": "python", "PATH": "/usr/bin:/bin"},
        capture_output=True,
    )
    assert proc.returncode == 0, proc.stderr


def test_full_pipeline_matches_under_python_backend(tmp_path):
    # the same CLI invocation must print identical bytes on both backends
    import os

    np.save(tmp_path / "c.npy", np.random.default_rng(2).random((60, 3)))
    argv = [
        sys.executable, "-m", "topoprobe", "persist",
        "--input", str(tmp_path / "c.npy"),
    ]
    base_env = dict(os.environ)
    fast = subprocess.run(argv, capture_output=True, env=base_env)
    slow_env = dict(base_env, TOPOPROBE_BACKEND="python")
    slow = subprocess.run(argv, capture_output=True, env=slow_env)
    assert fast.returncode == slow.returncode == 0
    assert fast.stdout == slow.stdout
