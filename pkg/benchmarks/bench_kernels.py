"""Timing comparison of the compiled and pure-Python persistence kernels.

Runs the degree-0 merge scan and the degree-1 pair reduction on uniform
clouds of growing size and prints both backends side by side. The
pure-Python reduction is set arithmetic over whole columns, so expect
it to fall behind by orders of magnitude as n grows; sizes above the
--python-cap are skipped for it.

Usage: python3 benchmarks/bench_kernels.py [--sizes 100,200,400] [--repeats 3]
"""

import argparse
import time

import numpy as np

from topoprobe import _core_py
from topoprobe.cloud import PointCloud, pairwise_distances
from topoprobe.persistence import _sorted_edges, enclosing_radius

try:
    from topoprobe import _core
except ImportError:
    _core = None


def _best_of(repeats, fn):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_size(n, d, repeats, python_cap):
    pts = np.random.default_rng(0).random((n, d))
    dm = pairwise_distances(PointCloud(pts))
    thr = enclosing_radius(dm)
    w, ei, ej = _sorted_edges(dm, thr)
    rows = []
    for name, impl in (("compiled", _core), ("python", _core_py)):
        if impl is None:
            rows.append((name, None, None, None))
            continue
        if name == "python" and n > python_cap:
            rows.append((name, None, None, "skipped"))
            continue
        flags = impl.kruskal_merge_flags(ei, ej, n)
        t_mst = _best_of(repeats, lambda: impl.kruskal_merge_flags(ei, ej, n))
        t_h1 = _best_of(
            repeats, lambda: impl.h1_pairs(dm.entries, thr, w, ei, ej, flags, n)
        )
        pairs = len(impl.h1_pairs(dm.entries, thr, w, ei, ej, flags, n)[0])
        rows.append((name, t_mst, t_h1, pairs))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="100,200,400,800",
                    help="comma-separated cloud sizes")
    ap.add_argument("--dim", type=int, default=3, help="ambient dimension")
    ap.add_argument("--repeats", type=int, default=3, help="best-of repeats")
    ap.add_argument("--python-cap", type=int, default=400,
                    help="largest n the pure-Python kernel is timed at")
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    print(f"{'n':>6} {'backend':>9} {'mst (s)':>10} {'h1 (s)':>10} {'h1 pairs':>9}")
    for n in sizes:
        for name, t_mst, t_h1, pairs in bench_size(
            n, args.dim, args.repeats, args.python_cap
        ):
            if t_mst is None:
                note = pairs if isinstance(pairs, str) else "unavailable"
                print(f"{n:>6} {name:>9} {note:>10} {note:>10} {'-':>9}")
            else:
                print(f"{n:>6} {name:>9} {t_mst:>10.4f} {t_h1:>10.4f} {pairs:>9}")


if __name__ == "__main__":
    main()
