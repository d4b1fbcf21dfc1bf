"""Pure-Python persistence kernels.

Fallback implementations of the two hot loops, used when the compiled
extension (topoprobe._core) is unavailable. Same contracts, same
outputs, an order of magnitude slower. See benchmarks/bench_kernels.py.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def kruskal_merge_flags(ei: np.ndarray, ej: np.ndarray, n: int) -> np.ndarray:
    """Union-find scan over edges already in filtration order.

    Returns a uint8 array flagging the edges that merged two components
    (the minimum-spanning-tree edges / degree-0 death events).
    """
    parent = list(range(n))

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:  # path compression
            parent[x], x = root, parent[x]
        return root

    flags = np.zeros(len(ei), dtype=np.uint8)
    merges = 0
    for k in range(len(ei)):
        ra, rb = find(int(ei[k])), find(int(ej[k]))
        if ra != rb:
            parent[ra] = rb
            flags[k] = 1
            merges += 1
            if merges == n - 1:
                break
    return flags


def h1_pairs(
    dist: np.ndarray,
    thr: float,
    w: np.ndarray,
    ei: np.ndarray,
    ej: np.ndarray,
    flags: np.ndarray,
    n: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Persistence pairs of degree 1 by coboundary-column reduction.

    One GF(2) column per edge, processed youngest first; the entries are
    the edge's cofacet triangles and the pivot is the cofacet earliest
    in (diameter, lexicographic vertex tuple) order. This anti-transposed
    reduction produces exactly the pairs of the plain triangle-column
    reduction (the brute-force oracle checks that) at a fraction of the
    column count. Edges flagged as degree-0 deaths reduce to zero by
    construction and are skipped.

    Parameters
    ----------
    dist : (n, n) float64 distance matrix.
    thr : filtration threshold; triangles with any edge beyond it do
        not exist.
    w, ei, ej : edge weights and endpoints in filtration order.
    flags : uint8 merge flags from kruskal_merge_flags.

    Returns
    -------
    (pivot_edges, deaths): paired creator-edge indices and the diameters
    of the triangles that killed them.
    """
    n_edges = len(w)
    if n_edges == 0 or n < 3:
        return (np.empty(0, dtype=np.int64), np.empty(0, dtype=np.float64))

    pivot_owner: dict[int, frozenset] = {}  # triangle code -> settled column
    pair_edges: list[int] = []
    pair_deaths: list[float] = []

    for k in range(n_edges - 1, -1, -1):
        if flags[k]:
            continue  # cleared: this edge is a degree-0 death
        a, b = int(ei[k]), int(ej[k])
        we = float(w[k])
        da, db = dist[a], dist[b]
        mask = (da <= thr) & (db <= thr)
        mask[a] = False
        mask[b] = False
        cs = np.nonzero(mask)[0]
        col: set = set()
        if len(cs):
            diam = np.maximum(we, np.maximum(da[cs], db[cs]))
            lo, hi = (a, b) if a < b else (b, a)
            t0 = np.minimum(cs, lo)
            t2 = np.maximum(cs, hi)
            t1 = lo + hi + cs - t0 - t2
            code = (t0 * n + t1) * n + t2
            col = set(zip(diam.tolist(), code.tolist()))
        while col:
            piv = min(col)  # earliest cofacet in filtration order
            owner = pivot_owner.get(piv[1])
            if owner is None:
                pivot_owner[piv[1]] = frozenset(col)
                pair_edges.append(k)
                pair_deaths.append(piv[0])
                break
            col ^= owner

    return (
        np.asarray(pair_edges, dtype=np.int64),
        np.asarray(pair_deaths, dtype=np.float64),
    )
