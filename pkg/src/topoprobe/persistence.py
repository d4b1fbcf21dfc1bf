"""Vietoris-Rips persistent homology in degrees 0 and 1.

Three routes, one contract:

* ``mst_h0``: degree 0 only, via a union-find scan over sorted edges
  (degree-0 deaths are exactly the minimum-spanning-tree edge weights).
* ``vr_persistence``: degrees 0 and 1; degree 1 by GF(2) column
  reduction of the edge/triangle boundary matrix, columns ordered by
  (diameter, lexicographic vertex tuple).
* ``brute_force_persistence``: naive full-complex enumeration and
  unoptimized reduction for n <= 12; the testing ground truth.

Conventions shared by all three: coefficients are integers mod 2,
zero-length intervals (death == birth) are discarded, infinite
intervals are kept in barcodes but never enter descriptor sums.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

import numpy as np

from . import _backend
from .cloud import DistanceMatrix
from .errors import BadThreshold, MalformedFile, TooLarge, UnsupportedDegree

INFINITE = math.inf

#: Sentinel for "pick the enclosing radius as the filtration cap".
AUTO = "auto"

_BRUTE_FORCE_MAX_POINTS = 12


@dataclass(frozen=True)
class PersistenceInterval:
    """One homological feature: born at `birth`, dead at `death` (possibly INFINITE)."""

    birth: float
    death: float
    degree: int

    def __post_init__(self):
        if self.degree not in (0, 1):
            raise UnsupportedDegree(f"degree must be 0 or 1, got {self.degree}")
        if math.isfinite(self.death) and self.death < self.birth:
            raise MalformedFile(f"death {self.death} precedes birth {self.birth}")

    @property
    def lifespan(self) -> float:
        return self.death - self.birth

    @property
    def is_finite(self) -> bool:
        return math.isfinite(self.death)


@dataclass(frozen=True)
class Barcode:
    """All intervals of a filtration, plus the parameters that produced them."""

    intervals: tuple[PersistenceInterval, ...]
    n_points: int
    max_degree: int
    threshold: float

    def of_degree(self, degree: int) -> tuple[PersistenceInterval, ...]:
        return tuple(iv for iv in self.intervals if iv.degree == degree)

    def finite_of_degree(self, degree: int) -> tuple[PersistenceInterval, ...]:
        return tuple(iv for iv in self.intervals if iv.degree == degree and iv.is_finite)

    def to_json_obj(self) -> dict:
        return {
            "n_points": self.n_points,
            "max_degree": self.max_degree,
            "threshold": "inf" if math.isinf(self.threshold) else self.threshold,
            "intervals": [
                {
                    "birth": iv.birth,
                    "death": iv.death if iv.is_finite else "inf",
                    "degree": iv.degree,
                }
                for iv in self.intervals
            ],
        }

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_json_obj(), indent=indent)

    def to_csv_rows(self) -> list[tuple[str, str, str]]:
        rows = [("birth", "death", "degree")]
        for iv in self.intervals:
            death = repr(iv.death) if iv.is_finite else "inf"
            rows.append((repr(iv.birth), death, str(iv.degree)))
        return rows


def _sorted_intervals(intervals: Iterable[PersistenceInterval]) -> tuple[PersistenceInterval, ...]:
    # canonical order: by degree, then birth, then death with infinities last
    return tuple(
        sorted(
            intervals,
            key=lambda iv: (iv.degree, iv.birth, not iv.is_finite, iv.death),
        )
    )


def enclosing_radius(dist: DistanceMatrix) -> float:
    """min over points of the max distance to any other point.

    Past this radius every simplex gains a common apex, the complex
    becomes a cone, and no finite degree >= 1 feature survives, so it is
    the cheapest cap that loses nothing.
    """
    if dist.n == 1:
        return 0.0
    return float(np.min(np.max(dist.entries, axis=1)))


def _sorted_edges(dist: DistanceMatrix, threshold: float):
    """Edges with weight <= threshold in (weight, i, j) order."""
    n = dist.n
    ii, jj = np.triu_indices(n, k=1)
    w = dist.entries[ii, jj]
    if math.isfinite(threshold):
        keep = w <= threshold
        ii, jj, w = ii[keep], jj[keep], w[keep]
    order = np.lexsort((jj, ii, w))
    return (
        w[order].astype(np.float64),
        ii[order].astype(np.int32),
        jj[order].astype(np.int32),
    )


def _h0_intervals(w, flags, n: int) -> list[PersistenceInterval]:
    deaths = w[flags == 1]
    out = [PersistenceInterval(0.0, float(d), 0) for d in deaths if d > 0.0]
    n_infinite = n - int(flags.sum())
    out.extend(PersistenceInterval(0.0, INFINITE, 0) for _ in range(n_infinite))
    return out


def mst_h0(dist: DistanceMatrix) -> Barcode:
    """Degree-0 barcode of the full Vietoris-Rips filtration.

    All n components are born at 0; the n-1 finite deaths are the MST
    edge weights (merge events of the union-find scan); one component
    never dies.
    """
    n = dist.n
    if n == 1:
        return Barcode(
            intervals=(PersistenceInterval(0.0, INFINITE, 0),),
            n_points=1,
            max_degree=0,
            threshold=INFINITE,
        )
    w, ei, ej = _sorted_edges(dist, INFINITE)
    flags = _backend.kruskal_merge_flags(ei, ej, n)
    return Barcode(
        intervals=_sorted_intervals(_h0_intervals(w, flags, n)),
        n_points=n,
        max_degree=0,
        threshold=INFINITE,
    )


def vr_persistence(
    dist: DistanceMatrix,
    max_degree: int,
    threshold: float | str = AUTO,
) -> Barcode:
    """Barcode of the VR filtration capped at `threshold`.

    Parameters
    ----------
    dist : distance matrix of the cloud.
    max_degree : 0 or 1.
    threshold : positive filtration cap, or AUTO for the enclosing
        radius. Features still alive at the cap are reported infinite.
    """
    if max_degree not in (0, 1):
        raise UnsupportedDegree(f"max_degree must be 0 or 1, got {max_degree}")
    if threshold == AUTO:
        thr = enclosing_radius(dist)
    else:
        thr = float(threshold)
        if not thr > 0.0:
            raise BadThreshold(f"threshold must be positive or AUTO, got {threshold}")

    n = dist.n
    if n == 1:
        return Barcode(
            intervals=(PersistenceInterval(0.0, INFINITE, 0),),
            n_points=1,
            max_degree=max_degree,
            threshold=thr,
        )

    w, ei, ej = _sorted_edges(dist, thr)
    flags = _backend.kruskal_merge_flags(ei, ej, n)
    intervals = _h0_intervals(w, flags, n)

    if max_degree == 1:
        n_edges = len(w)
        piv, deaths = _backend.h1_pairs(dist.entries, thr, w, ei, ej, flags, n)
        paired = np.zeros(n_edges, dtype=bool)
        if len(piv):
            paired[piv] = True
            births = w[piv]
            for b, d in zip(births, deaths):
                if d > b:
                    intervals.append(PersistenceInterval(float(b), float(d), 1))
        # positive edges never killed by a triangle: essential cycles at this cap
        essential = (flags == 0) & ~paired
        for b in w[essential]:
            intervals.append(PersistenceInterval(float(b), INFINITE, 1))

    return Barcode(
        intervals=_sorted_intervals(intervals),
        n_points=n,
        max_degree=max_degree,
        threshold=thr,
    )


def brute_force_persistence(dist: DistanceMatrix, max_degree: int) -> Barcode:
    """Ground-truth barcode by full-complex enumeration, for n <= 12.

    Enumerates every simplex up to dimension max_degree + 1 with the cap
    at the maximum pairwise distance, sorts by (diameter, dimension,
    vertex tuple), and runs the textbook column reduction over GF(2).
    Deliberately unoptimized and structurally independent of the fast
    kernels.
    """
    if max_degree not in (0, 1):
        raise UnsupportedDegree(f"max_degree must be 0 or 1, got {max_degree}")
    n = dist.n
    if n > _BRUTE_FORCE_MAX_POINTS:
        raise TooLarge(f"brute force is capped at {_BRUTE_FORCE_MAX_POINTS} points, got {n}")

    d = dist.entries
    simplices: list[tuple[float, tuple[int, ...]]] = []
    for v in range(n):
        simplices.append((0.0, (v,)))
    for dim in range(1, max_degree + 2):
        for verts in combinations(range(n), dim + 1):
            diam = max(d[a, b] for a, b in combinations(verts, 2))
            simplices.append((float(diam), verts))
    simplices.sort(key=lambda s: (s[0], len(s[1]), s[1]))

    index_of = {verts: i for i, (_, verts) in enumerate(simplices)}
    columns: list[set[int]] = []
    for _, verts in simplices:
        if len(verts) == 1:
            columns.append(set())
        else:
            columns.append(
                {index_of[face] for face in combinations(verts, len(verts) - 1)}
            )

    low_owner: dict[int, int] = {}
    pairs: list[tuple[int, int]] = []
    positive: set[int] = set()
    for j, col in enumerate(columns):
        while col:
            piv = max(col)
            if piv not in low_owner:
                low_owner[piv] = j
                pairs.append((piv, j))
                break
            col ^= columns[low_owner[piv]]
        if not col:
            positive.add(j)

    killed = {i for i, _ in pairs}
    intervals: list[PersistenceInterval] = []
    for i, j in pairs:
        birth, bverts = simplices[i]
        death, _ = simplices[j]
        degree = len(bverts) - 1
        if degree <= max_degree and death > birth:
            intervals.append(PersistenceInterval(birth, death, degree))
    for j in positive:
        if j not in killed:
            birth, bverts = simplices[j]
            degree = len(bverts) - 1
            if degree <= max_degree:
                intervals.append(PersistenceInterval(birth, INFINITE, degree))

    return Barcode(
        intervals=_sorted_intervals(intervals),
        n_points=n,
        max_degree=max_degree,
        threshold=float(d.max()) if n > 1 else 0.0,
    )
