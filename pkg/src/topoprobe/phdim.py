"""Persistent-homological fractal dimension.

The lifespan sum of a random n-point subsample grows as a power of n
whose exponent encodes the dimension of the support: if the growth
slope of log(expected sum) versus log(n) is beta, the dimension
estimate is alpha / (1 - beta). We estimate the expectation by
averaging repeated subsamples per size and fit the slope by ordinary
least squares in log10-log10 coordinates.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._seeds import derive_seed
from .cloud import PointCloud, pairwise_distances, subsample
from .descriptors import lifespan_sum
from .errors import DegenerateFit, NonPositiveValue, SampleTooLarge, SlopeAtLeastOne
from .persistence import AUTO, mst_h0, vr_persistence

_SLOPE_GUARD = 1e-9


def default_sample_sizes(n: int, n_sizes: int = 9, largest: int = 1024) -> list[int]:
    """Geometric grid of subsample sizes, capped at the cloud size.

    Nine sizes from 64 up to min(n, 1024) keeps the largest persistence
    call tractable while spanning more than a decade of n.
    """
    hi = min(n, largest)
    lo = 64 if hi >= 128 else max(2, hi // 2)
    sizes = np.unique(np.rint(np.geomspace(lo, hi, n_sizes)).astype(int))
    return [int(s) for s in sizes if s >= 2]


@dataclass(frozen=True)
class PhDimConfig:
    """Sampling and fitting parameters for a dimension estimate."""

    alpha: float = 1.0
    degree: int = 0
    sample_sizes: tuple[int, ...] | None = None
    repeats: int = 5
    seed: int = 0

    def resolve_sizes(self, n: int) -> tuple[int, ...]:
        sizes = self.sample_sizes
        if sizes is None:
            sizes = tuple(default_sample_sizes(n))
        sizes = tuple(int(s) for s in sizes)
        if len(set(sizes)) < 3:
            raise DegenerateFit(f"need at least 3 distinct sample sizes, got {sizes}")
        if any(s < 2 for s in sizes):
            raise DegenerateFit(f"sample sizes must be >= 2, got {sizes}")
        if max(sizes) > n:
            raise SampleTooLarge(f"sample size {max(sizes)} exceeds cloud size {n}")
        if list(sizes) != sorted(set(sizes)):
            sizes = tuple(sorted(set(sizes)))
        return sizes


@dataclass(frozen=True)
class PhDimEstimate:
    """Fitted growth slope and the dimension it implies."""

    beta: float
    phdim: float
    r_squared: float
    points: tuple[tuple[int, float], ...]
    alpha: float
    degree: int

    def to_json_obj(self) -> dict:
        return {
            "beta": self.beta,
            "phdim": self.phdim,
            "r_squared": self.r_squared,
            "alpha": self.alpha,
            "degree": self.degree,
            "points": [{"n": n, "mean_lifespan_sum": v} for n, v in self.points],
        }

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_json_obj(), indent=indent)


def fit_power_law(points: list[tuple[int, float]]) -> tuple[float, float, float]:
    """OLS fit of log10(value) on log10(count).

    Returns (slope, intercept, r_squared). A perfectly constant series
    fits exactly with slope 0, so its r_squared is reported as 1.
    """
    if len(points) < 3:
        raise DegenerateFit(f"need at least 3 points, got {len(points)}")
    counts = np.array([p[0] for p in points], dtype=np.float64)
    values = np.array([p[1] for p in points], dtype=np.float64)
    if np.any(values <= 0):
        raise NonPositiveValue("all values must be positive for a log-log fit")
    if np.unique(counts).size < 2:
        raise DegenerateFit("all counts are equal; slope is undefined")
    x = np.log10(counts)
    y = np.log10(values)
    xm, ym = x.mean(), y.mean()
    sxx = float(np.sum((x - xm) ** 2))
    sxy = float(np.sum((x - xm) * (y - ym)))
    slope = sxy / sxx
    intercept = ym - slope * xm
    ss_res = float(np.sum((y - (slope * x + intercept)) ** 2))
    ss_tot = float(np.sum((y - ym) ** 2))
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return slope, intercept, r_squared


def _one_lifespan_sum(cloud: PointCloud, m: int, seed: int, alpha: float, degree: int) -> float:
    sub = subsample(cloud, m, seed)
    dist = pairwise_distances(sub)
    if degree == 0:
        barcode = mst_h0(dist)
    else:
        barcode = vr_persistence(dist, max_degree=1, threshold=AUTO)
    return lifespan_sum(barcode, degree=degree, alpha=alpha).value


def estimate_phdim(
    cloud: PointCloud,
    config: PhDimConfig | None = None,
    threads: int = 1,
) -> PhDimEstimate:
    """Estimate the fractal dimension of the cloud's support.

    For each configured size, draws `repeats` subsamples with seeds
    derived from (config.seed, size index, repeat index), measures the
    lifespan sum of each, and fits the growth law to the per-size means.
    Deterministic for a fixed (cloud, config) regardless of `threads`.
    """
    if config is None:
        config = PhDimConfig()
    sizes = config.resolve_sizes(cloud.n)

    tasks = [
        (j, r, size, derive_seed(config.seed, j, r))
        for j, size in enumerate(sizes)
        for r in range(config.repeats)
    ]

    def run(task):
        _, _, size, seed = task
        return _one_lifespan_sum(cloud, size, seed, config.alpha, config.degree)

    if threads == 1:
        results = [run(t) for t in tasks]
    else:
        workers = threads if threads > 0 else None
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, tasks))  # map preserves task order

    values = np.array(results, dtype=np.float64).reshape(len(sizes), config.repeats)
    means = values.mean(axis=1)
    pts = [(int(s), float(m)) for s, m in zip(sizes, means)]

    beta, _, r_squared = fit_power_law(pts)
    if beta >= 1.0 - _SLOPE_GUARD:
        raise SlopeAtLeastOne(
            f"growth slope {beta:.6f} >= 1; dimension alpha/(1-beta) is undefined"
        )
    return PhDimEstimate(
        beta=float(beta),
        phdim=float(config.alpha / (1.0 - beta)),
        r_squared=float(r_squared),
        points=tuple(pts),
        alpha=config.alpha,
        degree=config.degree,
    )
