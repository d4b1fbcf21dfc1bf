"""Classical intrinsic-dimension estimators.

Three standard baselines for comparing against the persistence-based
estimate: the two-nearest-neighbor ratio method (Facco et al.), the
Levina-Bickel maximum-likelihood estimator, and the
Grassberger-Procaccia correlation dimension. All use exact brute-force
neighbor queries over the distance matrix; the clouds these run on are
a few thousand points at most.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cloud import PointCloud, pairwise_distances
from .errors import BadK, DegenerateDistances, DuplicatePoints, TooFew


@dataclass(frozen=True)
class IdEstimate:
    method: str
    value: float
    params: dict

    def to_json_obj(self) -> dict:
        return {"method": self.method, "value": self.value, "params": self.params}


def _sorted_neighbor_dists(cloud: PointCloud) -> np.ndarray:
    """(n, n-1) matrix: distances to the other points, ascending per row."""
    d = pairwise_distances(cloud).entries
    n = cloud.n
    panel = np.sort(d, axis=1)[:, 1:]  # drop the self distance
    return panel.reshape(n, n - 1)


def two_nn(cloud: PointCloud, discard_fraction: float = 0.1) -> IdEstimate:
    """Two-nearest-neighbor estimator.

    Per point, mu = r2/r1; the empirical CDF of mu follows
    F(mu) = 1 - mu^(-d), so d is the origin-constrained slope of
    -log(1 - F) against log(mu). The top `discard_fraction` of mu
    values (heavy-tail outliers) is dropped before fitting, and the
    F = 1 point is always dropped (it is singular and carries no
    information).
    """
    if cloud.n < 3:
        raise TooFew(f"two_nn needs n >= 3, got {cloud.n}")
    if not 0.0 <= discard_fraction < 0.5:
        raise BadK(f"discard_fraction must be in [0, 0.5), got {discard_fraction}")
    panel = _sorted_neighbor_dists(cloud)
    r1, r2 = panel[:, 0], panel[:, 1]
    if np.any(r1 == 0.0):
        raise DuplicatePoints("zero first-neighbor distance; deduplicate the cloud")
    mu = np.sort(r2 / r1)
    n = len(mu)
    f_emp = np.arange(1, n + 1) / n
    keep = min(int(np.floor(n * (1.0 - discard_fraction))), n - 1)
    keep = max(keep, 2)
    x = np.log(mu[:keep])
    y = -np.log(1.0 - f_emp[:keep])
    denom = float(np.dot(x, x))
    if denom == 0.0:
        raise DegenerateDistances("all neighbor ratios are 1; slope undefined")
    value = float(np.dot(x, y) / denom)
    return IdEstimate(
        method="two_nn", value=value, params={"discard_fraction": discard_fraction}
    )


def mle_id(cloud: PointCloud, k: int = 20) -> IdEstimate:
    """Levina-Bickel maximum-likelihood estimator with k neighbors.

    The per-point estimate is the reciprocal of the mean log distance
    ratio to the k-th neighbor; points are aggregated by inverting the
    mean of the inverses (the standard bias-corrected pooling).
    """
    if not 3 <= k < cloud.n:
        raise BadK(f"need 3 <= k < n, got k={k}, n={cloud.n}")
    panel = _sorted_neighbor_dists(cloud)[:, :k]
    if np.any(panel[:, 0] == 0.0):
        raise DuplicatePoints("zero nearest-neighbor distance; deduplicate the cloud")
    t_k = panel[:, -1][:, None]
    log_ratios = np.log(t_k / panel[:, : k - 1])
    inv_estimates = log_ratios.mean(axis=1)  # 1 / d_k(x)
    value = float(1.0 / inv_estimates.mean())
    return IdEstimate(method="mle", value=value, params={"k": k})


def corr_dim(cloud: PointCloud, n_radii: int = 32) -> IdEstimate:
    """Grassberger-Procaccia correlation dimension.

    The correlation integral C(r) counts pairs closer than r; its
    log-log slope against r in the scaling region is the dimension. The
    radius grid is log-spaced between the 1st and 99th percentiles of
    the pairwise distances, and the fit uses the central half of the
    grid (positions [m/4, 3m/4)) where C(r) > 0.
    """
    if cloud.n < 10:
        raise TooFew(f"corr_dim needs n >= 10, got {cloud.n}")
    if n_radii < 8:
        raise BadK(f"need n_radii >= 8, got {n_radii}")
    d = pairwise_distances(cloud).entries
    pair_d = d[np.triu_indices(cloud.n, k=1)]
    lo, hi = np.percentile(pair_d, [1.0, 99.0])
    if not hi > lo or lo <= 0.0:
        raise DegenerateDistances(
            "pairwise distances do not span a positive radius range"
        )
    radii = np.geomspace(lo, hi, n_radii)
    counts = np.array([(pair_d < r).sum() for r in radii], dtype=np.float64)
    c_r = 2.0 * counts / (cloud.n * (cloud.n - 1))

    start, stop = n_radii // 4, (3 * n_radii) // 4
    sel = slice(start, stop)
    mask = c_r[sel] > 0
    x = np.log(radii[sel][mask])
    y = np.log(c_r[sel][mask])
    if len(x) < 2:
        raise DegenerateDistances("fewer than 2 usable radii in the fit region")
    xm, ym = x.mean(), y.mean()
    sxx = float(np.sum((x - xm) ** 2))
    if sxx == 0.0:
        raise DegenerateDistances("degenerate radius grid")
    value = float(np.sum((x - xm) * (y - ym)) / sxx)
    return IdEstimate(
        method="corr_dim",
        value=value,
        params={"n_radii": n_radii, "radius_lo": float(lo), "radius_hi": float(hi)},
    )
