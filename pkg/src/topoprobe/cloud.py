"""Point clouds on disk and in memory: loading, subsampling, distances.

A cloud is an (n, d) float64 matrix, one row per point. Supported file
formats are NPY (version 1.0, C-order, little-endian float32/float64)
and CSV (comma separated, one row per point, optional single header row
auto-detected by a non-numeric first row).
"""

from __future__ import annotations

import ast
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .errors import (
    EmptyCloud,
    MalformedFile,
    MissingFile,
    NonFiniteData,
    SampleTooLarge,
)

_NPY_MAGIC = b"\x93NUMPY"
_ALLOWED_DESCRS = {"<f4", "<f8"}


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class PointCloud:
    """An (n, d) matrix of sample coordinates, immutable once built.

    Parameters
    ----------
    points : array-like of shape (n, d)
        Row-per-point coordinates; widened to float64.
    source_label : str, optional
        Free-form tag recording where the cloud came from.
    """

    points: np.ndarray
    source_label: str | None = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2:
            raise MalformedFile(f"expected a 2-D array, got ndim={pts.ndim}")
        if pts.shape[0] == 0 or pts.shape[1] == 0:
            raise EmptyCloud(f"cloud has shape {pts.shape}")
        if not np.isfinite(pts).all():
            raise NonFiniteData("cloud contains NaN or Inf entries")
        object.__setattr__(self, "points", _freeze(np.ascontiguousarray(pts)))

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]


@dataclass(frozen=True)
class DistanceMatrix:
    """Symmetric (n, n) matrix of pairwise distances with a zero diagonal."""

    entries: np.ndarray
    metric: str = field(default="euclidean")

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise MalformedFile(f"distance matrix must be square, got {m.shape}")
        if m.shape[0] == 0:
            raise EmptyCloud("empty distance matrix")
        if not np.isfinite(m).all():
            raise NonFiniteData("distance matrix contains NaN or Inf")
        if not np.array_equal(m, m.T):
            raise MalformedFile("distance matrix is not symmetric")
        if np.any(np.diagonal(m) != 0.0):
            raise MalformedFile("distance matrix diagonal is not zero")
        if np.any(m < 0.0):
            raise MalformedFile("distance matrix has negative entries")
        object.__setattr__(self, "entries", _freeze(np.ascontiguousarray(m)))

    @property
    def n(self) -> int:
        return self.entries.shape[0]


def _read_npy_header(path: Path) -> tuple[tuple[int, ...], str, bool]:
    """Return (shape, descr, fortran_order), validating NPY version 1.0."""
    with open(path, "rb") as fh:
        magic = fh.read(6)
        if magic != _NPY_MAGIC:
            raise MalformedFile(f"{path}: not an NPY file")
        major, minor = fh.read(1), fh.read(1)
        if not major or not minor or (major[0], minor[0]) != (1, 0):
            got = (major[0] if major else None, minor[0] if minor else None)
            raise MalformedFile(f"{path}: unsupported NPY version {got}, need 1.0")
        hlen_bytes = fh.read(2)
        if len(hlen_bytes) != 2:
            raise MalformedFile(f"{path}: truncated NPY header")
        hlen = int.from_bytes(hlen_bytes, "little")
        header = fh.read(hlen).decode("latin1")
    try:
        meta = ast.literal_eval(header)
        shape = tuple(meta["shape"])
        descr = meta["descr"]
        fortran = bool(meta["fortran_order"])
    except (ValueError, SyntaxError, KeyError, TypeError) as exc:
        raise MalformedFile(f"{path}: bad NPY header: {exc}") from exc
    return shape, descr, fortran


def _load_npy(path: Path) -> np.ndarray:
    shape, descr, fortran = _read_npy_header(path)
    if fortran:
        raise MalformedFile(f"{path}: fortran-order NPY is not supported")
    if descr not in _ALLOWED_DESCRS:
        raise MalformedFile(
            f"{path}: dtype {descr!r} not supported (need little-endian float32/float64)"
        )
    if len(shape) != 2:
        raise MalformedFile(f"{path}: expected a 2-D array, got shape {shape}")
    return np.load(path)


def _load_csv(path: Path) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline()
    if first.strip() == "":
        raise EmptyCloud(f"{path}: empty file")

    def _is_numeric_row(line: str) -> bool:
        try:
            [float(tok) for tok in line.strip().split(",")]
            return True
        except ValueError:
            return False

    skip = 0 if _is_numeric_row(first) else 1
    try:
        data = np.loadtxt(path, delimiter=",", skiprows=skip, ndmin=2, dtype=np.float64)
    except ValueError as exc:
        raise MalformedFile(f"{path}: {exc}") from exc
    return data


def load_point_cloud(path: str | Path, format: str | None = None) -> PointCloud:
    """Load a point cloud from an NPY or CSV file.

    Parameters
    ----------
    path : path to the file.
    format : "npy" or "csv"; inferred from the suffix when omitted.

    Raises
    ------
    MissingFile, MalformedFile, NonFiniteData, EmptyCloud
    """
    p = Path(path)
    if not p.exists():
        raise MissingFile(f"{p}: file does not exist")
    if format is None:
        format = "csv" if p.suffix.lower() == ".csv" else "npy"
    if format == "npy":
        data = _load_npy(p)
    elif format == "csv":
        data = _load_csv(p)
    else:
        raise MalformedFile(f"unknown format {format!r}")
    return PointCloud(points=data, source_label=str(p))


def save_point_cloud(cloud: PointCloud, path: str | Path) -> Path:
    """Write a cloud as NPY version 1.0 (C-order float64). Round-trips bit-exactly."""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    np.save(p, np.ascontiguousarray(cloud.points, dtype=np.float64))
    return p if p.suffix == ".npy" else p.with_suffix(p.suffix + ".npy")


def subsample(cloud: PointCloud, m: int, seed: int) -> PointCloud:
    """Draw m distinct rows uniformly without replacement.

    Deterministic for a fixed (cloud, m, seed); m == n yields a
    row-permutation of the input.
    """
    if m < 1:
        raise SampleTooLarge(f"sample size must be >= 1, got {m}")
    if m > cloud.n:
        raise SampleTooLarge(f"cannot draw {m} points from a cloud of {cloud.n}")
    rng = np.random.Generator(np.random.PCG64(seed))
    idx = rng.choice(cloud.n, size=m, replace=False)
    return PointCloud(points=cloud.points[idx], source_label=cloud.source_label)


def pairwise_distances(cloud: PointCloud) -> DistanceMatrix:
    """Euclidean distance matrix of the cloud.

    The metric is fixed to Euclidean; the DistanceMatrix records it so a
    future metric hook has somewhere to live.
    """
    if cloud.n == 1:
        return DistanceMatrix(entries=np.zeros((1, 1)))
    m = squareform(pdist(cloud.points, metric="euclidean"))
    return DistanceMatrix(entries=m)
