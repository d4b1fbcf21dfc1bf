"""Measurements across layers, epochs, and classes of exported embeddings.

The unit of work is a manifest: a JSON document listing embedding files
by (layer_index, epoch, class_label) plus optional per-epoch accuracies.
`layer_trajectory` subsamples fixed-size batches from each class cloud,
evaluates the requested measures per batch, and pools mean/std per
(layer, epoch). `pearson` and `gengap_correlate` relate last-layer
measurements to test accuracy across a collection of models.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._seeds import derive_seed
from .cloud import PointCloud, load_point_cloud, pairwise_distances, subsample
from .descriptors import lifespan_sum
from .errors import (
    BatchTooLarge,
    ConstantInput,
    LengthMismatch,
    MalformedFile,
    MissingFile,
    MissingMeasure,
    ShapeMismatch,
    TooFew,
    UnknownMeasure,
)
from .persistence import AUTO, mst_h0, vr_persistence
from .phdim import PhDimConfig, estimate_phdim

MEASURES = ("E_alpha_0", "E_alpha_1", "phdim")


@dataclass(frozen=True)
class ManifestEntry:
    layer_index: int
    epoch: int
    class_label: str | None
    path: Path


@dataclass(frozen=True)
class EpochAccuracy:
    epoch: int
    train_accuracy: float
    test_accuracy: float

    def __post_init__(self):
        for name in ("train_accuracy", "test_accuracy"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise MalformedFile(f"{name}={v} outside [0, 1]")


@dataclass(frozen=True)
class EmbeddingManifest:
    """Index of embedding files for one model.

    Invariants: (layer_index, epoch, class_label) triples are unique and
    layer_index values form a contiguous range starting at 1.
    """

    entries: tuple[ManifestEntry, ...]
    model_name: str
    accuracies: tuple[EpochAccuracy, ...] | None = None

    def __post_init__(self):
        if not self.entries:
            raise MalformedFile("manifest has no entries")
        keys = [(e.layer_index, e.epoch, e.class_label) for e in self.entries]
        if len(set(keys)) != len(keys):
            raise MalformedFile("duplicate (layer_index, epoch, class_label) entry")
        layers = sorted({e.layer_index for e in self.entries})
        if layers != list(range(1, len(layers) + 1)):
            raise MalformedFile(
                f"layer_index values {layers} are not contiguous from 1"
            )

    @property
    def max_layer(self) -> int:
        return max(e.layer_index for e in self.entries)

    def test_accuracy_at(self, epoch: int) -> float:
        for a in self.accuracies or ():
            if a.epoch == epoch:
                return a.test_accuracy
        raise MissingMeasure(
            f"manifest {self.model_name!r} has no test_accuracy for epoch {epoch}"
        )


def load_manifest(path: str | Path) -> EmbeddingManifest:
    """Parse and validate a manifest JSON file.

    Relative entry paths are resolved against the manifest's directory.
    Referenced files must exist.
    """
    p = Path(path)
    if not p.exists():
        raise MissingFile(f"{p}: manifest does not exist")
    try:
        doc = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise MalformedFile(f"{p}: invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedFile(f"{p}: manifest must be a JSON object")
    if doc.get("manifest_version") != 1:
        raise MalformedFile(
            f"{p}: manifest_version {doc.get('manifest_version')!r} not supported"
        )
    try:
        raw_entries = doc["entries"]
        model_name = doc["model_name"]
        entries = []
        for r in raw_entries:
            rel = Path(r["path"])
            entries.append(
                ManifestEntry(
                    layer_index=int(r["layer_index"]),
                    epoch=int(r["epoch"]),
                    class_label=(
                        None if r.get("class_label") is None else str(r["class_label"])
                    ),
                    path=rel if rel.is_absolute() else p.parent / rel,
                )
            )
        accuracies = None
        if doc.get("accuracies") is not None:
            accuracies = tuple(
                EpochAccuracy(
                    epoch=int(a["epoch"]),
                    train_accuracy=float(a["train_accuracy"]),
                    test_accuracy=float(a["test_accuracy"]),
                )
                for a in doc["accuracies"]
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedFile(f"{p}: bad manifest field: {exc}") from exc
    manifest = EmbeddingManifest(
        entries=tuple(entries), model_name=str(model_name), accuracies=accuracies
    )
    for e in manifest.entries:
        if not e.path.exists():
            raise MissingFile(f"{p}: referenced file {e.path} does not exist")
    return manifest


@dataclass(frozen=True)
class SeriesRow:
    layer_index: int
    epoch: int
    measure: str
    mean: float
    std: float
    n_batches: int  # pooled (class, batch) evaluations behind mean/std


@dataclass(frozen=True)
class TrajectoryReport:
    series: tuple[SeriesRow, ...]
    config: dict = field(compare=False)

    def value_at(self, layer_index: int, epoch: int, measure: str) -> float:
        for row in self.series:
            if (row.layer_index, row.epoch, row.measure) == (
                layer_index,
                epoch,
                measure,
            ):
                return row.mean
        raise MissingMeasure(
            f"no {measure} at layer {layer_index}, epoch {epoch} in report"
        )

    def to_json_obj(self) -> dict:
        return {
            "series": [
                {
                    "layer_index": r.layer_index,
                    "epoch": r.epoch,
                    "measure": r.measure,
                    "mean": r.mean,
                    "std": r.std,
                    "n_batches": r.n_batches,
                }
                for r in self.series
            ],
            "config": self.config,
        }

    def to_csv_rows(self) -> list[list[str]]:
        rows = [["layer", "epoch", "measure", "mean", "std", "n_batches"]]
        for r in self.series:
            rows.append(
                [
                    str(r.layer_index),
                    str(r.epoch),
                    r.measure,
                    repr(r.mean),
                    repr(r.std),
                    str(r.n_batches),
                ]
            )
        return rows


@dataclass(frozen=True)
class CorrelationResult:
    r: float
    n_pairs: int
    measure: str
    target: str

    def __post_init__(self):
        # clamp float excess so |r| <= 1 holds exactly
        object.__setattr__(self, "r", max(-1.0, min(1.0, self.r)))

    def to_json_obj(self) -> dict:
        return {
            "r": self.r,
            "n_pairs": self.n_pairs,
            "measure": self.measure,
            "target": self.target,
        }


def _check_measures(measures) -> tuple[str, ...]:
    ms = tuple(measures)
    for m in ms:
        if m not in MEASURES:
            raise UnknownMeasure(f"unknown measure {m!r}; choose from {MEASURES}")
    if not ms:
        raise UnknownMeasure("no measures requested")
    # fixed canonical order so reports are reproducible
    return tuple(m for m in MEASURES if m in ms)


def _measure_batch(batch: PointCloud, measure: str, alpha: float, seed: int) -> float:
    if measure == "E_alpha_0":
        return lifespan_sum(mst_h0(pairwise_distances(batch)), 0, alpha).value
    if measure == "E_alpha_1":
        bc = vr_persistence(pairwise_distances(batch), 1, AUTO)
        return lifespan_sum(bc, 1, alpha).value
    cfg = PhDimConfig(alpha=alpha, degree=0, seed=seed)
    return estimate_phdim(batch, cfg).phdim


def layer_trajectory(
    manifest: EmbeddingManifest,
    batch_size: int = 300,
    n_batches: int = 5,
    measures=("E_alpha_0",),
    seed: int = 0,
    alpha: float = 1.0,
    threads: int = 1,
) -> TrajectoryReport:
    """Pool measure statistics per (layer, epoch) over class/batch cells.

    For every manifest entry, `n_batches` subsamples of `batch_size`
    points are drawn with seeds derived from (seed, layer, epoch,
    class_label, batch index), so the report does not depend on entry
    order or thread schedule. Mean and standard deviation are pooled
    over all (class, batch) evaluations of a (layer, epoch) pair.
    """
    measures = _check_measures(measures)
    if batch_size < 1:
        raise BatchTooLarge(f"batch_size must be >= 1, got {batch_size}")
    if n_batches < 1:
        raise BatchTooLarge(f"n_batches must be >= 1, got {n_batches}")

    entries = sorted(
        manifest.entries,
        key=lambda e: (e.layer_index, e.epoch, e.class_label or ""),
    )
    clouds: dict[tuple[int, int], list[tuple[ManifestEntry, PointCloud]]] = {}
    for e in entries:
        if not e.path.exists():
            raise MissingFile(f"referenced file {e.path} does not exist")
        cloud = load_point_cloud(e.path)
        if cloud.n < batch_size:
            raise BatchTooLarge(
                f"{e.path}: {cloud.n} points < batch_size {batch_size}"
            )
        clouds.setdefault((e.layer_index, e.epoch), []).append((e, cloud))
    for (layer, epoch), group in clouds.items():
        dims = {c.d for _, c in group}
        if len(dims) != 1:
            raise ShapeMismatch(
                f"layer {layer}, epoch {epoch}: mixed embedding widths {sorted(dims)}"
            )

    # one task per (entry, batch, measure) cell, in deterministic order
    tasks = []
    for e, cloud in (pair for group in clouds.values() for pair in group):
        for b in range(n_batches):
            label = "" if e.class_label is None else e.class_label
            batch_seed = derive_seed(seed, e.layer_index, e.epoch, label, b)
            for m in measures:
                cell_seed = derive_seed(seed, e.layer_index, e.epoch, label, b, m)
                tasks.append((e, b, m, batch_seed, cell_seed, cloud))

    def run_cell(task):
        e, b, m, batch_seed, cell_seed, cloud = task
        batch = subsample(cloud, batch_size, batch_seed)
        return _measure_batch(batch, m, alpha, cell_seed)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(pool.map(run_cell, tasks))
    else:
        values = [run_cell(t) for t in tasks]

    pools: dict[tuple[int, int, str], list[float]] = {}
    for (e, b, m, _, _, _), v in zip(tasks, values):
        pools.setdefault((e.layer_index, e.epoch, m), []).append(v)

    rows = []
    for (layer, epoch, m) in sorted(pools, key=lambda k: (k[0], k[1], MEASURES.index(k[2]))):
        vals = np.asarray(pools[(layer, epoch, m)], dtype=np.float64)
        rows.append(
            SeriesRow(
                layer_index=layer,
                epoch=epoch,
                measure=m,
                mean=float(vals.mean()),
                std=float(vals.std()),
                n_batches=len(vals),
            )
        )
    config = {
        "model_name": manifest.model_name,
        "batch_size": batch_size,
        "n_batches": n_batches,
        "measures": list(measures),
        "alpha": alpha,
        "seed": seed,
    }
    return TrajectoryReport(series=tuple(rows), config=config)


def pearson(x, y, measure: str = "x", target: str = "y") -> CorrelationResult:
    """Pearson product-moment correlation of two equal-length lists.

    Requires length >= 3 and non-constant inputs.
    """
    xa = np.asarray(x, dtype=np.float64)
    ya = np.asarray(y, dtype=np.float64)
    if xa.shape != ya.shape:
        raise LengthMismatch(f"lengths {xa.shape} vs {ya.shape}")
    if xa.ndim != 1 or len(xa) < 3:
        raise TooFew(f"need at least 3 pairs, got {xa.shape}")
    dx = xa - xa.mean()
    dy = ya - ya.mean()
    sx = float(np.dot(dx, dx))
    sy = float(np.dot(dy, dy))
    if sx == 0.0 or sy == 0.0:
        raise ConstantInput("pearson is undefined for a constant input")
    r = float(np.dot(dx, dy) / math.sqrt(sx * sy))
    return CorrelationResult(r=r, n_pairs=len(xa), measure=measure, target=target)


def gengap_correlate(
    reports: list[tuple[TrajectoryReport, float]] | list[TrajectoryReport],
    measure: str = "E_alpha_0",
    accuracies: list[float] | None = None,
) -> CorrelationResult:
    """Correlate a last-layer measure with test accuracy across models.

    Accepts either (report, test_accuracy) pairs or parallel lists. For
    each model the measure is read at the maximum layer_index and the
    maximum epoch present there; the pairs then go through `pearson`.
    """
    if accuracies is not None:
        pairs = list(zip(reports, accuracies))
        if len(accuracies) != len(reports):
            raise LengthMismatch(
                f"{len(reports)} reports vs {len(accuracies)} accuracies"
            )
    else:
        pairs = list(reports)
    if len(pairs) < 3:
        raise TooFew(f"need at least 3 models, got {len(pairs)}")
    xs, ys = [], []
    for report, acc in pairs:
        candidates = [r for r in report.series if r.measure == measure]
        if not candidates:
            raise MissingMeasure(f"report has no {measure!r} rows")
        last_layer = max(r.layer_index for r in candidates)
        last_epoch = max(
            r.epoch for r in candidates if r.layer_index == last_layer
        )
        xs.append(report.value_at(last_layer, last_epoch, measure))
        ys.append(float(acc))
    return pearson(xs, ys, measure=measure, target="test_accuracy")
