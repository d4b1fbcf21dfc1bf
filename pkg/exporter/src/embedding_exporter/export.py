"""Per-layer embedding export.

`export_layers` runs one evaluation-mode forward pass per class over
the first samples_per_class samples of that class (sorted filename
order, no augmentation), records every structural-block output through
forward hooks, vectorizes each output to one row per sample, and
writes one NPY file per (block, class) next to a manifest JSON that
indexes them all.

The dataset directory holds one subdirectory per class label, each
containing one .npy array per sample. All writes go through a
temporary file and os.replace, so an interrupted run cannot leave a
half-written file, and re-running with the same inputs reproduces
identical bytes.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch

from .adapters import VECTORIZATIONS, adapter_for
from .errors import DatasetError, InsufficientSamples, ModelLoadError
from .models import load_model

LAYER_TAPS = ("block_outputs",)


@dataclass(frozen=True)
class ExportSpec:
    """Everything one export run needs.

    model : registry identifier or checkpoint path
    dataset_dir : directory with one subdirectory of .npy samples per class
    classes : class labels to export (subdirectory names)
    output_dir : where embedding files and the manifest land
    """

    model: str
    dataset_dir: str | Path
    classes: tuple[str, ...]
    output_dir: str | Path
    samples_per_class: int = 300
    layer_tap: str = "block_outputs"
    vectorization: str = "global_average_pool"
    epoch: int = 1

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(str(c) for c in self.classes))
        if self.layer_tap not in LAYER_TAPS:
            raise ValueError(f"layer_tap must be one of {LAYER_TAPS}, got {self.layer_tap!r}")
        if self.vectorization not in VECTORIZATIONS:
            raise ValueError(
                f"vectorization must be one of {VECTORIZATIONS}, got {self.vectorization!r}"
            )
        if self.samples_per_class < 1:
            raise ValueError(f"samples_per_class must be >= 1, got {self.samples_per_class}")
        if self.epoch < 0:
            raise ValueError(f"epoch must be >= 0, got {self.epoch}")
        if not self.classes:
            raise ValueError("classes must be nonempty")
        if len(set(self.classes)) != len(self.classes):
            raise ValueError(f"duplicate class labels in {self.classes}")
        for c in self.classes:
            if not c or "/" in c or "\\" in c or c in (".", ".."):
                raise ValueError(f"class label {c!r} is not a safe directory name")


def _class_samples(dataset_dir: Path, label: str, k: int) -> list[np.ndarray]:
    """First k samples of a class in sorted filename order, shape-checked."""
    class_dir = dataset_dir / label
    if not class_dir.is_dir():
        raise DatasetError(f"{class_dir}: class directory does not exist")
    files = sorted(p for p in class_dir.iterdir() if p.suffix == ".npy")
    if len(files) < k:
        raise InsufficientSamples(
            f"class {label!r} has {len(files)} samples, need {k}"
        )
    arrays = []
    shape = None
    for p in files[:k]:
        try:
            a = np.load(p)
        except Exception as exc:
            raise DatasetError(f"{p}: cannot read sample: {exc}") from exc
        if shape is None:
            shape = a.shape
        elif a.shape != shape:
            raise DatasetError(
                f"{p}: sample shape {a.shape} differs from {shape} seen earlier"
            )
        arrays.append(a)
    return arrays


def _atomic_write(path: Path, write) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            write(fh)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _capture(store: dict, index: int):
    def hook(module, args, output):
        store[index] = output.detach()

    return hook


def export_layers(spec: ExportSpec) -> Path:
    """Run the export and return the manifest path.

    Writes layer{L}_epoch{E}_class{C}.npy per (block, class), all rows
    float64 of shape (samples_per_class, layer_width), plus
    manifest.json in output_dir. Layer indices count blocks from 1 in
    forward order.
    """
    model, model_name = load_model(spec.model)
    adapter = adapter_for(model, spec.vectorization)
    blocks = adapter.blocks()
    if not blocks:
        raise ModelLoadError(f"{model_name}: model exposes no structural blocks")

    dataset_dir = Path(spec.dataset_dir)
    if not dataset_dir.is_dir():
        raise DatasetError(f"{dataset_dir}: dataset directory does not exist")
    # validate every class up front so a failure cannot leave partial output
    batches = {
        label: _class_samples(dataset_dir, label, spec.samples_per_class)
        for label in spec.classes
    }

    out_dir = Path(spec.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    entries = []
    for label in spec.classes:
        batch = adapter.prepare_batch(batches[label])
        captured: dict[int, torch.Tensor] = {}
        hooks = [
            block.register_forward_hook(_capture(captured, i))
            for i, block in enumerate(blocks)
        ]
        try:
            with torch.no_grad():
                model(batch)
        finally:
            for h in hooks:
                h.remove()
        if len(captured) != len(blocks):
            raise ModelLoadError(
                f"{model_name}: forward pass reached {len(captured)} of "
                f"{len(blocks)} blocks"
            )
        for i in range(len(blocks)):
            rows = adapter.vectorize(captured[i]).numpy().astype(np.float64)
            name = f"layer{i + 1}_epoch{spec.epoch}_class{label}.npy"
            _atomic_write(out_dir / name, lambda fh, a=rows: np.save(fh, a))
            entries.append(
                {
                    "layer_index": i + 1,
                    "epoch": spec.epoch,
                    "class_label": label,
                    "path": name,
                }
            )

    entries.sort(key=lambda e: (e["layer_index"], e["epoch"], e["class_label"]))
    doc = {"manifest_version": 1, "model_name": model_name, "entries": entries}
    text = json.dumps(doc, indent=2) + "\n"
    manifest_path = out_dir / "manifest.json"
    _atomic_write(manifest_path, lambda fh: fh.write(text.encode("utf-8")))
    return manifest_path
