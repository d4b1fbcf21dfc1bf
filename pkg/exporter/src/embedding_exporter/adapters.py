"""Model-family adapters: batch preparation and vectorization.

The tap policy is block outputs: a forward hook on each structural
block records what the block emits for the whole batch. Vectorization
turns one block output into one row per sample. Feature maps
(n, channels, h, w) are averaged over the spatial grid; token
sequences (n, tokens, width) keep the first token. Each family admits
exactly one of the two, and the pairing is checked before any
inference runs.
"""

from __future__ import annotations

import numpy as np
import torch

from .errors import DatasetError, IncompatibleVectorization, ModelLoadError

VECTORIZATIONS = ("global_average_pool", "first_token")


class _Adapter:
    family = ""
    vectorization = ""

    def __init__(self, model):
        self.model = model

    def blocks(self) -> list:
        return list(self.model.blocks)


class CnnAdapter(_Adapter):
    """Convolutional models: image batches in, spatially pooled rows out."""

    family = "cnn"
    vectorization = "global_average_pool"

    def prepare_batch(self, arrays: list[np.ndarray]) -> torch.Tensor:
        batch = torch.from_numpy(np.stack(arrays).astype(np.float32, copy=False))
        if batch.dim() != 4:
            raise DatasetError(
                "cnn samples must be (channels, height, width) arrays, "
                f"got batch shape {tuple(batch.shape)}"
            )
        return batch

    def vectorize(self, out: torch.Tensor) -> torch.Tensor:
        if out.dim() != 4:
            raise IncompatibleVectorization(
                f"global_average_pool needs feature maps (n, c, h, w), "
                f"got block output {tuple(out.shape)}"
            )
        return out.mean(dim=(2, 3))


class TransformerAdapter(_Adapter):
    """Token-sequence models: id batches in, first-token rows out."""

    family = "transformer"
    vectorization = "first_token"

    def prepare_batch(self, arrays: list[np.ndarray]) -> torch.Tensor:
        batch = torch.from_numpy(np.stack(arrays).astype(np.int64, copy=False))
        if batch.dim() != 2:
            raise DatasetError(
                "transformer samples must be 1-d token-id arrays, "
                f"got batch shape {tuple(batch.shape)}"
            )
        vocab = getattr(self.model, "vocab_size", None)
        if vocab is not None and (batch.min() < 0 or batch.max() >= vocab):
            raise DatasetError(
                f"token ids must lie in [0, {vocab}), got range "
                f"[{int(batch.min())}, {int(batch.max())}]"
            )
        return batch

    def vectorize(self, out: torch.Tensor) -> torch.Tensor:
        if out.dim() != 3:
            raise IncompatibleVectorization(
                f"first_token needs token sequences (n, t, d), "
                f"got block output {tuple(out.shape)}"
            )
        return out[:, 0, :]


_FAMILIES = {a.family: a for a in (CnnAdapter, TransformerAdapter)}


def adapter_for(model, vectorization: str) -> _Adapter:
    """Pick the adapter for the model's family, enforcing compatibility."""
    family = getattr(model, "family", None)
    cls = _FAMILIES.get(family)
    if cls is None:
        raise ModelLoadError(
            f"model declares unsupported family {family!r}; "
            f"known: {sorted(_FAMILIES)}"
        )
    if vectorization != cls.vectorization:
        raise IncompatibleVectorization(
            f"{vectorization!r} does not apply to a {family} model; "
            f"use {cls.vectorization!r}"
        )
    return cls(model)
