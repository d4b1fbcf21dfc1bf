"""Built-in demo architectures and checkpoint loading.

A model is addressed either by a registry identifier or by a path to a
torch checkpoint holding ``{"arch": <identifier>, "state_dict": ...}``.
Registry models are miniature networks whose weights are a fixed
function of the identifier (a deterministic seed), standing in for
pretrained checkpoints in tests and demos.

Every architecture declares a ``family`` ("cnn" or "transformer") and
exposes ``blocks``: the ordered structural blocks whose outputs the
exporter taps.
"""

from __future__ import annotations

from pathlib import Path

import torch
from torch import nn

from .errors import ModelLoadError


class TinyCnn(nn.Module):
    """Three stride-2 conv blocks (conv, batchnorm, relu) over 3x16x16 images.

    Block widths are 8, 16, 32; each block's final activation is the
    tap point.
    """

    family = "cnn"
    input_shape = (3, 16, 16)

    def __init__(self):
        super().__init__()
        blocks = []
        c_in = 3
        for c_out in (8, 16, 32):
            blocks.append(
                nn.Sequential(
                    nn.Conv2d(c_in, c_out, kernel_size=3, stride=2, padding=1),
                    nn.BatchNorm2d(c_out),
                    nn.ReLU(),
                )
            )
            c_in = c_out
        self.blocks = nn.ModuleList(blocks)

    def forward(self, x):
        for block in self.blocks:
            x = block(x)
        return x


class TinyTransformer(nn.Module):
    """Two-block encoder over fixed-length token-id sequences.

    Tap points are the encoder block outputs, shape (batch, tokens, 16).
    """

    family = "transformer"
    vocab_size = 32
    d_model = 16

    def __init__(self):
        super().__init__()
        self.embed = nn.Embedding(self.vocab_size, self.d_model)
        layer = nn.TransformerEncoderLayer(
            d_model=self.d_model,
            nhead=4,
            dim_feedforward=32,
            dropout=0.0,
            batch_first=True,
        )
        self.encoder = nn.TransformerEncoder(layer, num_layers=2)

    @property
    def blocks(self):
        return self.encoder.layers

    def forward(self, x):
        return self.encoder(self.embed(x))


_REGISTRY = {
    "tiny_cnn": (TinyCnn, 20240),
    "tiny_transformer": (TinyTransformer, 20241),
}


def build_model(identifier: str) -> nn.Module:
    """Construct a registry model in evaluation mode with its fixed weights."""
    try:
        cls, seed = _REGISTRY[identifier]
    except KeyError:
        raise ModelLoadError(
            f"unknown model identifier {identifier!r}; known: {sorted(_REGISTRY)}"
        ) from None
    torch.manual_seed(seed)
    model = cls()
    model.eval()
    return model


def load_model(model: str | Path) -> tuple[nn.Module, str]:
    """Resolve an identifier or checkpoint path to (eval-mode module, name).

    The name is the registry identifier, or the checkpoint file's stem
    so that manifests from different checkpoints stay distinguishable.
    """
    model = str(model)
    if model in _REGISTRY:
        return build_model(model), model
    path = Path(model)
    if not path.exists():
        raise ModelLoadError(
            f"{model!r} is neither a known model identifier nor an existing file"
        )
    try:
        payload = torch.load(path, map_location="cpu", weights_only=True)
    except Exception as exc:
        raise ModelLoadError(f"{path}: cannot read checkpoint: {exc}") from exc
    if (
        not isinstance(payload, dict)
        or "arch" not in payload
        or "state_dict" not in payload
    ):
        raise ModelLoadError(
            f"{path}: checkpoint must be a dict with 'arch' and 'state_dict'"
        )
    net = build_model(str(payload["arch"]))
    try:
        net.load_state_dict(payload["state_dict"])
    except Exception as exc:
        raise ModelLoadError(
            f"{path}: state_dict does not fit arch {payload['arch']!r}: {exc}"
        ) from exc
    net.eval()
    return net, path.stem
