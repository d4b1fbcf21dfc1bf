"""Export per-layer neural-network embeddings to point-cloud files.

Runs a trained model in evaluation mode over labeled samples, taps the
output of every structural block through forward hooks, vectorizes
each output to one row per sample (spatial average for feature maps,
first token for sequences), and writes NPY files plus a manifest JSON
that downstream point-cloud tooling consumes directly.
"""

from .adapters import VECTORIZATIONS, adapter_for
from .errors import (
    DatasetError,
    ExporterError,
    IncompatibleVectorization,
    InsufficientSamples,
    ModelLoadError,
)
from .export import LAYER_TAPS, ExportSpec, export_layers
from .models import build_model, load_model

__version__ = "0.1.0"

__all__ = [
    "DatasetError",
    "ExporterError",
    "ExportSpec",
    "IncompatibleVectorization",
    "InsufficientSamples",
    "LAYER_TAPS",
    "ModelLoadError",
    "VECTORIZATIONS",
    "adapter_for",
    "build_model",
    "export_layers",
    "load_model",
    "__version__",
]
