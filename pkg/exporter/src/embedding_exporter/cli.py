"""Command-line export: flags mirror the ExportSpec fields.

On success the manifest path is printed to stdout and the exit status
is 0. Failures print a single JSON line {"error", "message"} to stderr
and exit 1.
"""

from __future__ import annotations

import argparse
import json
import sys

from .adapters import VECTORIZATIONS
from .errors import ExporterError
from .export import LAYER_TAPS, ExportSpec, export_layers


def _class_list(text: str) -> list[str]:
    return [part for part in text.split(",") if part]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="embedding-exporter",
        description="Export per-layer model embeddings to NPY files plus a manifest",
    )
    p.add_argument("--model", required=True, help="registry identifier or checkpoint path")
    p.add_argument("--dataset-dir", required=True, help="one subdirectory of .npy samples per class")
    p.add_argument("--classes", required=True, type=_class_list, help="comma-separated class labels")
    p.add_argument("--samples-per-class", type=int, default=300)
    p.add_argument("--layer-tap", choices=LAYER_TAPS, default="block_outputs")
    p.add_argument("--vectorization", choices=VECTORIZATIONS, default="global_average_pool")
    p.add_argument("--epoch", type=int, default=1, help="epoch tag written into file names and manifest")
    p.add_argument("--output-dir", required=True)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = ExportSpec(
            model=args.model,
            dataset_dir=args.dataset_dir,
            classes=tuple(args.classes),
            output_dir=args.output_dir,
            samples_per_class=args.samples_per_class,
            layer_tap=args.layer_tap,
            vectorization=args.vectorization,
            epoch=args.epoch,
        )
        manifest = export_layers(spec)
    except (ExporterError, ValueError) as exc:
        line = json.dumps({"error": type(exc).__name__, "message": str(exc)})
        print(line, file=sys.stderr)
        return 1
    print(manifest)
    return 0


if __name__ == "__main__":
    sys.exit(main())
