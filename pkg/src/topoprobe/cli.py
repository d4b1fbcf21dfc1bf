"""Command-line front end.

Six subcommands (persist, descriptor, phdim, id, trajectory, correlate)
wire the library into reproducible runs. Every output embeds the fully
resolved run configuration, so a result file is self-describing. Exit
status: 0 success, 1 validation error, 2 computation error. Runtime
errors are printed to stderr as a single-line JSON object.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .classical import corr_dim, mle_id, two_nn
from .cloud import load_point_cloud, pairwise_distances
from .descriptors import lifespan_sum
from .errors import InputError, TopoprobeError
from .persistence import AUTO, mst_h0, vr_persistence
from .phdim import PhDimConfig, estimate_phdim
from .trajectory import gengap_correlate, layer_trajectory, load_manifest

_CSV_COMMANDS = {"persist", "trajectory"}  # commands with a tabular shape


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad flags; this CLI reserves 2
    for computation errors, so parse failures are remapped to 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _threshold_arg(text: str):
    if text.lower() == "auto":
        return AUTO
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number or 'auto', got {text!r}")


def _int_list_arg(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(",") if tok.strip() != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _str_list_arg(text: str) -> tuple[str, ...]:
    return tuple(tok.strip() for tok in text.split(",") if tok.strip() != "")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="topoprobe", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    common.add_argument("--output", type=str, default=None, help="output file (default stdout)")
    common.add_argument(
        "--format", choices=("json", "csv"), default="json", help="output format"
    )
    common.add_argument(
        "--threads",
        type=int,
        default=None,
        help="worker threads; 0 = auto; falls back to TOPOPROBE_THREADS, then 1",
    )

    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("persist", parents=[common], help="Vietoris-Rips barcode of a cloud")
    p.add_argument("--input", required=True, help="point-cloud file (.npy or .csv)")
    p.add_argument("--max-degree", type=int, choices=(0, 1), default=1)
    p.add_argument("--threshold", type=_threshold_arg, default=AUTO)

    p = sub.add_parser("descriptor", parents=[common], help="power-weighted lifespan sum")
    p.add_argument("--input", required=True)
    p.add_argument("--degree", type=int, choices=(0, 1), default=0)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--threshold", type=_threshold_arg, default=AUTO)

    p = sub.add_parser("phdim", parents=[common], help="persistent-homology fractal dimension")
    p.add_argument("--input", required=True)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--degree", type=int, choices=(0, 1), default=0)
    p.add_argument("--sizes", type=_int_list_arg, default=None, help="comma-separated sample sizes")
    p.add_argument("--repeats", type=int, default=5)

    p = sub.add_parser("id", parents=[common], help="classical intrinsic-dimension estimate")
    p.add_argument("--input", required=True)
    p.add_argument("--method", choices=("two_nn", "mle", "corr_dim"), default="two_nn")
    p.add_argument("--k", type=int, default=20, help="neighbor count for mle")
    p.add_argument("--discard-fraction", type=float, default=0.1, help="two_nn tail discard")
    p.add_argument("--n-radii", type=int, default=32, help="corr_dim radius-grid size")

    p = sub.add_parser("trajectory", parents=[common], help="measures across layers and epochs")
    p.add_argument("--manifest", required=True, help="embedding manifest JSON")
    p.add_argument("--batch-size", type=int, default=300)
    p.add_argument("--n-batches", type=int, default=5)
    p.add_argument(
        "--measures",
        type=_str_list_arg,
        default=("E_alpha_0",),
        help="comma-separated subset of E_alpha_0,E_alpha_1,phdim",
    )
    p.add_argument("--alpha", type=float, default=1.0)

    p = sub.add_parser(
        "correlate", parents=[common], help="last-layer measure vs test accuracy across models"
    )
    p.add_argument("--manifests", nargs="+", required=True, help="one manifest per model")
    p.add_argument("--measure", default="E_alpha_0")
    p.add_argument("--batch-size", type=int, default=300)
    p.add_argument("--n-batches", type=int, default=5)
    p.add_argument("--alpha", type=float, default=1.0)

    return parser


def _resolve_threads(value: int | None) -> int:
    if value is None:
        env = os.environ.get("TOPOPROBE_THREADS", "").strip()
        if env == "":
            return 1
        try:
            value = int(env)
        except ValueError:
            raise InputError(f"TOPOPROBE_THREADS={env!r} is not an integer")
    if value == 0:
        return os.cpu_count() or 1
    if value < 0:
        raise InputError(f"--threads must be >= 0, got {value}")
    return value


def _threshold_echo(threshold) -> object:
    return "auto" if threshold == AUTO else threshold


def _run_persist(args) -> tuple[dict, dict, list]:
    config = {
        "command": "persist",
        "input": args.input,
        "max_degree": args.max_degree,
        "threshold": _threshold_echo(args.threshold),
        "seed": args.seed,
        "output": args.output,
        "format": args.format,
    }
    dist = pairwise_distances(load_point_cloud(args.input))
    bc = vr_persistence(dist, args.max_degree, args.threshold)
    return config, bc.to_json_obj(), bc.to_csv_rows()


def _run_descriptor(args) -> tuple[dict, dict, list]:
    config = {
        "command": "descriptor",
        "input": args.input,
        "degree": args.degree,
        "alpha": args.alpha,
        "threshold": _threshold_echo(args.threshold),
        "seed": args.seed,
        "output": args.output,
        "format": args.format,
    }
    dist = pairwise_distances(load_point_cloud(args.input))
    if args.degree == 0 and args.threshold == AUTO:
        bc = mst_h0(dist)
    else:
        bc = vr_persistence(dist, args.degree, args.threshold)
    value = lifespan_sum(bc, args.degree, args.alpha)
    return config, value.to_json_obj(), []


def _run_phdim(args) -> tuple[dict, dict, list]:
    cloud = load_point_cloud(args.input)
    cfg = PhDimConfig(
        alpha=args.alpha,
        degree=args.degree,
        sample_sizes=args.sizes,
        repeats=args.repeats,
        seed=args.seed,
    )
    config = {
        "command": "phdim",
        "input": args.input,
        "alpha": args.alpha,
        "degree": args.degree,
        "sample_sizes": list(cfg.resolve_sizes(cloud.n)),
        "repeats": args.repeats,
        "seed": args.seed,
        "output": args.output,
        "format": args.format,
    }
    est = estimate_phdim(cloud, cfg, threads=args.threads)
    return config, est.to_json_obj(), []


def _run_id(args) -> tuple[dict, dict, list]:
    config = {
        "command": "id",
        "input": args.input,
        "method": args.method,
        "k": args.k,
        "discard_fraction": args.discard_fraction,
        "n_radii": args.n_radii,
        "seed": args.seed,
        "output": args.output,
        "format": args.format,
    }
    cloud = load_point_cloud(args.input)
    if args.method == "two_nn":
        est = two_nn(cloud, discard_fraction=args.discard_fraction)
    elif args.method == "mle":
        est = mle_id(cloud, k=args.k)
    else:
        est = corr_dim(cloud, n_radii=args.n_radii)
    return config, est.to_json_obj(), []


def _run_trajectory(args) -> tuple[dict, dict, list]:
    config = {
        "command": "trajectory",
        "manifest": args.manifest,
        "batch_size": args.batch_size,
        "n_batches": args.n_batches,
        "measures": list(args.measures),
        "alpha": args.alpha,
        "seed": args.seed,
        "output": args.output,
        "format": args.format,
    }
    manifest = load_manifest(args.manifest)
    report = layer_trajectory(
        manifest,
        batch_size=args.batch_size,
        n_batches=args.n_batches,
        measures=args.measures,
        seed=args.seed,
        alpha=args.alpha,
        threads=args.threads,
    )
    config["model_name"] = manifest.model_name
    payload = {"series": report.to_json_obj()["series"]}
    return config, payload, report.to_csv_rows()


def _run_correlate(args) -> tuple[dict, dict, list]:
    config = {
        "command": "correlate",
        "manifests": list(args.manifests),
        "measure": args.measure,
        "batch_size": args.batch_size,
        "n_batches": args.n_batches,
        "alpha": args.alpha,
        "seed": args.seed,
        "output": args.output,
        "format": args.format,
    }
    pairs = []
    for path in args.manifests:
        manifest = load_manifest(path)
        report = layer_trajectory(
            manifest,
            batch_size=args.batch_size,
            n_batches=args.n_batches,
            measures=(args.measure,),
            seed=args.seed,
            alpha=args.alpha,
            threads=args.threads,
        )
        rows = [r for r in report.series if r.measure == args.measure]
        last_layer = max(r.layer_index for r in rows)
        last_epoch = max(r.epoch for r in rows if r.layer_index == last_layer)
        pairs.append((report, manifest.test_accuracy_at(last_epoch)))
    result = gengap_correlate(pairs, measure=args.measure)
    return config, result.to_json_obj(), []


_RUNNERS = {
    "persist": _run_persist,
    "descriptor": _run_descriptor,
    "phdim": _run_phdim,
    "id": _run_id,
    "trajectory": _run_trajectory,
    "correlate": _run_correlate,
}


def _serialize(config: dict, payload: dict, csv_rows: list, fmt: str) -> str:
    if fmt == "json":
        return json.dumps({"config": config, **payload}, indent=2) + "\n"
    # CSV keeps the echo block as a single comment line above the header
    head = "# config: " + json.dumps(config, separators=(",", ":"))
    body = "\n".join(",".join(row) for row in csv_rows)
    return head + "\n" + body + "\n"


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        out = Path(output)
        if out.parent != Path(""):
            out.parent.mkdir(parents=True, exist_ok=True)
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse handled --help/--version/errors
        return int(exc.code or 0)

    try:
        if args.format == "csv" and args.command not in _CSV_COMMANDS:
            raise InputError(f"csv output is not available for {args.command!r}")
        args.threads = _resolve_threads(args.threads)
        config, payload, csv_rows = _RUNNERS[args.command](args)
        text = _serialize(config, payload, csv_rows, args.format)
        _emit(text, args.output)
    except TopoprobeError as exc:
        line = json.dumps({"error": type(exc).__name__, "message": str(exc)})
        print(line, file=sys.stderr)
        return 1 if isinstance(exc, InputError) else 2
    except OSError as exc:
        line = json.dumps({"error": type(exc).__name__, "message": str(exc)})
        print(line, file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
