"""Command-line interface: build, validate, serve, and per-cluster label
reports."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import fields

from .clustering import SpectralConfig
from .layout import LayoutConfig
from .network import ConfigError
from .pipeline import MODES, PipelineConfig, PipelineStageError, run_pipeline
from .server import SnapshotValidationError, serve_snapshot
from .snapshot import load_snapshot, validate_snapshot, write_snapshot

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_IO = 2
EXIT_PIPELINE = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cocitemap",
        description="Time-sliced co-citation / term network analysis toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    build = sub.add_parser("build", help="run the full pipeline and write a snapshot")
    build.add_argument("--input", required=True, help="input corpus file")
    build.add_argument("--format", choices=("wos", "lines"), default="wos")
    build.add_argument("--from", dest="from_year", type=int, required=True)
    build.add_argument("--to", dest="to_year", type=int, required=True)
    build.add_argument("--slice-years", type=int, default=1)
    build.add_argument("--top-n", type=int, default=30, help="records or terms per selection")
    build.add_argument("--mode", choices=MODES, default="cocitation")
    build.add_argument("--k", default="auto", help="'auto' or a fixed cluster count")
    build.add_argument("--k-min", type=int, default=2)
    build.add_argument("--k-max", type=int, default=8)
    build.add_argument("--label-source", choices=("title", "index"), default="title")
    build.add_argument("--label-top-n", type=int, default=5)
    build.add_argument("--weight-mode", choices=("raw", "cosine"), default="raw")
    build.add_argument("--min-edge-count", type=int, default=1)
    build.add_argument("--beta", type=float, default=0.1, help="between-cluster layout factor")
    build.add_argument("--iterations", type=int, default=300, help="layout iterations")
    build.add_argument("--seed", type=int, default=0)
    build.add_argument("--config", help="JSON config file; flags override its values")
    build.add_argument("--out", required=True, help="snapshot output path")
    build.add_argument("--quiet", action="store_true")

    validate = sub.add_parser("validate", help="validate a snapshot file")
    validate.add_argument("path")

    serve = sub.add_parser("serve", help="serve a snapshot read-only over HTTP")
    serve.add_argument("path")
    serve.add_argument("--port", type=int, default=8040)
    serve.add_argument("--assets", help="directory of viewer static assets")

    labels = sub.add_parser("labels", help="print one cluster's label comparison")
    labels.add_argument("path")
    labels.add_argument("--cluster", type=int, required=True)
    return parser


def _config_from_args(args: argparse.Namespace) -> PipelineConfig:
    base: dict = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            base = json.load(fh)
    if args.k == "auto":
        k = None
    else:
        try:
            k = int(args.k)
        except ValueError as exc:
            raise ConfigError(f"--k must be 'auto' or an integer, got {args.k!r}") from exc
    spectral_doc = dict(base.pop("spectral", {}))
    spectral_doc.update({"k": k, "k_min": args.k_min, "k_max": args.k_max})
    layout_doc = dict(base.pop("layout", {}))
    layout_doc.update(
        {"between_cluster_factor": args.beta, "iterations": args.iterations}
    )
    doc = dict(base)
    doc.update(
        input_path=args.input,
        input_format=args.format,
        from_year=args.from_year,
        to_year=args.to_year,
        slice_years=args.slice_years,
        top_n=args.top_n,
        mode=args.mode,
        weight_mode=args.weight_mode,
        min_edge_count=args.min_edge_count,
        label_source=args.label_source,
        label_top_n=args.label_top_n,
        seed=args.seed,
    )
    known = {f.name for f in fields(PipelineConfig)}
    unknown = set(doc) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if "label_algorithms" in doc:
        doc["label_algorithms"] = tuple(doc["label_algorithms"])
    return PipelineConfig(
        spectral=SpectralConfig(**spectral_doc),
        layout=LayoutConfig(**layout_doc),
        **doc,
    )


def _cmd_build(args: argparse.Namespace) -> int:
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    cfg = _config_from_args(args)
    snap = run_pipeline(cfg)
    write_snapshot(snap, args.out)
    print(
        f"wrote {args.out}: {len(snap.network.nodes)} nodes, "
        f"{len(snap.network.edges)} edges, k={snap.partition.k}, "
        f"modularity={snap.partition.modularity:.4f}"
    )
    return EXIT_OK


def _cmd_validate(args: argparse.Namespace) -> int:
    violations = validate_snapshot(args.path)
    if violations:
        for v in violations:
            print(v)
        print(f"{len(violations)} violation(s)")
        return EXIT_CONFIG
    print("ok: snapshot is valid")
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    serve_snapshot(args.path, args.port, args.assets)
    return EXIT_OK


def _format_candidates(candidates: list[dict], score_fmt: str = "{:.2f}") -> list[str]:
    out = []
    for c in candidates:
        out.append(f"({score_fmt.format(c['score'])}) {c['term']} [n={c['frequency']}]")
    return out or ["-"]


def _cmd_labels(args: argparse.Namespace) -> int:
    snap = load_snapshot(args.path)
    cid = args.cluster
    if cid not in set(snap.partition.assignment.values()):
        print(f"error: cluster {cid} does not exist", file=sys.stderr)
        return EXIT_CONFIG
    size = sum(1 for c in snap.partition.assignment.values() if c == cid)
    mean_sil = snap.partition.cluster_mean_silhouette.get(cid, 0.0)
    print(f"cluster {cid}: {size} members, mean silhouette {mean_sil:.4f}")
    by_algorithm = snap.labels.get(cid, {})
    sections = (
        ("tf*idf", "tfidf", "{:.2f}"),
        ("log-likelihood", "llr", "{:.2f}"),
        ("lsa dim 1", "lsa_dim1", "{:.2f}"),
        ("lsa dim 2", "lsa_dim2", "{:.2f}"),
    )
    for heading, key, fmt in sections:
        cands = [
            {"score": c.score, "term": c.term, "frequency": c.frequency}
            for c in by_algorithm.get(key, ())
        ]
        print(f"  {heading}:")
        for line in _format_candidates(cands, fmt):
            print(f"    {line}")
    print("  most representative citers:")
    citers = snap.representative_citers.get(cid, ())
    if not citers:
        print("    -")
    for rec_id, coverage in citers:
        print(f"    ({coverage}/{size}) {rec_id}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "build": _cmd_build,
        "validate": _cmd_validate,
        "serve": _cmd_serve,
        "labels": _cmd_labels,
    }
    try:
        return handlers[args.command](args)
    except (ConfigError, SnapshotValidationError, json.JSONDecodeError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except PipelineStageError as exc:
        if isinstance(exc.cause, OSError):
            print(f"i/o error: {exc}", file=sys.stderr)
            return EXIT_IO
        print(f"pipeline error: {exc}", file=sys.stderr)
        return EXIT_PIPELINE


if __name__ == "__main__":
    sys.exit(main())
