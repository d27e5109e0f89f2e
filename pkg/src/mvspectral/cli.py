"""Command-line interface.

Subcommands: ingest, synth, embed, cluster, eigengap, consistency, timing.
Results are emitted as deterministic JSON (sorted keys) to --output or
stdout.  Exit codes: 0 success, 2 input/parse error, 3 numerical failure,
4 configuration error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .errors import EXIT_CONFIG, MVSpectralError
from .experiments import (
    DEFAULT_GROUP_SIZES,
    METHODS,
    ExperimentConfig,
    compute_embedding,
    consistency_experiment,
    eigengap_report,
    run_pipeline,
    timing_experiment,
)
from .io import (
    TYPE_ADJACENCY,
    dump_json,
    load_timeseries,
    load_views,
    write_matrix_csv,
)
from .synth import SyntheticSpec, synth_views


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors use the configuration exit code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_pair(text: str):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected MEAN,SD, got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected MEAN,SD, got {text!r}")


def _emit(payload, output) -> None:
    text = dump_json(payload, output)
    if output is None:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--k", type=int, default=5, help="number of clusters")
    common.add_argument("--method", choices=METHODS, default="mvsc")
    common.add_argument("--seed", type=int, default=0, help="master RNG seed")
    common.add_argument("--num-seeds", type=int, default=100,
                        help="k-means restarts per consensus labelling")
    common.add_argument("--trials", type=int, default=None,
                        help="repetitions (default: 100 for consistency, 3 for timing)")
    common.add_argument("--group-sizes", type=_int_list,
                        default=list(DEFAULT_GROUP_SIZES))
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--output", type=Path, default=None,
                        help="write JSON here instead of stdout")
    common.add_argument("--row-normalize", action="store_true",
                        help="normalize embedding rows before k-means")

    parser = _Parser(prog="mvspectral",
                     description="Group-wise spectral clustering of multi-view graphs")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_ingest = sub.add_parser("ingest", parents=[common],
                              help="convert time-series CSVs to adjacency CSVs")
    p_ingest.add_argument("inputs", nargs="+", type=Path)
    p_ingest.add_argument("--outdir", type=Path, required=True)

    p_synth = sub.add_parser("synth", parents=[common],
                             help="generate a planted-partition view family")
    p_synth.add_argument("--n", type=int, default=116)
    p_synth.add_argument("--k-true", type=int, default=5)
    p_synth.add_argument("--m", type=int, default=20)
    p_synth.add_argument("--intra", type=_float_pair, default=(1.0, 0.2),
                         metavar="MEAN,SD")
    p_synth.add_argument("--inter", type=_float_pair, default=(0.2, 0.2),
                         metavar="MEAN,SD")
    p_synth.add_argument("--block-sizes", type=_int_list, default=None)
    p_synth.add_argument("--outdir", type=Path, required=True)

    for name, help_text in (
        ("embed", "compute a group-wise embedding"),
        ("cluster", "embed plus consensus k-means labelling"),
        ("eigengap", "report the leading spectral values and gap ratios"),
        ("consistency", "Dice agreement across disjoint view subsets"),
        ("timing", "embedding wall-clock benchmark"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("--manifest", type=Path, required=True)
        if name == "eigengap":
            p.add_argument("--k-max", type=int, default=10)
        if name == "timing":
            p.add_argument("--methods", default="mvsc,mvscw,aasc,jdl",
                           help="comma-separated method list")
    return parser


def _cmd_ingest(args) -> None:
    args.outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for source in args.inputs:
        view = load_timeseries(source)
        target = args.outdir / (Path(source).stem + ".adj.csv")
        write_matrix_csv(view.weights, target)
        written.append(str(target))
    _emit({"written": written, "vertices": view.n}, args.output)


def _cmd_synth(args) -> None:
    spec = SyntheticSpec(
        n=args.n, k_true=args.k_true, m=args.m,
        intra_mean=args.intra[0], intra_sd=args.intra[1],
        inter_mean=args.inter[0], inter_sd=args.inter[1],
        block_sizes=tuple(args.block_sizes) if args.block_sizes else (),
        rng_seed=args.seed,
    )
    views, truth = synth_views(spec)
    args.outdir.mkdir(parents=True, exist_ok=True)
    manifest = []
    for i, view in enumerate(views.views):
        name = f"view_{i:03d}.csv"
        write_matrix_csv(view.weights, args.outdir / name)
        manifest.append({"path": name, "type": TYPE_ADJACENCY})
    dump_json(manifest, args.outdir / "manifest.json")
    dump_json({"k_true": truth.k, "assignment": truth.assignment.tolist()},
              args.outdir / "truth.json")
    _emit({"outdir": str(args.outdir), "views": views.m, "n": views.n,
           "manifest": str(args.outdir / "manifest.json")}, args.output)


def _cmd_embed(args) -> None:
    views, report = load_views(args.manifest)
    emb, weights = compute_embedding(views, args.method, args.k)
    _emit({
        "method": args.method,
        "k": args.k,
        "eigenvalues": emb.eigenvalues,
        "coords": emb.coords,
        "weights": weights,
        "negative_entries_zeroed": report.total_negative_entries,
    }, args.output)


def _cmd_cluster(args) -> None:
    views, report = load_views(args.manifest)
    cfg = ExperimentConfig(method=args.method, k=args.k, num_seeds=args.num_seeds,
                           rng_seed=args.seed, row_normalize=args.row_normalize)
    run = run_pipeline(views, cfg)
    payload = run.to_dict()
    payload["negative_entries_zeroed"] = report.total_negative_entries
    _emit(payload, args.output)


def _cmd_eigengap(args) -> None:
    views, _ = load_views(args.manifest)
    _emit(eigengap_report(views, args.method, args.k_max), args.output)


def _cmd_consistency(args) -> None:
    views, _ = load_views(args.manifest)
    cfg = ExperimentConfig(
        method=args.method, k=args.k, group_sizes=tuple(args.group_sizes),
        trials=args.trials if args.trials is not None else 100,
        num_seeds=args.num_seeds, rng_seed=args.seed,
        workers=args.workers, row_normalize=args.row_normalize,
    )
    _emit(consistency_experiment(views, cfg), args.output)


def _cmd_timing(args) -> None:
    views, _ = load_views(args.manifest)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    result = timing_experiment(views, methods, args.k, args.group_sizes,
                               trials=args.trials if args.trials is not None else 3)
    _emit(result, args.output)


_COMMANDS = {
    "ingest": _cmd_ingest,
    "synth": _cmd_synth,
    "embed": _cmd_embed,
    "cluster": _cmd_cluster,
    "eigengap": _cmd_eigengap,
    "consistency": _cmd_consistency,
    "timing": _cmd_timing,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _COMMANDS[args.command](args)
    except MVSpectralError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
