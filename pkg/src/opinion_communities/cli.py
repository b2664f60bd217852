"""Command line entry point: ``opinion-communities run|sweep``."""
from __future__ import annotations

import argparse
import logging
import sys

from .dynamics import WEIGHT_MODES
from .experiment import ExperimentSpec, delta_sweep, emit_report, load_graph, run_experiment
from .fixtures import FIXTURES


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_argument_group("graph")
    src.add_argument("--graph", metavar="PATH", help="edge-list file (with --fixture books/blogs: that fixture's data)")
    src.add_argument("--fixture", choices=sorted(FIXTURES), help="named benchmark graph")
    common.add_argument("--R", type=float, default=1.0, help="initial confidence radius (default 1)")
    common.add_argument("--alpha", type=float, default=0.1, help="step weight in (0, 1/2) (default 0.1)")
    common.add_argument("--runs", type=int, default=100, help="random initial opinion vectors (default 100)")
    common.add_argument("--seed", type=int, default=0, help="master RNG seed (default 0)")
    common.add_argument("--weight-mode", choices=WEIGHT_MODES, default="degree_average")
    common.add_argument("--precision", choices=("extended", "double"), default="extended")
    common.add_argument("--stability-times", type=_floats, default=(), metavar="T,T,...")
    common.add_argument("--format", choices=("json", "csv", "dot"), default="json")
    common.add_argument("--out", metavar="PATH", help="write here instead of stdout")
    common.add_argument("--workers", type=int, default=1, help="worker processes (default 1)")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(
        prog="opinion-communities",
        description="Community detection with decaying-confidence opinion dynamics (rho = 1 - alpha*delta).",
    )
    sub = p.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", parents=[common], help="one delta")
    run.add_argument("--delta", type=float, required=True)
    sweep = sub.add_parser("sweep", parents=[common], help="several deltas, shared seed")
    sweep.add_argument("--deltas", type=_floats, required=True, metavar="D,D,...")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.graph is None and args.fixture is None:
        parser.error("one of --graph or --fixture is required")

    first_delta = args.delta if args.command == "run" else (args.deltas[0] if args.deltas else None)
    if first_delta is None:
        parser.error("--deltas is empty")
    try:
        spec = ExperimentSpec(
            delta=first_delta, graph_path=args.graph, fixture=args.fixture, R=args.R, alpha=args.alpha,
            runs=args.runs, seed=args.seed, weight_mode=args.weight_mode, precision=args.precision,
            stability_times=tuple(args.stability_times), workers=args.workers,
        )
        graph = load_graph(spec)
        if args.command == "run":
            report = run_experiment(spec, graph)
        else:
            report = delta_sweep(spec, args.deltas, graph)
    except (OSError, KeyError, ValueError) as exc:
        print(f"opinion-communities: error: {exc}", file=sys.stderr)
        return 2

    data = emit_report(report, args.format)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
    return 0


if __name__ == "__main__":
    sys.exit(main())
