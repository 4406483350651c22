"""Command line: ``momapf gen | solve | bench``.

Exit codes: 0 on success, 2 for usage errors (bad flags, unknown algorithm,
unreadable map or instance).
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import harness
from .domain import InstanceError, MapParseError

USAGE_ERROR = 2


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _nonneg_int(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _nonneg_float(text: str) -> float:
    v = float(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="momapf", description="Multi-objective multi-agent path finding")
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate random instances on a map")
    g.add_argument("--map", required=True, help="map file (MovingAI-style header)")
    g.add_argument("--agents", type=_positive_int, required=True)
    g.add_argument("--objectives", type=_positive_int, required=True)
    g.add_argument("--count", type=_nonneg_int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--out", required=True, help="output directory")

    s = sub.add_parser("solve", help="solve one instance file")
    s.add_argument("--instance", required=True)
    s.add_argument("--alg", required=True, choices=harness.ALGORITHMS)
    s.add_argument("--w", default="1", help="inflation factor >= 1, e.g. 1.2 or 6/5")
    s.add_argument("--time-limit", type=_nonneg_float, default=None, help="seconds")
    s.add_argument("--expand-limit", type=_nonneg_int, default=None)
    s.add_argument("--out", required=True, help="solution JSON path")
    s.add_argument("--log", default=None,
                   help="run log CSV to append to (default: runs.csv next to --out)")

    b = sub.add_parser("bench", help="run a manifest of instances x configs")
    b.add_argument("--manifest", required=True)
    b.add_argument("--out", required=True, help="CSV of run records")
    b.add_argument("--workers", type=_positive_int, default=1)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "gen":
            paths = harness.cmd_gen(args.map, args.agents, args.objectives, args.count,
                                    args.seed, args.out)
            print(f"wrote {len(paths)} instances to {args.out}")
        elif args.command == "solve":
            log = args.log or str(Path(args.out).with_name("runs.csv"))
            rec = harness.cmd_solve(args.instance, args.alg, args.w, args.time_limit,
                                    args.expand_limit, args.out, log)
            print(f"{rec.instance_id} {rec.algorithm} w={rec.w}: {rec.status}, "
                  f"{rec.n_solutions} solutions, {rec.n_expanded} expansions")
        else:
            recs = harness.cmd_bench(args.manifest, args.out, args.workers)
            print(f"{len(recs)} runs in {args.out}; summary in {harness.summary_path(args.out)}")
    except (OSError, ValueError, MapParseError, InstanceError) as exc:
        # InstanceError and MapParseError are ValueErrors; listed for readability
        print(f"momapf {args.command}: error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    return 0


if __name__ == "__main__":
    sys.exit(main())
