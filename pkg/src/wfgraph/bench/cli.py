"""``wfgraph-bench``: run one benchmark configuration and write CSV metrics."""
from __future__ import annotations

import argparse
import logging
import sys
from typing import List, Optional

from .dataset import DatasetError
from .runner import BenchConfig, emit_csv, format_csv, run_benchmark
from .workload import ANALYTICS_OPS, PROFILES

log = logging.getLogger("wfgraph.bench")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wfgraph-bench", description=__doc__)
    p.add_argument("--threads", type=int, default=4)
    p.add_argument("--duration", type=float, default=5.0, help="seconds per worker")
    p.add_argument("--profile", choices=sorted(PROFILES), default="read-heavy")
    p.add_argument("--analytics", choices=ANALYTICS_OPS, default="snapshot")
    p.add_argument(
        "--analytics-pct",
        type=int,
        default=None,
        help="analytics share; taken equally from containsVertex/containsEdge",
    )
    p.add_argument("--engine", choices=("waitfree", "baseline"), default="waitfree")
    p.add_argument("--dataset", default=None, help="SNAP edge-list file")
    p.add_argument("--initial-vertices", type=int, default=10_000)
    p.add_argument("--initial-edges", type=int, default=20_000)
    p.add_argument("--key-space", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="CSV path (stdout when omitted)")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def config_from_args(args: argparse.Namespace) -> BenchConfig:
    profile = PROFILES[args.profile].with_analytics(args.analytics)
    if args.analytics_pct is not None:
        profile = profile.with_analytics_pct(args.analytics_pct)
    return BenchConfig(
        threads=args.threads,
        duration_seconds=args.duration,
        initial_vertices=args.initial_vertices,
        initial_edges=args.initial_edges,
        key_space=args.key_space,
        seed=args.seed,
        profile=profile,
        engine=args.engine,
        dataset_path=args.dataset,
    )


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        cfg = config_from_args(args)
        cfg.validate()
    except ValueError as exc:
        parser.error(str(exc))
    log.info("running %s", cfg)
    try:
        record = run_benchmark(cfg)
    except (OSError, DatasetError) as exc:
        print(f"wfgraph-bench: {exc}", file=sys.stderr)
        return 1
    if args.out:
        try:
            emit_csv(record, args.out)
        except OSError as exc:
            print(f"wfgraph-bench: {exc}", file=sys.stderr)
            return 1
    else:
        sys.stdout.write(format_csv(record))
    return 0


if __name__ == "__main__":
    sys.exit(main())
