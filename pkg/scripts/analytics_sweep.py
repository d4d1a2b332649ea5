"""Sweep the analytics share of the mix at a fixed thread count.

The share is taken equally from containsVertex and containsEdge.  Example:

    python scripts/analytics_sweep.py --op diameter --pcts 1 2 5 10 --threads 4
"""
import argparse
import csv
import sys
from dataclasses import dataclass, field
from typing import List

from wfgraph.bench import PROFILES, BenchConfig, run_benchmark


@dataclass
class SweepConfig:
    op: str = "snapshot"
    pcts: List[int] = field(default_factory=lambda: [1, 2, 5, 10, 20])
    threads: int = 4
    engine: str = "waitfree"
    profile: str = "read-heavy"
    duration: float = 5.0
    vertices: int = 500
    edges: int = 1000
    seed: int = 0


def run(cfg: SweepConfig, out) -> None:
    w = csv.writer(out)
    w.writerow(["analytics_pct", "total_ops", "avg_us", f"{cfg.op}_count", f"{cfg.op}_avg_us"])
    base = PROFILES[cfg.profile].with_analytics(cfg.op)
    for pct in cfg.pcts:
        rec = run_benchmark(BenchConfig(
            threads=cfg.threads, duration_seconds=cfg.duration, initial_vertices=cfg.vertices,
            initial_edges=cfg.edges, seed=cfg.seed, profile=base.with_analytics_pct(pct),
            engine=cfg.engine,
        ))
        w.writerow([pct, rec.total_ops, f"{rec.average_micros_per_op:.3f}",
                    rec.count(cfg.op), f"{rec.avg_us(cfg.op):.3f}"])
        out.flush()


def main() -> None:
    d = SweepConfig()
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--op", default=d.op, choices=["snapshot", "diameter", "bc"])
    p.add_argument("--pcts", type=int, nargs="+", default=d.pcts)
    p.add_argument("--threads", type=int, default=d.threads)
    p.add_argument("--engine", default=d.engine, choices=["waitfree", "baseline"])
    p.add_argument("--profile", default=d.profile, choices=sorted(PROFILES))
    p.add_argument("--duration", type=float, default=d.duration)
    p.add_argument("--vertices", type=int, default=d.vertices)
    p.add_argument("--edges", type=int, default=d.edges)
    p.add_argument("--seed", type=int, default=d.seed)
    a = p.parse_args()
    run(SweepConfig(a.op, a.pcts, a.threads, a.engine, a.profile, a.duration,
                    a.vertices, a.edges, a.seed), sys.stdout)


if __name__ == "__main__":
    main()
