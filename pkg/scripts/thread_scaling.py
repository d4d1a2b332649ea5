"""Average latency per operation class as thread count grows, for both engines.

Writes one CSV row per (engine, threads, class).  Example:

    python scripts/thread_scaling.py --threads 1 2 4 8 --duration 5 --out scaling.csv
"""
import argparse
import csv
import sys
from dataclasses import dataclass, field
from typing import List

from wfgraph.bench import PROFILES, BenchConfig, run_benchmark


@dataclass
class ScalingConfig:
    threads: List[int] = field(default_factory=lambda: [1, 2, 4, 8])
    engines: List[str] = field(default_factory=lambda: ["waitfree", "baseline"])
    profile: str = "read-heavy"
    analytics: str = "snapshot"
    duration: float = 5.0
    vertices: int = 1000
    edges: int = 2000
    seed: int = 0


def run(cfg: ScalingConfig, out) -> None:
    w = csv.writer(out)
    w.writerow(["engine", "threads", "class", "count", "avg_us"])
    prof = PROFILES[cfg.profile].with_analytics(cfg.analytics)
    for engine in cfg.engines:
        for t in cfg.threads:
            rec = run_benchmark(BenchConfig(
                threads=t, duration_seconds=cfg.duration, initial_vertices=cfg.vertices,
                initial_edges=cfg.edges, seed=cfg.seed, profile=prof, engine=engine,
            ))
            for cls in rec.classes():
                w.writerow([engine, t, cls, rec.count(cls), f"{rec.avg_us(cls):.3f}"])
            w.writerow([engine, t, "ALL", rec.total_ops, f"{rec.average_micros_per_op:.3f}"])
            out.flush()


def main() -> None:
    d = ScalingConfig()
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--threads", type=int, nargs="+", default=d.threads)
    p.add_argument("--engines", nargs="+", default=d.engines, choices=["waitfree", "baseline"])
    p.add_argument("--profile", default=d.profile, choices=sorted(PROFILES))
    p.add_argument("--analytics", default=d.analytics, choices=["snapshot", "diameter", "bc"])
    p.add_argument("--duration", type=float, default=d.duration)
    p.add_argument("--vertices", type=int, default=d.vertices)
    p.add_argument("--edges", type=int, default=d.edges)
    p.add_argument("--seed", type=int, default=d.seed)
    p.add_argument("--out", default=None)
    a = p.parse_args()
    cfg = ScalingConfig(a.threads, a.engines, a.profile, a.analytics, a.duration,
                        a.vertices, a.edges, a.seed)
    if a.out:
        with open(a.out, "w", newline="") as fh:
            run(cfg, fh)
    else:
        run(cfg, sys.stdout)


if __name__ == "__main__":
    main()
