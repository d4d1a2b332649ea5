"""Record many random concurrent histories and check each for linearizability.

Failing histories are written to ``--dump-dir`` in the plain-text history
format so they can be replayed with ``read_history``.
"""
import argparse
import os
import time

from wfgraph.harness import check_linearizable, write_history
from wfgraph.harness.stress import random_history


def main() -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--histories", type=int, default=100)
    p.add_argument("--threads", type=int, default=4)
    p.add_argument("--ops", type=int, default=300)
    p.add_argument("--keys", type=int, default=8)
    p.add_argument("--snap-threads", type=int, default=0)
    p.add_argument("--snaps", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dump-dir", default=".")
    a = p.parse_args()
    bad = 0
    t0 = time.perf_counter()
    for i in range(a.histories):
        seed = a.seed + i
        _, events = random_history(seed, a.threads, a.ops, a.keys, a.snap_threads, a.snaps,
                                   snap_pause_us=800 if a.snap_threads else 0)
        v = check_linearizable(events)
        if not v.ok:
            bad += 1
            path = os.path.join(a.dump_dir, f"history_{seed}.txt")
            write_history(events, path)
            print(f"seed {seed}: NOT linearizable, history in {path}")
            for op in v.counterexample:
                print("   ", op)
    print(f"{a.histories - bad}/{a.histories} linearizable in {time.perf_counter() - t0:.1f}s")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
