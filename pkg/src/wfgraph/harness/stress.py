"""Random concurrent workloads that record a checkable history."""
from __future__ import annotations

import random
import sys
import threading
import time
from contextlib import contextmanager
from typing import Callable, List, Optional, Sequence, Tuple

from ..analytics import GraphView, betweenness_centrality, diameter
from ..graph import ConcurrentGraph
from .history import HistoryEvent, HistoryRecorder
from .model import POINT_OPS

# plan-only step: sleep args[0] microseconds, not recorded in the history
PAUSE = "pause"


@contextmanager
def fine_switching(interval: float = 1e-6):
    """Shrink the interpreter's thread switch interval to force interleavings."""
    old = sys.getswitchinterval()
    sys.setswitchinterval(interval)
    try:
        yield
    finally:
        sys.setswitchinterval(old)


def random_point_op(rng: random.Random, key_space: int) -> Tuple[str, Tuple[int, ...]]:
    op = rng.choice(POINT_OPS)
    if op in ("add_vertex", "remove_vertex", "contains_vertex"):
        return op, (rng.randrange(key_space),)
    k, l = rng.sample(range(key_space), 2)
    return op, (k, l)


def invoke(graph: ConcurrentGraph, tid: int, op: str, args: Sequence[int]):
    if op == "snap":
        return graph.take_snapshot(tid)
    if op == "diameter":
        return diameter(GraphView.from_snapshot(graph.take_snapshot(tid)))
    if op == "bc":
        return betweenness_centrality(GraphView.from_snapshot(graph.take_snapshot(tid)))[1]
    return getattr(graph, op)(*args, tid)


def record_history(
    graph: ConcurrentGraph,
    plans: Sequence[Sequence[Tuple[str, Tuple[int, ...]]]],
    switch_interval: Optional[float] = 1e-6,
) -> List[HistoryEvent]:
    """Run one thread per plan against ``graph`` and return the event log.

    A plan step ``("pause", (us,))`` sleeps without recording an event.
    """
    rec = HistoryRecorder()
    tids = [graph.register_thread() for _ in plans]
    start = threading.Barrier(len(plans))
    errors: List[BaseException] = []

    def worker(tid, plan):
        try:
            start.wait()
            for op, args in plan:
                if op == PAUSE:
                    time.sleep(args[0] / 1e6)
                    continue
                rec.call(tid, op, args, lambda: invoke(graph, tid, op, args))
        except BaseException as exc:  # surfaced after join
            errors.append(exc)

    threads = [threading.Thread(target=worker, args=(t, p)) for t, p in zip(tids, plans)]
    if switch_interval is None:
        ctx = _null()
    else:
        ctx = fine_switching(switch_interval)
    with ctx:
        for t in threads:
            t.start()
        for t in threads:
            t.join()
    if errors:
        raise errors[0]
    return rec.events


@contextmanager
def _null():
    yield


def random_history(
    seed: int,
    threads: int = 4,
    ops_per_thread: int = 300,
    key_space: int = 8,
    snap_threads: int = 0,
    snaps_per_thread: int = 5,
    snap_pause_us: int = 0,
    prefill: Callable[[ConcurrentGraph, int], None] = None,
    switch_interval: Optional[float] = 1e-6,
) -> Tuple[ConcurrentGraph, List[HistoryEvent]]:
    """Record a random history on a fresh graph (empty unless ``prefill``).

    ``snap_pause_us`` > 0 puts a random pause below that bound before each
    snapshot call.
    """
    rng = random.Random(seed)
    g = ConcurrentGraph(max_threads=threads + snap_threads + 1)
    if prefill is not None:
        prefill(g, g.register_thread())
    plans = [
        [random_point_op(rng, key_space) for _ in range(ops_per_thread)] for _ in range(threads)
    ]
    for _ in range(snap_threads):
        plan = []
        for _ in range(snaps_per_thread):
            if snap_pause_us:
                # spread the snapshots over the updaters' run
                plan.append((PAUSE, (rng.randrange(snap_pause_us),)))
            plan.append(("snap", ()))
        plans.append(plan)
    return g, record_history(g, plans, switch_interval)
