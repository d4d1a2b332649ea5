"""Progress tests: halt one snapshot caller at a named site, let others finish."""
from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .. import hooks
from ..graph import ConcurrentGraph
from ..snapshot import SnapshotResult
from .history import HistoryRecorder
from .linearizability import check_linearizable
from .stress import invoke

MANUAL = "manual"
NEVER = "never"


@dataclass(frozen=True)
class StallPlan:
    """Halt the victim at ``site`` (None: no stall) on the vertex ``key``.

    ``key=None`` stalls at the first vertex claimed.  With ``release="never"``
    the victim stays halted for the whole run and is only freed at teardown.
    """

    site: Optional[str]
    key: Optional[int] = None
    release: str = MANUAL

    def __post_init__(self):
        if self.site is not None and self.site not in hooks.STALL_SITES:
            raise ValueError(f"{self.site!r} is not an instrumented stall site")
        if self.release not in (MANUAL, NEVER):
            raise ValueError(f"unknown release condition {self.release!r}")


@dataclass
class Scenario:
    vertices: Sequence[int] = ()
    edges: Sequence[Tuple[int, int]] = ()
    helpers: int = 1
    # per-thread point-operation plans run concurrently with the helpers
    updaters: Sequence[Sequence[Tuple[str, Tuple[int, ...]]]] = ()
    budget_seconds: float = 5.0


@dataclass
class StallReport:
    passed: bool
    stalled: bool
    phase_reached: Dict[str, str] = field(default_factory=dict)
    helper_seconds: List[float] = field(default_factory=list)
    results: Dict[str, SnapshotResult] = field(default_factory=dict)
    reason: str = ""

    def __bool__(self) -> bool:
        return self.passed


def run_stall_test(plan: StallPlan, scenario: Scenario) -> StallReport:
    g = ConcurrentGraph(max_threads=2 + scenario.helpers + len(scenario.updaters))
    setup = g.register_thread()
    for v in scenario.vertices:
        g.add_vertex(v, setup)
    for a, b in scenario.edges:
        g.add_edge(a, b, setup)
    init_state = g.read_state()

    victim = g.register_thread()
    helpers = [g.register_thread() for _ in range(scenario.helpers)]
    updaters = [g.register_thread() for _ in scenario.updaters]
    budget = scenario.budget_seconds

    victim_acquired = threading.Event()
    helpers_acquired = threading.Semaphore(0)
    victim_stalled = threading.Event()
    victim_done = threading.Event()
    release = threading.Event()
    progress: Dict[str, str] = {}
    stalled_once = []
    lock = threading.Lock()

    def hook(site, tid, collector=None, key=None):
        if tid == victim:
            progress["victim"] = site
            if site == hooks.SNAPSHOT_ACQUIRED:
                victim_acquired.set()
                for _ in helpers:
                    helpers_acquired.acquire(timeout=budget)
            elif site == plan.site and (plan.key is None or key == plan.key):
                with lock:
                    first = not stalled_once
                    stalled_once.append(site)
                if first:
                    victim_stalled.set()
                    release.wait()
            elif site == hooks.SNAPSHOT_DONE:
                victim_done.set()
        elif tid in helpers:
            progress[f"helper{helpers.index(tid)}"] = site
            if site == hooks.SNAPSHOT_ACQUIRED:
                helpers_acquired.release()
                deadline = time.monotonic() + budget
                while not (victim_stalled.is_set() or victim_done.is_set()):
                    if time.monotonic() > deadline:
                        break
                    time.sleep(0.001)

    rec = HistoryRecorder()
    results: Dict[str, SnapshotResult] = {}
    elapsed: List[float] = []
    errors: List[BaseException] = []

    def run_snap(name, tid, timed):
        try:
            rec.invoke(tid, "snap", ())
            t0 = time.monotonic()
            res = g.take_snapshot(tid)
            if timed:
                elapsed.append(time.monotonic() - t0)
            rec.respond(tid, "snap", res)
            results[name] = res
        except BaseException as exc:
            errors.append(exc)

    def run_updates(tid, ops_):
        try:
            for op, args in ops_:
                rec.call(tid, op, args, lambda: invoke(g, tid, op, args))
        except BaseException as exc:
            errors.append(exc)

    prev_hook = hooks.installed()
    hooks.install(hook)
    vt = threading.Thread(target=run_snap, args=("victim", victim, False), daemon=True)
    try:
        vt.start()
        if not victim_acquired.wait(budget):
            return StallReport(False, False, dict(progress), reason="victim never acquired a collector")
        hts = [
            threading.Thread(target=run_snap, args=(f"helper{i}", t, True), daemon=True)
            for i, t in enumerate(helpers)
        ]
        uts = [
            threading.Thread(target=run_updates, args=(t, p), daemon=True)
            for t, p in zip(updaters, scenario.updaters)
        ]
        for t in hts + uts:
            t.start()
        deadline = time.monotonic() + budget
        for t in hts:
            t.join(max(0.0, deadline - time.monotonic()))
        stalled = bool(stalled_once)
        # phases as of the helpers' deadline, before any release
        phases = dict(progress)
        if any(t.is_alive() for t in hts):
            return StallReport(
                False, stalled, phases, list(elapsed), dict(results),
                reason="helper snapshot did not complete within budget",
            )
        for t in uts:
            t.join(budget)
        if plan.release == MANUAL:
            release.set()
            vt.join(budget)
            if vt.is_alive():
                return StallReport(False, stalled, phases, list(elapsed), dict(results),
                                   reason="victim did not finish after release")
        if errors:
            raise errors[0]
        report = StallReport(True, stalled, phases, list(elapsed), dict(results))
        # helpers joined the victim's collector, so every finished snapshot agrees
        if len(set(results.values())) > 1:
            report.passed = False
            report.reason = "snapshots from one collector differ"
            return report
        verdict = check_linearizable(rec.events, _model_of(init_state))
        if not verdict.ok:
            report.passed = False
            report.reason = "history not linearizable"
        return report
    finally:
        release.set()
        hooks.install(prev_hook)
        vt.join(1.0)


def _model_of(state: SnapshotResult):
    from .model import SeqGraphModel

    return SeqGraphModel(*state.state())
