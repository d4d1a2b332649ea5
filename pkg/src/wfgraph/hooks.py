"""Named instrumentation points used by progress tests.

Each site is a call to :func:`stall_point`.  With no hook installed the
call is a single global load and comparison.
"""
from __future__ import annotations

from typing import Callable, Optional

# Sites reachable from take_snapshot, in execution order.
SNAPSHOT_ACQUIRED = "snapshot.acquired"
AFTER_COLLECT_VNODES = "iterator.after_collect_vnodes"
ITER_CLAIM = "iterator.pass1_claim"
BEFORE_DEACTIVATE = "snapshot.before_deactivate"
RECON_CLAIM = "reconstruction.pass1_claim"
SNAPSHOT_DONE = "snapshot.done"

STALL_SITES = (AFTER_COLLECT_VNODES, ITER_CLAIM, RECON_CLAIM)
ALL_SITES = (
    SNAPSHOT_ACQUIRED,
    AFTER_COLLECT_VNODES,
    ITER_CLAIM,
    BEFORE_DEACTIVATE,
    RECON_CLAIM,
    SNAPSHOT_DONE,
)

Hook = Callable[..., None]

_hook: Optional[Hook] = None


def install(hook: Optional[Hook]) -> None:
    global _hook
    _hook = hook


def installed() -> Optional[Hook]:
    return _hook


def stall_point(site: str, tid: int, **ctx) -> None:
    h = _hook
    if h is not None:
        h(site, tid, **ctx)
