"""Wing–Gong linearizability search with Lowe's state memoization.

Operations are arranged in a doubly linked list of call/return entries in
timestamp order.  The search repeatedly tries to linearize some call that
precedes the first remaining return; a return entry reached with its call
still unlinearized forces a backtrack.  ``(linearized set, model state)``
pairs already explored are cached, which keeps the search near-linear on
histories with modest overlap.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from .history import HistoryEvent, Operation, pair_events
from .model import SeqGraphModel, seq_apply


class BudgetExceeded(RuntimeError):
    """The search visited more nodes than the configured limit."""


@dataclass
class Verdict:
    ok: bool
    # shortest failing prefix of the history, empty when ok
    counterexample: List[Operation] = field(default_factory=list)
    nodes: int = 0

    def __bool__(self) -> bool:
        return self.ok


class _Entry:
    __slots__ = ("op", "is_call", "match", "prev", "next")

    def __init__(self, op: Optional[Operation], is_call: bool):
        self.op = op
        self.is_call = is_call
        self.match: Optional[_Entry] = None
        self.prev: Optional[_Entry] = None
        self.next: Optional[_Entry] = None


def _build(ops: Sequence[Operation]) -> _Entry:
    items = []
    for op in ops:
        c = _Entry(op, True)
        items.append((op.invoke_ts, c))
        if not op.pending:
            r = _Entry(op, False)
            c.match = r
            r.match = c
            items.append((op.resp_ts, r))
    items.sort(key=lambda t: t[0])
    head = _Entry(None, False)
    prev = head
    for _, e in items:
        prev.next = e
        e.prev = prev
        prev = e
    return head


def _lift(c: _Entry) -> None:
    c.prev.next = c.next
    if c.next is not None:
        c.next.prev = c.prev
    r = c.match
    if r is not None:
        r.prev.next = r.next
        if r.next is not None:
            r.next.prev = r.prev


def _unlift(c: _Entry) -> None:
    r = c.match
    if r is not None:
        r.prev.next = r
        if r.next is not None:
            r.next.prev = r
    c.prev.next = c
    if c.next is not None:
        c.next.prev = c


def _matches(op: str, expected: Any, observed: Any) -> bool:
    if op == "snap":
        return expected.state() == observed.state()
    return expected == observed


def _search(ops: Sequence[Operation], init: SeqGraphModel, max_nodes: Optional[int]) -> Tuple[bool, int]:
    head = _build(ops)
    state = init
    linearized = 0
    stack: List[Tuple[_Entry, SeqGraphModel]] = []
    cache = set()
    apply_cache: Dict[Tuple, Tuple[Any, SeqGraphModel]] = {}
    nodes = 0
    # pending calls never need linearizing; done when no completed op is left
    remaining = sum(1 for op in ops if not op.pending)
    entry = head.next
    while remaining:
        nodes += 1
        if max_nodes is not None and nodes > max_nodes:
            raise BudgetExceeded(f"search exceeded {max_nodes} nodes")
        if entry.is_call:
            op = entry.op
            key = (op.op, op.args, state)
            res = apply_cache.get(key)
            if res is None:
                res = seq_apply(state, op.op, op.args)
                apply_cache[key] = res
            value, nxt = res
            if op.pending or _matches(op.op, value, op.value):
                lin = linearized | (1 << op.id)
                ck = (lin, nxt)
                if ck not in cache:
                    cache.add(ck)
                    stack.append((entry, state))
                    state = nxt
                    linearized = lin
                    remaining -= not op.pending
                    _lift(entry)
                    entry = head.next
                    continue
            entry = entry.next
        else:
            if not stack:
                return False, nodes
            entry, state = stack.pop()
            linearized &= ~(1 << entry.op.id)
            remaining += not entry.op.pending
            _unlift(entry)
            entry = entry.next
    return True, nodes


def _prefix(ops: Sequence[Operation], cut: int) -> List[Operation]:
    out = []
    for op in ops:
        if op.invoke_ts > cut:
            continue
        if op.resp_ts is not None and op.resp_ts > cut:
            op = Operation(op.id, op.tid, op.op, op.args, None, op.invoke_ts, None)
        out.append(op)
    return out


def check_linearizable(
    history: Sequence,
    init: SeqGraphModel = SeqGraphModel(),
    max_nodes: Optional[int] = 2_000_000,
) -> Verdict:
    """Decide whether ``history`` (events or paired operations) is linearizable.

    On failure the verdict carries the shortest prefix, cut at a response,
    that is already non-linearizable.
    """
    ops = list(history)
    if ops and isinstance(ops[0], HistoryEvent):
        ops = pair_events(ops)
    ok, nodes = _search(ops, init, max_nodes)
    if ok:
        return Verdict(True, [], nodes)
    cuts = sorted(op.resp_ts for op in ops if op.resp_ts is not None)
    lo, hi = 0, len(cuts) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _search(_prefix(ops, cuts[mid]), init, max_nodes)[0]:
            lo = mid + 1
        else:
            hi = mid
    return Verdict(False, _prefix(ops, cuts[lo]), nodes)
