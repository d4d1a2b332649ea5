"""Concurrent history recording and the plain-text history file format.

One event per line::

    ts tid invoke op arg...
    ts tid resp op value

Point-operation values are ``OpResult`` names; ``snap`` values use the
compact token ``k:d,d;k:;...`` (``-`` for the empty graph); ``diameter``
is an integer and ``bc`` a vertex key or ``none``.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from ..graph import OpResult
from ..snapshot import SnapshotResult
from .model import ARITY

INVOKE = "invoke"
RESP = "resp"


@dataclass(frozen=True)
class HistoryEvent:
    ts: int
    tid: int
    kind: str
    op: str
    args: Tuple[int, ...] = ()
    value: Any = None


@dataclass
class Operation:
    """A paired invocation/response; ``resp_ts`` is None while pending."""

    id: int
    tid: int
    op: str
    args: Tuple[int, ...]
    value: Any
    invoke_ts: int
    resp_ts: Optional[int] = None

    @property
    def pending(self) -> bool:
        return self.resp_ts is None

    def __str__(self) -> str:
        a = ", ".join(map(str, self.args))
        v = "?" if self.pending else format_value(self.op, self.value)
        return f"t{self.tid} {self.op}({a}) -> {v} [{self.invoke_ts}, {self.resp_ts}]"


class HistoryRecorder:
    """Thread-safe event log with one global monotone timestamp."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._ts = 0
        self._events: List[HistoryEvent] = []

    def _stamp(self, tid, kind, op, args, value) -> None:
        with self._lock:
            self._ts += 1
            self._events.append(HistoryEvent(self._ts, tid, kind, op, tuple(args), value))

    def invoke(self, tid: int, op: str, args: Sequence[int] = ()) -> None:
        self._stamp(tid, INVOKE, op, args, None)

    def respond(self, tid: int, op: str, value: Any) -> None:
        self._stamp(tid, RESP, op, (), value)

    def call(self, tid: int, op: str, args: Sequence[int], fn: Callable[[], Any]) -> Any:
        self.invoke(tid, op, args)
        value = fn()
        self.respond(tid, op, value)
        return value

    @property
    def events(self) -> List[HistoryEvent]:
        with self._lock:
            return list(self._events)


def pair_events(events: Iterable[HistoryEvent]) -> List[Operation]:
    """Match each invoke with its tid's next response; validates alternation."""
    open_ops: Dict[int, Operation] = {}
    ops: List[Operation] = []
    last_ts = None
    for ev in sorted(events, key=lambda e: e.ts):
        if last_ts is not None and ev.ts == last_ts:
            raise ValueError(f"duplicate timestamp {ev.ts}")
        last_ts = ev.ts
        if ev.kind == INVOKE:
            if ev.tid in open_ops:
                raise ValueError(f"tid {ev.tid} invokes at ts {ev.ts} with an operation open")
            op = Operation(len(ops), ev.tid, ev.op, tuple(ev.args), None, ev.ts)
            open_ops[ev.tid] = op
            ops.append(op)
        elif ev.kind == RESP:
            op = open_ops.pop(ev.tid, None)
            if op is None or op.op != ev.op:
                raise ValueError(f"unmatched response at ts {ev.ts} for tid {ev.tid}")
            op.value = ev.value
            op.resp_ts = ev.ts
        else:
            raise ValueError(f"bad event kind {ev.kind!r}")
    return ops


def format_value(op: str, value: Any) -> str:
    if op == "snap":
        if not value.vertices:
            return "-"
        return ";".join(f"{k}:" + ",".join(map(str, value.out(k))) for k in value.vertices)
    if op == "bc":
        return "none" if value is None else str(value)
    if op == "diameter":
        return str(value)
    return value.name


def parse_value(op: str, token: str) -> Any:
    if op == "snap":
        if token == "-":
            return SnapshotResult()
        vs, es = [], []
        for part in token.split(";"):
            k, _, rest = part.partition(":")
            vs.append(int(k))
            es.extend((int(k), int(d)) for d in rest.split(",") if d)
        return SnapshotResult.from_sets(vs, es)
    if op == "bc":
        return None if token == "none" else int(token)
    if op == "diameter":
        return int(token)
    return OpResult[token]


def write_history(events: Iterable[HistoryEvent], path) -> None:
    with open(path, "w") as fh:
        for ev in sorted(events, key=lambda e: e.ts):
            if ev.kind == INVOKE:
                tail = " ".join(map(str, ev.args))
            else:
                tail = format_value(ev.op, ev.value)
            fh.write(f"{ev.ts} {ev.tid} {ev.kind} {ev.op}" + (f" {tail}" if tail else "") + "\n")


def read_history(path) -> List[HistoryEvent]:
    events = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            parts = line.split()
            if not parts:
                continue
            try:
                ts, tid, kind, op = int(parts[0]), int(parts[1]), parts[2], parts[3]
                if op not in ARITY:
                    raise ValueError(f"unknown op {op!r}")
                if kind == INVOKE:
                    args = tuple(int(a) for a in parts[4:])
                    if len(args) != ARITY[op]:
                        raise ValueError(f"{op} expects {ARITY[op]} args")
                    events.append(HistoryEvent(ts, tid, kind, op, args))
                elif kind == RESP:
                    events.append(HistoryEvent(ts, tid, kind, op, (), parse_value(op, parts[4])))
                else:
                    raise ValueError(f"bad kind {kind!r}")
            except (ValueError, IndexError, KeyError) as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
    return events
