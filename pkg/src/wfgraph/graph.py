"""Lock-free directed graph: sorted vertex list, one sorted edge list per vertex.

Both levels are Harris-style lists.  A node is logically deleted by setting
the mark bit on its own successor link and only then physically unlinked.
Every operation forwards what it observes to any active snap-collector:
INSERT for a live node it decided on, DELETE for a marked node it saw (and
always before unlinking that node).
"""
from __future__ import annotations

import enum
from typing import List, Optional, Tuple

from .atomics import AtomicMarkableRef, AtomicRef, ThreadRegistry
from .nodes import KEY_MAX, ENode, VNode, check_key, make_vertex_list
from .snapshot import (
    ReportAction,
    SnapshotResult,
    report_edge,
    report_vertex,
    take_private_snapshot,
    take_snapshot,
)

INSERT = ReportAction.INSERT
DELETE = ReportAction.DELETE


class OpResult(enum.Enum):
    VERTEX_ADDED = "VERTEX_ADDED"
    VERTEX_ALREADY_PRESENT = "VERTEX_ALREADY_PRESENT"
    VERTEX_REMOVED = "VERTEX_REMOVED"
    VERTEX_NOT_PRESENT = "VERTEX_NOT_PRESENT"
    VERTEX_PRESENT = "VERTEX_PRESENT"
    EDGE_ADDED = "EDGE_ADDED"
    EDGE_PRESENT = "EDGE_PRESENT"
    EDGE_REMOVED = "EDGE_REMOVED"
    EDGE_NOT_PRESENT = "EDGE_NOT_PRESENT"
    # same value, so this is an alias of EDGE_PRESENT
    EDGE_FOUND = "EDGE_PRESENT"


def _distinct(k: int, l: int) -> None:
    check_key(k)
    check_key(l)
    if k == l:
        raise ValueError(f"self-loop ({k}, {k}) is not supported")


class ConcurrentGraph:
    """Unbounded directed graph safe for concurrent use by registered threads.

    Every operation takes the caller's ``tid`` from :meth:`register_thread`;
    it selects the report slot the thread writes into.
    """

    def __init__(self, max_threads: int = 128):
        self.registry = ThreadRegistry(max_threads)
        self.vh = make_vertex_list()
        self.psc = AtomicRef(None)
        # collectors of non-cooperative snapshots in flight (copy-on-write)
        self.private_collectors: AtomicRef[tuple] = AtomicRef(())

    @property
    def max_threads(self) -> int:
        return self.registry.max_threads

    def register_thread(self) -> int:
        return self.registry.register_thread()

    def bulk_load(self, keys, edges) -> None:
        """Link a whole starting graph directly; only valid on an empty, unshared graph."""
        if self.vh.vnxt.target.k != KEY_MAX:
            raise RuntimeError("bulk_load needs an empty graph")
        nodes = {}
        tail = self.vh.vnxt.target
        nxt = tail
        for k in sorted(set(keys), reverse=True):
            check_key(k)
            nxt = nodes[k] = VNode(k, nxt)
        out = {}
        for a, b in edges:
            if a == b:
                raise ValueError(f"self-loop ({a}, {a}) is not supported")
            if a not in nodes or b not in nodes:
                raise ValueError(f"edge ({a}, {b}) references a missing vertex")
            out.setdefault(a, set()).add(b)
        for a, ds in out.items():
            u = nodes[a]
            e = u.ehead.enext.target
            for b in sorted(ds, reverse=True):
                e = ENode(b, nodes[b], e)
            u.ehead.enext = AtomicMarkableRef(e)
        self.vh.vnxt = AtomicMarkableRef(nxt)

    # -- locate helpers ----------------------------------------------------

    def loc_v(self, start: VNode, k: int, tid: int) -> Tuple[VNode, VNode]:
        """Return adjacent ``(pv, cv)`` with ``pv.k < k <= cv.k``, cv unmarked when read.

        Marked vertices met on the way are delete-reported and unlinked.
        """
        while True:
            pv = start
            cv = pv.vnxt.value[0]
            while True:
                cn, marked = cv.vnxt.value
                while marked:
                    report_vertex(self, cv, DELETE, tid)
                    if not pv.vnxt.compare_and_set(cv, False, cn, False):
                        break
                    cv = cn
                    cn, marked = cv.vnxt.value
                else:
                    if cv.k >= k:
                        return pv, cv
                    pv, cv = cv, cn
                    continue
                break
            if start.vnxt.marked:
                start = self.vh

    def loc_e(self, u: VNode, l: int, tid: int) -> Tuple[ENode, ENode]:
        """Return adjacent ``(pe, ce)`` in ``u``'s edge list with ``pe.l < l <= ce.l``.

        An edge whose destination vertex is marked is itself marked first, so
        mark-before-unlink holds for every edge.
        """
        while True:
            pe = u.ehead
            ce = pe.enext.value[0]
            while True:
                cnt, marked = ce.enext.value
                if not marked and ce.ptv is not None and ce.ptv.vnxt.marked:
                    report_edge(self, ce, DELETE, tid, u)
                    if not ce.enext.compare_and_set(cnt, False, cnt, True):
                        break
                    marked = True
                if marked:
                    report_edge(self, ce, DELETE, tid, u)
                    if not pe.enext.compare_and_set(ce, False, cnt, False):
                        break
                    ce = cnt
                    continue
                if ce.l >= l:
                    return pe, ce
                pe, ce = ce, cnt

    def loc_c(self, start: VNode, k: int) -> Tuple[VNode, VNode]:
        """Read-only traversal: no CAS, no unlinking, no reports."""
        pv = start
        cv = pv.vnxt.value[0]
        while cv.k < k:
            pv, cv = cv, cv.vnxt.value[0]
        return pv, cv

    def con_v_plus(self, k: int, l: int, tid: int) -> Tuple[Optional[VNode], Optional[VNode], bool]:
        if k < l:
            _, cv1 = self.loc_v(self.vh, k, tid)
            if cv1.k != k:
                return None, None, False
            _, cv2 = self.loc_v(cv1, l, tid)
            if cv2.k != l:
                return None, None, False
        else:
            _, cv2 = self.loc_v(self.vh, l, tid)
            if cv2.k != l:
                return None, None, False
            _, cv1 = self.loc_v(cv2, k, tid)
            if cv1.k != k:
                return None, None, False
        return cv1, cv2, True

    def con_c_plus(self, k: int, l: int) -> Tuple[Optional[VNode], Optional[VNode], bool]:
        if k < l:
            _, cv1 = self.loc_c(self.vh, k)
            if cv1.k != k:
                return None, None, False
            _, cv2 = self.loc_c(cv1, l)
            if cv2.k != l:
                return None, None, False
        else:
            _, cv2 = self.loc_c(self.vh, l)
            if cv2.k != l:
                return None, None, False
            _, cv1 = self.loc_c(cv2, k)
            if cv1.k != k:
                return None, None, False
        return cv1, cv2, True

    # -- vertex operations -------------------------------------------------

    def add_vertex(self, k: int, tid: int) -> OpResult:
        check_key(k)
        while True:
            pv, cv = self.loc_v(self.vh, k, tid)
            if cv.k == k:
                report_vertex(self, cv, INSERT, tid)
                return OpResult.VERTEX_ALREADY_PRESENT
            nv = VNode(k, cv)
            if pv.vnxt.compare_and_set(cv, False, nv, False):
                report_vertex(self, nv, INSERT, tid)
                return OpResult.VERTEX_ADDED

    def remove_vertex(self, k: int, tid: int) -> OpResult:
        check_key(k)
        while True:
            pv, cv = self.loc_v(self.vh, k, tid)
            if cv.k != k:
                return OpResult.VERTEX_NOT_PRESENT
            cn, marked = cv.vnxt.get()
            if marked:
                continue
            if cv.vnxt.compare_and_set(cn, False, cn, True):
                report_vertex(self, cv, DELETE, tid)
                pv.vnxt.compare_and_set(cv, False, cn, False)
                return OpResult.VERTEX_REMOVED

    def contains_vertex(self, k: int, tid: int) -> OpResult:
        check_key(k)
        cv = self.vh.vnxt.value[0]
        while cv.k < k:
            cv = cv.vnxt.value[0]
        if cv.k == k:
            if not cv.vnxt.marked:
                report_vertex(self, cv, INSERT, tid)
                return OpResult.VERTEX_PRESENT
            report_vertex(self, cv, DELETE, tid)
        return OpResult.VERTEX_NOT_PRESENT

    # -- edge operations ---------------------------------------------------

    def add_edge(self, k: int, l: int, tid: int) -> OpResult:
        _distinct(k, l)
        u, v, ok = self.con_v_plus(k, l, tid)
        if not ok:
            return OpResult.VERTEX_NOT_PRESENT
        while True:
            if u.vnxt.marked:
                report_vertex(self, u, DELETE, tid)
                return OpResult.VERTEX_NOT_PRESENT
            if v.vnxt.marked:
                report_vertex(self, v, DELETE, tid)
                return OpResult.VERTEX_NOT_PRESENT
            pe, ce = self.loc_e(u, l, tid)
            if ce.l == l:
                report_edge(self, ce, INSERT, tid, u)
                return OpResult.EDGE_PRESENT
            ne = ENode(l, v, ce)
            if pe.enext.compare_and_set(ce, False, ne, False):
                report_edge(self, ne, INSERT, tid, u)
                return OpResult.EDGE_ADDED

    def remove_edge(self, k: int, l: int, tid: int) -> OpResult:
        _distinct(k, l)
        u, v, ok = self.con_v_plus(k, l, tid)
        if not ok:
            return OpResult.VERTEX_NOT_PRESENT
        while True:
            if u.vnxt.marked:
                report_vertex(self, u, DELETE, tid)
                return OpResult.VERTEX_NOT_PRESENT
            if v.vnxt.marked:
                report_vertex(self, v, DELETE, tid)
                return OpResult.VERTEX_NOT_PRESENT
            pe, ce = self.loc_e(u, l, tid)
            if ce.l != l:
                return OpResult.EDGE_NOT_PRESENT
            cnt, marked = ce.enext.get()
            if marked:
                continue
            if ce.enext.compare_and_set(cnt, False, cnt, True):
                report_edge(self, ce, DELETE, tid, u)
                pe.enext.compare_and_set(ce, False, cnt, False)
                return OpResult.EDGE_REMOVED

    def contains_edge(self, k: int, l: int, tid: int) -> OpResult:
        _distinct(k, l)
        u, v, ok = self.con_c_plus(k, l)
        if not ok:
            return OpResult.VERTEX_NOT_PRESENT
        ce = u.ehead.enext.value[0]
        while ce.l < l:
            ce = ce.enext.value[0]
        if (
            ce.l == l
            and not u.vnxt.marked
            and not v.vnxt.marked
            and not ce.enext.marked
            and ce.ptv is v
        ):
            report_edge(self, ce, INSERT, tid, u)
            return OpResult.EDGE_PRESENT
        if u.vnxt.marked:
            report_vertex(self, u, DELETE, tid)
            return OpResult.VERTEX_NOT_PRESENT
        if v.vnxt.marked:
            report_vertex(self, v, DELETE, tid)
            return OpResult.VERTEX_NOT_PRESENT
        if ce.l == l:
            # marked, or it points at an older generation of vertex l
            report_edge(self, ce, DELETE, tid, u)
        return OpResult.EDGE_NOT_PRESENT

    # -- snapshots ---------------------------------------------------------

    def take_snapshot(self, tid: int) -> SnapshotResult:
        return take_snapshot(self, tid)

    def take_private_snapshot(self, tid: int) -> SnapshotResult:
        return take_private_snapshot(self, tid)

    # -- direct reads (exact only when quiescent) ---------------------------

    def _live_vertices(self) -> List[VNode]:
        out = []
        cv = self.vh.vnxt.target
        while cv.k != KEY_MAX:
            if not cv.vnxt.marked:
                out.append(cv)
            cv = cv.vnxt.target
        return out

    def read_state(self) -> SnapshotResult:
        """Sequential read of the abstract graph; not atomic under concurrency."""
        verts = self._live_vertices()
        adj = {}
        for u in verts:
            ds = []
            e = u.ehead.enext.target
            while e.l != KEY_MAX:
                if not e.enext.marked and not e.ptv.vnxt.marked:
                    ds.append(e.l)
                e = e.enext.target
            adj[u.k] = tuple(ds)
        return SnapshotResult(tuple(u.k for u in verts), adj)

    def check_structure(self) -> None:
        """Assert the quiescent-state list invariants; raises AssertionError."""
        prev = self.vh
        cv = prev.vnxt.target
        assert not self.vh.vnxt.marked
        while cv is not None:
            assert cv.k > prev.k, f"vertex list out of order at {prev.k}, {cv.k}"
            if cv.k != KEY_MAX:
                pe = cv.ehead
                ce = pe.enext.target
                while ce is not None:
                    assert ce.l > pe.l, f"edge list of {cv.k} out of order"
                    pe, ce = ce, ce.enext.target
            prev, cv = cv, cv.vnxt.target
        assert prev.k == KEY_MAX
