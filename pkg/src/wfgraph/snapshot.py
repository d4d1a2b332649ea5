"""Cooperative snap-collector for the concurrent graph.

Every thread calling :func:`take_snapshot` while a collector is active works
on that same collector.  Point operations forward what they observe (an
INSERT for a node they found live, a DELETE for a node they found marked)
into per-thread report stacks on the collector.  Once the collected chains
and the report stacks are frozen, all callers derive one agreed result.

Phases, each helpable and idempotent:

1. collect the live vertices into an ascending chain of ``SnapVnode``;
2. distribute the per-vertex edge walks (``iter_edge_status``), then help
   any walk left ``ACTIVE`` by a slow thread;
3. deactivate (the snapshot's linearization point) and block every report
   slot;
4. rebuild the graph from collected nodes plus reports, per-vertex work
   distributed through ``edge_status`` with the same helping pass;
5. publish the result once; every caller returns the published object.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from . import hooks
from .atomics import AtomicInt, AtomicMarkableRef, AtomicRef
from .nodes import KEY_MAX, KEY_MIN, ENode, VNode


class ReportAction(enum.IntEnum):
    INSERT = 1
    DELETE = 2


IDLE, ACTIVE, DONE = 0, 1, 2


class VReport:
    __slots__ = ("vnode", "action", "next_report")

    def __init__(self, vnode: VNode, action: ReportAction, next_report: Optional["VReport"]):
        self.vnode = vnode
        self.action = action
        self.next_report = next_report

    def __repr__(self) -> str:
        return f"VReport({self.vnode.k}, {self.action.name})"


class EReport:
    __slots__ = ("enode", "source", "action", "next_report")

    def __init__(
        self,
        enode: ENode,
        source: VNode,
        action: ReportAction,
        next_report: Optional["EReport"],
    ):
        self.enode = enode
        self.source = source
        self.action = action
        self.next_report = next_report

    def __repr__(self) -> str:
        return f"EReport({self.source.k}->{self.enode.l}, {self.action.name})"


class SnapEnode:
    __slots__ = ("enode", "enext", "l")

    def __init__(self, enode: Optional[ENode]):
        self.enode = enode
        self.enext = AtomicMarkableRef(None)
        self.l = KEY_MIN if enode is None else enode.l


class SnapVnode:
    __slots__ = (
        "vnode",
        "vnext",
        "head_enode",
        "edge_status",
        "iter_edge_status",
        "recon_edges",
        "k",
    )

    def __init__(self, vnode: Optional[VNode]):
        self.vnode = vnode
        self.k = KEY_MIN if vnode is None else vnode.k
        self.vnext = AtomicMarkableRef(None)
        self.head_enode = SnapEnode(None)
        self.edge_status = AtomicInt(IDLE)
        self.iter_edge_status = AtomicInt(IDLE)
        # write-once reconstructed destination keys for this vertex
        self.recon_edges: AtomicRef[Tuple[int, ...]] = AtomicRef(None)


@dataclass(frozen=True)
class SnapshotResult:
    """A consistent graph state: sorted vertex keys and sorted out-lists."""

    vertices: Tuple[int, ...] = ()
    edges: Mapping[int, Tuple[int, ...]] = field(default_factory=dict)

    def __post_init__(self):
        vs = set(self.vertices)
        for src, dsts in self.edges.items():
            if src not in vs or any(d not in vs for d in dsts):
                raise ValueError(f"edge list of {src} references a missing vertex")

    @classmethod
    def from_sets(cls, vertices: Iterable[int], edges: Iterable[Tuple[int, int]]) -> "SnapshotResult":
        vs = tuple(sorted(set(vertices)))
        adj: Dict[int, set] = {v: set() for v in vs}
        for a, b in edges:
            adj[a].add(b)
        return cls(vs, {v: tuple(sorted(adj[v])) for v in vs})

    def out(self, k: int) -> Tuple[int, ...]:
        return self.edges.get(k, ())

    def edge_set(self) -> frozenset:
        return frozenset((a, b) for a, ds in self.edges.items() for b in ds)

    def state(self) -> Tuple[frozenset, frozenset]:
        return frozenset(self.vertices), self.edge_set()

    def n_edges(self) -> int:
        return sum(len(ds) for ds in self.edges.values())

    def to_text(self) -> str:
        """One line per vertex, ``key: d1 d2 ...``."""
        lines = []
        for v in self.vertices:
            ds = self.out(v)
            lines.append(f"{v}:" + "".join(f" {d}" for d in ds))
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def from_text(cls, text: str) -> "SnapshotResult":
        vs, es = [], []
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            head, sep, rest = line.partition(":")
            if not sep:
                raise ValueError(f"line {lineno}: missing ':'")
            try:
                v = int(head)
                ds = [int(t) for t in rest.split()]
            except ValueError as exc:
                raise ValueError(f"line {lineno}: {exc}") from None
            vs.append(v)
            es.extend((v, d) for d in ds)
        return cls.from_sets(vs, es)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SnapshotResult):
            return NotImplemented
        return self.vertices == other.vertices and dict(self.edges) == dict(other.edges)

    def __hash__(self) -> int:
        return hash((self.vertices, tuple(sorted(self.edges.items()))))


def _push(slot: AtomicMarkableRef, make) -> bool:
    # Only the owning tid pushes onto a slot, so a CAS failure means the
    # slot was blocked in the meantime.
    while True:
        head, blocked = slot.get()
        if blocked:
            return False
        if slot.compare_and_set(head, False, make(head), False):
            return True


class SnapCollector:
    def __init__(self, max_threads: int):
        self.max_threads = max_threads
        self.active = True
        self.v_reports = [AtomicMarkableRef(None) for _ in range(max_threads)]
        self.e_reports = [AtomicMarkableRef(None) for _ in range(max_threads)]
        self.reconstruct_done = False
        self.head_vnode = SnapVnode(None)
        self._merged_v: AtomicRef[tuple] = AtomicRef(None)
        self._merged_e: AtomicRef[tuple] = AtomicRef(None)
        self._members: AtomicRef[dict] = AtomicRef(None)
        self._e_index: AtomicRef[tuple] = AtomicRef(None)
        self.result: AtomicRef[SnapshotResult] = AtomicRef(None)

    def is_active(self) -> bool:
        return self.active

    def deactivate(self) -> None:
        self.active = False

    # -- report channels ---------------------------------------------------

    def push_vreport(self, vnode: VNode, action: ReportAction, tid: int) -> bool:
        return _push(self.v_reports[tid], lambda nxt: VReport(vnode, action, nxt))

    def push_ereport(self, enode: ENode, action: ReportAction, tid: int, source: VNode) -> bool:
        return _push(self.e_reports[tid], lambda nxt: EReport(enode, source, action, nxt))

    def block_further_reports(self) -> None:
        for slots in (self.e_reports, self.v_reports):
            for slot in slots:
                while True:
                    head, blocked = slot.get()
                    if blocked or slot.compare_and_set(head, False, head, True):
                        break

    @staticmethod
    def _chain(slot: AtomicMarkableRef) -> list:
        out = []
        r = slot.target
        while r is not None:
            out.append(r)
            r = r.next_report
        return out

    def vreport_chain(self, tid: int) -> List[VReport]:
        """Reports in slot ``tid``, newest first."""
        return self._chain(self.v_reports[tid])

    def ereport_chain(self, tid: int) -> List[EReport]:
        return self._chain(self.e_reports[tid])

    def _read_merged(self, cell: AtomicRef, slots, key) -> tuple:
        merged = cell.get()
        if merged is None:
            reports = [r for slot in slots for r in self._chain(slot)]
            reports.sort(key=key)
            cell.compare_and_set(None, tuple(reports))
            merged = cell.get()
        return merged

    def read_vreports(self) -> Tuple[VReport, ...]:
        return self._read_merged(
            self._merged_v, self.v_reports, lambda r: (r.vnode.k, id(r.vnode), r.action)
        )

    def read_ereports(self) -> Tuple[EReport, ...]:
        return self._read_merged(
            self._merged_e,
            self.e_reports,
            lambda r: (r.source.k, r.enode.l, id(r.enode), r.action),
        )

    # -- collected chains --------------------------------------------------

    def read_collected_vnodes(self) -> List[SnapVnode]:
        out = []
        sv = self.head_vnode.vnext.target
        while sv is not None:
            out.append(sv)
            sv = sv.vnext.value[0]
        return out

    @staticmethod
    def read_collected_enodes(sv: SnapVnode) -> List[SnapEnode]:
        out = []
        se = sv.head_enode.enext.target
        while se is not None:
            out.append(se)
            se = se.enext.value[0]
        return out

    @staticmethod
    def _block(node, attr: str) -> None:
        while True:
            cell = getattr(node, attr)
            nxt, blocked = cell.get()
            if nxt is not None:
                node = nxt
            elif blocked or cell.compare_and_set(None, False, None, True):
                return

    def block_vnodes(self) -> None:
        self._block(self.head_vnode, "vnext")

    def block_further_enodes(self, sv: SnapVnode) -> None:
        self._block(sv.head_enode, "enext")

    def collect_vnode(self, vh: VNode) -> None:
        last = self.head_vnode
        curr = vh.vnxt.target
        while self.active and curr.k != KEY_MAX:
            while True:
                nxt, blocked = last.vnext.value
                if nxt is None:
                    break
                last = nxt
            if blocked:
                return
            if last.k >= curr.k:
                # another collector is ahead; resume after its last node
                curr = last.vnode.vnxt.value[0]
                continue
            nxt, marked = curr.vnxt.value
            if not marked:
                if not last.vnext.compare_and_set(None, False, SnapVnode(curr), False):
                    continue
            curr = nxt
        self.block_vnodes()

    def collect_enode(self, sv: SnapVnode) -> None:
        last = sv.head_enode
        curr = sv.vnode.ehead.enext.target
        while self.active and curr.l != KEY_MAX:
            while True:
                nxt, blocked = last.enext.value
                if nxt is None:
                    break
                last = nxt
            if blocked:
                return
            if last.l >= curr.l:
                curr = last.enode.enext.value[0]
                continue
            nxt, marked = curr.enext.value
            if not marked:
                if not last.enext.compare_and_set(None, False, SnapEnode(curr), False):
                    continue
            curr = nxt

    # -- iterator ----------------------------------------------------------

    def _finish_edges(self, sv: SnapVnode) -> None:
        self.collect_enode(sv)
        self.block_further_enodes(sv)
        sv.iter_edge_status.compare_and_set(ACTIVE, DONE)

    def iterator(self, vh: VNode, tid: int) -> None:
        self.collect_vnode(vh)
        hooks.stall_point(hooks.AFTER_COLLECT_VNODES, tid, collector=self)
        sv = self.head_vnode.vnext.target
        while sv is not None and self.active:
            st = sv.iter_edge_status
            # plain read first: claimed slots are skipped without a locked CAS
            if st.value == IDLE and st.compare_and_set(IDLE, ACTIVE):
                hooks.stall_point(hooks.ITER_CLAIM, tid, collector=self, key=sv.k)
                self._finish_edges(sv)
            sv = sv.vnext.value[0]
        # helping pass: redo walks a slower claimer left unfinished
        sv = self.head_vnode.vnext.target
        while sv is not None and self.active:
            if sv.iter_edge_status.value == ACTIVE:
                self._finish_edges(sv)
            sv = sv.vnext.value[0]

    # -- reconstruction ----------------------------------------------------

    def _vertex_members(self) -> Dict[int, VNode]:
        """id -> VNode for every vertex in the snapshot (memoized)."""
        members = self._members.get()
        if members is None:
            reports = self.read_vreports()
            deleted = {id(r.vnode) for r in reports if r.action is ReportAction.DELETE}
            cand: Dict[int, VNode] = {}
            for sv in self.read_collected_vnodes():
                cand[id(sv.vnode)] = sv.vnode
            for r in reports:
                if r.action is ReportAction.INSERT:
                    cand[id(r.vnode)] = r.vnode
            built = {i: n for i, n in cand.items() if i not in deleted}
            self._members.compare_and_set(None, built)
            members = self._members.get()
        return members

    def _edge_index(self) -> tuple:
        """(source id -> inserted ENodes, ids of delete-reported ENodes)."""
        idx = self._e_index.get()
        if idx is None:
            inserted: Dict[int, List[ENode]] = {}
            deleted = set()
            for r in self.read_ereports():
                if r.action is ReportAction.DELETE:
                    deleted.add(id(r.enode))
                else:
                    inserted.setdefault(id(r.source), []).append(r.enode)
            self._e_index.compare_and_set(None, (inserted, frozenset(deleted)))
            idx = self._e_index.get()
        return idx

    def _edges_of(self, vnode: VNode, collected: Iterable[ENode]) -> Tuple[int, ...]:
        members = self._vertex_members()
        inserted, deleted = self._edge_index()
        out = set()
        for lst in (collected, inserted.get(id(vnode), ())):
            for e in lst:
                if id(e) not in deleted and id(e.ptv) in members:
                    out.add(e.l)
        return tuple(sorted(out))

    def _reconstruct_vertex(self, sv: SnapVnode) -> None:
        if sv.recon_edges.get() is None:
            if id(sv.vnode) in self._vertex_members():
                edges = self._edges_of(
                    sv.vnode, (se.enode for se in self.read_collected_enodes(sv))
                )
            else:
                edges = ()
            sv.recon_edges.compare_and_set(None, edges)
        sv.edge_status.compare_and_set(ACTIVE, DONE)

    def reconstruction_using_reports(self, tid: int) -> SnapshotResult:
        self._vertex_members()
        self._edge_index()
        sv = self.head_vnode.vnext.target
        while sv is not None and not self.reconstruct_done:
            st = sv.edge_status
            if st.value == IDLE and st.compare_and_set(IDLE, ACTIVE):
                hooks.stall_point(hooks.RECON_CLAIM, tid, collector=self, key=sv.k)
                self._reconstruct_vertex(sv)
            sv = sv.vnext.value[0]
        sv = self.head_vnode.vnext.target
        while sv is not None and not self.reconstruct_done:
            if sv.edge_status.value != DONE:
                self._reconstruct_vertex(sv)
            sv = sv.vnext.value[0]
        if self.result.get() is None:
            self.result.compare_and_set(None, self._assemble())
        self.reconstruct_done = True
        return self.result.get()

    def _assemble(self) -> SnapshotResult:
        members = self._vertex_members()
        adj: Dict[int, set] = {}
        seen = set()
        for sv in self.read_collected_vnodes():
            if id(sv.vnode) not in members:
                continue
            seen.add(id(sv.vnode))
            edges = sv.recon_edges.get()
            if edges is None:
                edges = self._edges_of(
                    sv.vnode, (se.enode for se in self.read_collected_enodes(sv))
                )
            adj.setdefault(sv.vnode.k, set()).update(edges)
        # vertices known only through INSERT reports have no collected edges
        for i, vnode in members.items():
            if i not in seen:
                adj.setdefault(vnode.k, set()).update(self._edges_of(vnode, ()))
        keys = tuple(sorted(adj))
        return SnapshotResult(keys, {k: tuple(sorted(adj[k])) for k in keys})


# -- graph-facing entry points ---------------------------------------------


def _collectors(graph):
    sc = graph.psc.get()
    if sc is not None and sc.active:
        yield sc
    for sc in graph.private_collectors.get():
        if sc.active:
            yield sc


def report_vertex(graph, victim: VNode, action: ReportAction, tid: int) -> None:
    for sc in _collectors(graph):
        sc.push_vreport(victim, action, tid)


def report_edge(graph, victim: ENode, action: ReportAction, tid: int, source: VNode) -> None:
    for sc in _collectors(graph):
        sc.push_ereport(victim, action, tid, source)


def acquire_snap_collector(graph) -> SnapCollector:
    sc = graph.psc.get()
    if sc is not None and sc.active:
        return sc
    graph.psc.compare_and_set(sc, SnapCollector(graph.registry.max_threads))
    return graph.psc.get()


def _run(sc: SnapCollector, graph, tid: int) -> SnapshotResult:
    sc.iterator(graph.vh, tid)
    hooks.stall_point(hooks.BEFORE_DEACTIVATE, tid, collector=sc)
    sc.deactivate()
    sc.block_further_reports()
    res = sc.reconstruction_using_reports(tid)
    hooks.stall_point(hooks.SNAPSHOT_DONE, tid, collector=sc)
    return res


def take_snapshot(graph, tid: int) -> SnapshotResult:
    sc = acquire_snap_collector(graph)
    hooks.stall_point(hooks.SNAPSHOT_ACQUIRED, tid, collector=sc)
    return _run(sc, graph, tid)


def take_private_snapshot(graph, tid: int) -> SnapshotResult:
    """Non-cooperative snapshot: a collector only this caller ever works on.

    Point operations still report into it, so the result is consistent;
    what is lost is sharing the collection work with other callers.
    """
    sc = SnapCollector(graph.registry.max_threads)
    cell = graph.private_collectors
    while True:
        cur = cell.get()
        if cell.compare_and_set(cur, cur + (sc,)):
            break
    try:
        return _run(sc, graph, tid)
    finally:
        while True:
            cur = cell.get()
            if cell.compare_and_set(cur, tuple(c for c in cur if c is not sc)):
                break
