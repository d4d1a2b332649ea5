"""Sequential reference model of the graph ADT."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, FrozenSet, Tuple

from ..analytics import GraphView, betweenness_centrality, diameter
from ..graph import OpResult
from ..snapshot import SnapshotResult

R = OpResult

POINT_OPS = (
    "add_vertex",
    "remove_vertex",
    "contains_vertex",
    "add_edge",
    "remove_edge",
    "contains_edge",
)
SET_OPS = ("snap", "diameter", "bc")
OPS = POINT_OPS + SET_OPS
ARITY = {op: 1 for op in POINT_OPS[:3]}
ARITY.update({op: 2 for op in POINT_OPS[3:]})
ARITY.update({op: 0 for op in SET_OPS})


class MalformedOp(ValueError):
    pass


@dataclass(frozen=True)
class SeqGraphModel:
    vertices: FrozenSet[int] = frozenset()
    edges: FrozenSet[Tuple[int, int]] = frozenset()

    @property
    def sorted_vertices(self) -> Tuple[int, ...]:
        return tuple(sorted(self.vertices))

    @property
    def adjacency(self) -> Dict[int, Tuple[int, ...]]:
        adj: Dict[int, list] = {v: [] for v in self.vertices}
        for a, b in self.edges:
            adj[a].append(b)
        return {v: tuple(sorted(adj[v])) for v in sorted(adj)}

    def snapshot(self) -> SnapshotResult:
        return SnapshotResult.from_sets(self.vertices, self.edges)

    def view(self) -> GraphView:
        return GraphView.from_snapshot(self.snapshot())


def seq_apply(model: SeqGraphModel, op: str, args: Tuple[int, ...] = ()) -> Tuple[Any, SeqGraphModel]:
    """Apply one ADT operation; returns ``(value, next_model)``."""
    if op not in ARITY:
        raise MalformedOp(f"unknown operation {op!r}")
    if len(args) != ARITY[op]:
        raise MalformedOp(f"{op} takes {ARITY[op]} argument(s), got {len(args)}")
    V, E = model.vertices, model.edges

    if op == "add_vertex":
        (k,) = args
        if k in V:
            return R.VERTEX_ALREADY_PRESENT, model
        return R.VERTEX_ADDED, SeqGraphModel(V | {k}, E)
    if op == "remove_vertex":
        (k,) = args
        if k not in V:
            return R.VERTEX_NOT_PRESENT, model
        return R.VERTEX_REMOVED, SeqGraphModel(
            V - {k}, frozenset(e for e in E if k not in e)
        )
    if op == "contains_vertex":
        (k,) = args
        return (R.VERTEX_PRESENT if k in V else R.VERTEX_NOT_PRESENT), model

    if op in ("add_edge", "remove_edge", "contains_edge"):
        k, l = args
        if k == l:
            raise MalformedOp(f"{op}({k}, {l}) is a self-loop")
        if k not in V or l not in V:
            return R.VERTEX_NOT_PRESENT, model
        present = (k, l) in E
        if op == "add_edge":
            if present:
                return R.EDGE_PRESENT, model
            return R.EDGE_ADDED, SeqGraphModel(V, E | {(k, l)})
        if op == "remove_edge":
            if not present:
                return R.EDGE_NOT_PRESENT, model
            return R.EDGE_REMOVED, SeqGraphModel(V, E - {(k, l)})
        return (R.EDGE_PRESENT if present else R.EDGE_NOT_PRESENT), model

    if op == "snap":
        return model.snapshot(), model
    if op == "diameter":
        return diameter(model.view()), model
    # bc
    return betweenness_centrality(model.view())[1], model
