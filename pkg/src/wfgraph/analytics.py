"""Graph-set operations computed on a consistent snapshot."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .snapshot import SnapshotResult

UNREACHED = -1

# relative slack under which two float BC scores count as tied
TIE_TOL = 1e-9


@dataclass(frozen=True)
class GraphView:
    """Immutable dense-index form of a snapshot.

    ``ids[i]`` is the key of dense vertex ``i`` (ascending); ``adj[i]`` holds
    the sorted dense indices of its out-neighbours.
    """

    ids: Tuple[int, ...] = ()
    adj: Tuple[Tuple[int, ...], ...] = ()
    index: Dict[int, int] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if len(self.ids) != len(self.adj):
            raise ValueError("ids and adj lengths differ")
        if list(self.ids) != sorted(set(self.ids)):
            raise ValueError("ids must be strictly ascending")
        n = len(self.ids)
        for row in self.adj:
            if any(not 0 <= t < n for t in row):
                raise ValueError("adjacency target out of range")
        object.__setattr__(self, "index", {k: i for i, k in enumerate(self.ids)})

    @property
    def n(self) -> int:
        return len(self.ids)

    @classmethod
    def from_snapshot(cls, snap: SnapshotResult) -> "GraphView":
        ids = tuple(snap.vertices)
        index = {k: i for i, k in enumerate(ids)}
        adj = tuple(tuple(sorted(index[d] for d in snap.out(k))) for k in ids)
        return cls(ids, adj)

    @classmethod
    def from_edges(cls, keys: Sequence[int], edges: Sequence[Tuple[int, int]]) -> "GraphView":
        return cls.from_snapshot(SnapshotResult.from_sets(keys, edges))

    def to_snapshot(self) -> SnapshotResult:
        return SnapshotResult(
            self.ids, {k: tuple(self.ids[j] for j in row) for k, row in zip(self.ids, self.adj)}
        )

    def to_text(self) -> str:
        return self.to_snapshot().to_text()


def snap(graph, tid: int) -> GraphView:
    return GraphView.from_snapshot(graph.take_snapshot(tid))


def bfs_distances(g: GraphView, s: int) -> List[int]:
    if not 0 <= s < g.n:
        raise IndexError(f"source {s} out of range for n={g.n}")
    dist = [UNREACHED] * g.n
    dist[s] = 0
    q = deque([s])
    while q:
        v = q.popleft()
        dv = dist[v] + 1
        for w in g.adj[v]:
            if dist[w] == UNREACHED:
                dist[w] = dv
                q.append(w)
    return dist


def diameter(g: GraphView) -> int:
    """Longest shortest-path hop count over ordered reachable pairs.

    Unreachable pairs are ignored, so an edgeless or empty graph gives 0.
    """
    best = 0
    for s in range(g.n):
        best = max(best, max(bfs_distances(g, s)))
    return best


def betweenness_scores(g: GraphView) -> List[float]:
    """Brandes accumulation over the directed BFS DAG of every source."""
    n = g.n
    bc = [0.0] * n
    for s in range(n):
        sigma = [0] * n
        dist = [UNREACHED] * n
        preds: List[List[int]] = [[] for _ in range(n)]
        sigma[s] = 1
        dist[s] = 0
        order = []
        q = deque([s])
        while q:
            v = q.popleft()
            order.append(v)
            for w in g.adj[v]:
                if dist[w] == UNREACHED:
                    dist[w] = dist[v] + 1
                    q.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = [0.0] * n
        for w in reversed(order):
            coeff = (1.0 + delta[w]) / sigma[w]
            for v in preds[w]:
                delta[v] += sigma[v] * coeff
            if w != s:
                bc[w] += delta[w]
    return bc


def argmax_key(g: GraphView, scores: Sequence[float]) -> Optional[int]:
    """Key of the top-scoring vertex; ties (within TIE_TOL) go to the smallest key."""
    if not scores:
        return None
    top = max(scores)
    slack = TIE_TOL * max(1.0, abs(top))
    for i, s in enumerate(scores):
        if s >= top - slack:
            return g.ids[i]
    raise AssertionError("unreachable")


def betweenness_centrality(g: GraphView) -> Tuple[List[float], Optional[int]]:
    """Scores per dense index and the argmax key (``None`` for an empty graph)."""
    scores = betweenness_scores(g)
    return scores, argmax_key(g, scores)
