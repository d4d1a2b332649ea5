"""Timed multi-threaded workload runs and their CSV metrics."""
from __future__ import annotations

import csv
import io
import random
import threading
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from ..analytics import GraphView, betweenness_centrality, diameter
from ..graph import ConcurrentGraph
from .dataset import load_snap_edge_list
from .workload import ALL_CLASSES, READ_HEAVY, WorkloadProfile, op_stream

ENGINES = ("waitfree", "baseline")


@dataclass
class BenchConfig:
    threads: int = 4
    duration_seconds: float = 5.0
    initial_vertices: int = 10_000
    initial_edges: int = 20_000
    # defaults to twice the initial vertex count (or max dataset id + 1)
    key_space: Optional[int] = None
    seed: int = 0
    profile: WorkloadProfile = READ_HEAVY
    engine: str = "waitfree"
    dataset_path: Optional[str] = None

    def validate(self) -> None:
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
        if not self.duration_seconds > 0:
            raise ValueError("duration must be positive")
        if self.engine not in ENGINES:
            raise ValueError(f"engine must be one of {ENGINES}")
        if self.dataset_path is None:
            if self.initial_vertices < 0 or self.initial_edges < 0:
                raise ValueError("initial sizes must be non-negative")
            ks = self.resolved_key_space()
            if ks < 2:
                raise ValueError("key space must hold at least 2 keys")
            if self.initial_vertices > ks:
                raise ValueError("initial_vertices exceeds key space")
            v = self.initial_vertices
            if self.initial_edges > v * (v - 1):
                raise ValueError("initial_edges exceeds what initial_vertices can hold")

    def resolved_key_space(self, dataset_keys: Sequence[int] = ()) -> int:
        if self.key_space is not None:
            return self.key_space
        if dataset_keys:
            return max(max(dataset_keys) + 1, 2)
        return max(2 * self.initial_vertices, 2)


@dataclass
class MetricsRecord:
    counts: Dict[str, int] = field(default_factory=dict)
    total_ns: Dict[str, int] = field(default_factory=dict)

    def add(self, cls: str, ns: int) -> None:
        self.counts[cls] = self.counts.get(cls, 0) + 1
        self.total_ns[cls] = self.total_ns.get(cls, 0) + ns

    def merge(self, other: "MetricsRecord") -> "MetricsRecord":
        for cls, c in other.counts.items():
            self.counts[cls] = self.counts.get(cls, 0) + c
            self.total_ns[cls] = self.total_ns.get(cls, 0) + other.total_ns[cls]
        return self

    def count(self, cls: str) -> int:
        return self.counts.get(cls, 0)

    def avg_us(self, cls: str) -> float:
        c = self.count(cls)
        return self.total_ns.get(cls, 0) / c / 1000.0 if c else 0.0

    @property
    def total_ops(self) -> int:
        return sum(self.counts.values())

    @property
    def average_micros_per_op(self) -> float:
        n = self.total_ops
        return sum(self.total_ns.values()) / n / 1000.0 if n else 0.0

    def classes(self) -> List[str]:
        known = [c for c in ALL_CLASSES if self.count(c)]
        return known + sorted(c for c in self.counts if c not in ALL_CLASSES and self.count(c))

    def __eq__(self, other) -> bool:
        if not isinstance(other, MetricsRecord):
            return NotImplemented
        keep = lambda d, r: {k: v for k, v in d.items() if r.count(k)}
        return keep(self.counts, self) == keep(other.counts, other) and keep(
            self.total_ns, self
        ) == keep(other.total_ns, other)


def emit_csv(record: MetricsRecord, path) -> None:
    """Summary rows under ``metric,value`` then one ``class,count,avg_us`` row per class."""
    with open(path, "w", newline="") as fh:
        fh.write(format_csv(record))


def format_csv(record: MetricsRecord) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["metric", "value"])
    if record.total_ops:
        w.writerow(["total_ops", record.total_ops])
        w.writerow(["avg_us", repr(record.average_micros_per_op)])
        w.writerow(["class", "count", "avg_us"])
        for cls in record.classes():
            w.writerow([cls, record.count(cls), repr(record.avg_us(cls))])
    return buf.getvalue()


def parse_csv(path) -> MetricsRecord:
    rec = MetricsRecord()
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    in_classes = False
    for row in rows[1:]:
        if row == ["class", "count", "avg_us"]:
            in_classes = True
            continue
        if in_classes:
            cls, c, avg = row[0], int(row[1]), float(row[2])
            rec.counts[cls] = c
            rec.total_ns[cls] = round(avg * 1000.0 * c)
    return rec


def populate(cfg: BenchConfig) -> Tuple[ConcurrentGraph, int]:
    """Build the starting graph; returns it with the key space for the run."""
    g = ConcurrentGraph(max_threads=cfg.threads + 1)
    if cfg.dataset_path is not None:
        keys, edges = load_snap_edge_list(cfg.dataset_path)
        g.bulk_load(keys, edges)
        return g, cfg.resolved_key_space(keys)
    ks = cfg.resolved_key_space()
    rng = random.Random(cfg.seed)
    keys = rng.sample(range(ks), cfg.initial_vertices)
    edges = set()
    n = len(keys)
    while len(edges) < cfg.initial_edges:
        a, b = keys[rng.randrange(n)], keys[rng.randrange(n)]
        if a != b:
            edges.add((a, b))
    g.bulk_load(keys, sorted(edges))
    return g, ks


def _analytics(graph: ConcurrentGraph, engine: str, op: str, tid: int):
    snap = graph.take_snapshot(tid) if engine == "waitfree" else graph.take_private_snapshot(tid)
    if op == "snapshot":
        return snap
    view = GraphView.from_snapshot(snap)
    if op == "diameter":
        return diameter(view)
    return betweenness_centrality(view)[1]


_POINT = {
    "addVertex": "add_vertex",
    "removeVertex": "remove_vertex",
    "containsVertex": "contains_vertex",
    "addEdge": "add_edge",
    "removeEdge": "remove_edge",
    "containsEdge": "contains_edge",
}


def run_benchmark(cfg: BenchConfig) -> MetricsRecord:
    cfg.validate()
    graph, key_space = populate(cfg)
    tids = [graph.register_thread() for _ in range(cfg.threads)]
    start = threading.Barrier(cfg.threads + 1)
    records = [MetricsRecord() for _ in tids]
    errors: List[BaseException] = []
    stop_at = [0.0]

    def worker(i: int, tid: int) -> None:
        rec = records[i]
        stream = op_stream(cfg.profile, cfg.seed, i, key_space)
        clock = time.perf_counter_ns
        try:
            start.wait()
            deadline = stop_at[0]
            for cls, args in stream:
                if cls in _POINT:
                    fn = getattr(graph, _POINT[cls])
                    t0 = clock()
                    fn(*args, tid)
                else:
                    t0 = clock()
                    _analytics(graph, cfg.engine, cls, tid)
                rec.add(cls, clock() - t0)
                if time.monotonic() >= deadline:
                    break
        except BaseException as exc:
            errors.append(exc)

    threads = [threading.Thread(target=worker, args=(i, t)) for i, t in enumerate(tids)]
    for t in threads:
        t.start()
    stop_at[0] = time.monotonic() + cfg.duration_seconds
    start.wait()
    for t in threads:
        t.join()
    if errors:
        raise errors[0]
    total = MetricsRecord()
    for r in records:
        total.merge(r)
    return total
