"""Concurrent lock-free directed graph with a cooperative wait-free snapshot."""
from .atomics import CapacityExhausted, TaggedRef, ThreadRegistry, clear_tag, is_tagged, mark_tag
from .graph import ConcurrentGraph, OpResult
from .snapshot import ReportAction, SnapCollector, SnapshotResult

__all__ = [
    "CapacityExhausted",
    "ConcurrentGraph",
    "OpResult",
    "ReportAction",
    "SnapCollector",
    "SnapshotResult",
    "TaggedRef",
    "ThreadRegistry",
    "clear_tag",
    "is_tagged",
    "mark_tag",
]
