"""Benchmark harness: workload mixes, dataset ingestion, metrics."""
from .dataset import DatasetError, load_snap_edge_list
from .runner import BenchConfig, MetricsRecord, emit_csv, parse_csv, run_benchmark
from .workload import PROFILES, READ_HEAVY, UPDATE_HEAVY, SplitMix64, WorkloadProfile

__all__ = [
    "BenchConfig",
    "DatasetError",
    "MetricsRecord",
    "PROFILES",
    "READ_HEAVY",
    "SplitMix64",
    "UPDATE_HEAVY",
    "WorkloadProfile",
    "emit_csv",
    "load_snap_edge_list",
    "parse_csv",
    "run_benchmark",
]
