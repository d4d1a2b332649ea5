"""Correctness and progress verification for the concurrent graph."""
from .history import HistoryEvent, HistoryRecorder, Operation, pair_events, read_history, write_history
from .linearizability import BudgetExceeded, Verdict, check_linearizable
from .model import MalformedOp, SeqGraphModel, seq_apply
from .stall import StallPlan, StallReport, run_stall_test

__all__ = [
    "BudgetExceeded",
    "HistoryEvent",
    "HistoryRecorder",
    "MalformedOp",
    "Operation",
    "SeqGraphModel",
    "StallPlan",
    "StallReport",
    "Verdict",
    "check_linearizable",
    "pair_events",
    "read_history",
    "run_stall_test",
    "seq_apply",
    "write_history",
]
