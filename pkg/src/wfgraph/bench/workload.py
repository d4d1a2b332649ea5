"""Operation mixes and the per-worker operation generator."""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterator, Tuple

POINT_CLASSES = (
    "addVertex",
    "removeVertex",
    "containsVertex",
    "addEdge",
    "removeEdge",
    "containsEdge",
)
ANALYTICS_OPS = ("snapshot", "diameter", "bc")
ALL_CLASSES = POINT_CLASSES + ANALYTICS_OPS

MASK64 = (1 << 64) - 1


class SplitMix64:
    """64-bit SplitMix generator; tiny state, good enough for op streams."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)`` (rejection sampling, no modulo bias)."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next()
            if x < limit:
                return x % n

    @classmethod
    def for_worker(cls, seed: int, worker: int) -> "SplitMix64":
        mixer = cls(seed)
        for _ in range(worker + 1):
            s = mixer.next()
        return cls(s)


@dataclass(frozen=True)
class WorkloadProfile:
    """Relative weights over the six point operations plus one analytics op.

    Weights are normally percentages summing to 100, but the published mixes
    sum to 102, so draws are taken against the actual total.
    """

    add_vertex: int
    remove_vertex: int
    contains_vertex: int
    add_edge: int
    remove_edge: int
    contains_edge: int
    analytics_pct: int
    analytics_op: str = "snapshot"

    def __post_init__(self):
        pcts = self.percentages
        if any(not isinstance(p, int) or p < 0 for p in pcts):
            raise ValueError(f"percentages must be non-negative integers: {pcts}")
        if sum(pcts) <= 0:
            raise ValueError("percentages must not all be zero")
        if self.analytics_op not in ANALYTICS_OPS:
            raise ValueError(f"unknown analytics op {self.analytics_op!r}")

    @property
    def percentages(self) -> Tuple[int, ...]:
        return (
            self.add_vertex,
            self.remove_vertex,
            self.contains_vertex,
            self.add_edge,
            self.remove_edge,
            self.contains_edge,
            self.analytics_pct,
        )

    @property
    def classes(self) -> Tuple[str, ...]:
        return POINT_CLASSES + (self.analytics_op,)

    @property
    def total(self) -> int:
        return sum(self.percentages)

    def frequencies(self) -> Tuple[float, ...]:
        """Expected fraction of draws per class."""
        t = self.total
        return tuple(p / t for p in self.percentages)

    def with_analytics(self, op: str) -> "WorkloadProfile":
        return replace(self, analytics_op=op)

    def with_analytics_pct(self, pct: int) -> "WorkloadProfile":
        """Move the analytics share to ``pct`` by taking equally from both contains ops.

        An odd difference puts the extra unit on containsVertex.
        """
        if pct < 0:
            raise ValueError("analytics percentage must be non-negative")
        delta = pct - self.analytics_pct
        cv_cut = delta - delta // 2
        ce_cut = delta // 2
        return replace(
            self,
            contains_vertex=self.contains_vertex - cv_cut,
            contains_edge=self.contains_edge - ce_cut,
            analytics_pct=pct,
        )

    def draw(self, rng: SplitMix64) -> str:
        x = rng.below(self.total)
        for cls, p in zip(self.classes, self.percentages):
            if x < p:
                return cls
            x -= p
        raise AssertionError("unreachable")


READ_HEAVY = WorkloadProfile(3, 2, 45, 3, 2, 45, 2)
UPDATE_HEAVY = WorkloadProfile(12, 13, 25, 13, 12, 25, 2)
PROFILES = {"read-heavy": READ_HEAVY, "update-heavy": UPDATE_HEAVY}


def op_stream(
    profile: WorkloadProfile, seed: int, worker: int, key_space: int
) -> Iterator[Tuple[str, Tuple[int, ...]]]:
    """Endless deterministic ``(class, keys)`` stream for one worker."""
    if key_space < 2:
        raise ValueError("key_space must be at least 2")
    rng = SplitMix64.for_worker(seed, worker)
    while True:
        cls = profile.draw(rng)
        if cls in ("addVertex", "removeVertex", "containsVertex"):
            yield cls, (rng.below(key_space),)
        elif cls in ("addEdge", "removeEdge", "containsEdge"):
            k = rng.below(key_space)
            l = rng.below(key_space - 1)
            yield cls, (k, l + (l >= k))
        else:
            yield cls, ()
