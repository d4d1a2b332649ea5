"""Single-word atomic cells, mark-bit helpers and the thread registry.

CPython exposes no hardware CAS, so compare-and-set is emulated with a
striped table of short critical sections that only ever guard one
comparison plus one store.  Reads never take a lock: every cell keeps its
whole value in one attribute holding an immutable object, so a read can
never observe a torn ``(target, mark)`` pair.

Reclamation is delegated to CPython reference counting: an unlinked node
stays alive for as long as any reader still holds a reference to it, which
is exactly the guarantee a deferred-free list would give.
"""
from __future__ import annotations

import threading
from typing import Any, Generic, NamedTuple, Optional, TypeVar

T = TypeVar("T")

_N_STRIPES = 1024  # power of two
_STRIPE_MASK = _N_STRIPES - 1
_STRIPES = tuple(threading.Lock() for _ in range(_N_STRIPES))


def _stripe(obj: object) -> threading.Lock:
    return _STRIPES[(id(obj) >> 4) & _STRIPE_MASK]


class TaggedRef(NamedTuple):
    """A reference plus one logical-deletion bit, treated as one word."""

    target: Any
    mark: bool = False


def mark_tag(r: TaggedRef) -> TaggedRef:
    return r if r.mark else TaggedRef(r.target, True)


def clear_tag(r: TaggedRef) -> TaggedRef:
    return TaggedRef(r.target, False) if r.mark else r


def is_tagged(r: TaggedRef) -> bool:
    return r.mark


class AtomicMarkableRef:
    """Atomic cell holding a :class:`TaggedRef`.

    ``compare_and_set`` compares the target by identity and the mark by
    value, mirroring a CAS on a pointer word with a stolen low bit.
    """

    # readers may use ``value`` directly in hot loops; writers must CAS
    __slots__ = ("value",)

    def __init__(self, target: Any = None, mark: bool = False) -> None:
        self.value = TaggedRef(target, mark)

    def get(self) -> TaggedRef:
        return self.value

    @property
    def target(self) -> Any:
        return self.value.target

    @property
    def marked(self) -> bool:
        return self.value.mark

    def compare_and_set(
        self, expected_target: Any, expected_mark: bool, new_target: Any, new_mark: bool
    ) -> bool:
        with _STRIPES[(id(self) >> 4) & _STRIPE_MASK]:
            cur = self.value
            if cur.target is expected_target and cur.mark == expected_mark:
                self.value = TaggedRef(new_target, new_mark)
                return True
            return False

    def attempt_mark(self, expected_target: Any) -> bool:
        """Set the mark bit if the cell still holds ``(expected_target, 0)``."""
        return self.compare_and_set(expected_target, False, expected_target, True)

    def __repr__(self) -> str:
        t, m = self.value
        return f"AtomicMarkableRef({t!r}, mark={int(m)})"


class AtomicRef(Generic[T]):
    """Plain atomic reference with identity-based compare-and-set."""

    __slots__ = ("_value",)

    def __init__(self, value: Optional[T] = None) -> None:
        self._value = value

    def get(self) -> Optional[T]:
        return self._value

    def set(self, value: Optional[T]) -> None:
        self._value = value

    def compare_and_set(self, expected: Optional[T], new: Optional[T]) -> bool:
        with _stripe(self):
            if self._value is expected:
                self._value = new
                return True
            return False


class AtomicInt:
    """Atomic integer used for status words (compare-and-set on value)."""

    __slots__ = ("value",)

    def __init__(self, value: int = 0) -> None:
        self.value = value

    def get(self) -> int:
        return self.value

    def compare_and_set(self, expected: int, new: int) -> bool:
        with _stripe(self):
            if self.value == expected:
                self.value = new
                return True
            return False

    def fetch_add(self, delta: int = 1) -> int:
        with _stripe(self):
            old = self.value
            self.value = old + delta
            return old


class CapacityExhausted(RuntimeError):
    """Raised when more threads register than the registry has slots."""


class ThreadRegistry:
    """Hands out dense thread ids in ``[0, max_threads)``.

    Registration is a fetch-and-add on one counter; an id beyond capacity
    is rejected rather than wrapped, because report slots are indexed by it.
    """

    def __init__(self, max_threads: int = 128) -> None:
        if max_threads < 1:
            raise ValueError("max_threads must be positive")
        self.max_threads = max_threads
        self._next_slot = AtomicInt(0)

    def register_thread(self) -> int:
        tid = self._next_slot.fetch_add(1)
        if tid >= self.max_threads:
            raise CapacityExhausted(
                f"all {self.max_threads} thread slots are taken"
            )
        return tid

    @property
    def registered(self) -> int:
        return min(self._next_slot.get(), self.max_threads)
