"""Vertex and edge nodes of the two-level adjacency list."""
from __future__ import annotations

from typing import Optional

from .atomics import AtomicMarkableRef

# Keys are 64-bit signed integers; the two extremes are reserved for sentinels.
KEY_MIN = -(2**63)
KEY_MAX = 2**63 - 1


def check_key(k: int) -> int:
    if not isinstance(k, int) or isinstance(k, bool):
        raise TypeError(f"vertex keys must be int, got {type(k).__name__}")
    if not KEY_MIN < k < KEY_MAX:
        raise ValueError(f"key {k} outside the usable 64-bit range")
    return k


class ENode:
    """Edge node; ``l`` is the destination key, ``ptv`` the destination VNode.

    ``enext`` carries the mark meaning *this* edge is logically deleted.
    """

    __slots__ = ("l", "ptv", "enext", "__weakref__")

    def __init__(self, l: int, ptv: Optional["VNode"] = None, nxt: Optional["ENode"] = None):
        self.l = l
        self.ptv = ptv
        self.enext = AtomicMarkableRef(nxt)

    def is_marked(self) -> bool:
        return self.enext.marked

    def __repr__(self) -> str:
        return f"ENode(l={self.l}, marked={int(self.enext.marked)})"


class VNode:
    """Vertex node; ``vnxt`` carries this vertex's logical-deletion mark."""

    __slots__ = ("k", "vnxt", "ehead", "__weakref__")

    def __init__(self, k: int, nxt: Optional["VNode"] = None):
        self.k = k
        self.vnxt = AtomicMarkableRef(nxt)
        tail = ENode(KEY_MAX)
        self.ehead = ENode(KEY_MIN, nxt=tail)

    def is_marked(self) -> bool:
        return self.vnxt.marked

    def __repr__(self) -> str:
        return f"VNode(k={self.k}, marked={int(self.vnxt.marked)})"


def make_vertex_list() -> VNode:
    """Return the head sentinel of an empty vertex list."""
    tail = VNode.__new__(VNode)
    tail.k = KEY_MAX
    tail.vnxt = AtomicMarkableRef(None)
    tail.ehead = None
    head = VNode.__new__(VNode)
    head.k = KEY_MIN
    head.vnxt = AtomicMarkableRef(tail)
    head.ehead = None
    return head
