"""Loader for SNAP-style directed edge lists (``FromNodeId<TAB>ToNodeId``)."""
from __future__ import annotations

import os
from typing import List, Tuple


class DatasetError(ValueError):
    pass


def load_snap_edge_list(path: "str | os.PathLike") -> Tuple[List[int], List[Tuple[int, int]]]:
    """Return ``(sorted vertex keys, deduplicated edges in first-seen order)``.

    Lines starting with ``#`` and blank lines are skipped.  Self-loops are
    dropped from the edge list (the graph rejects them) but their endpoint
    still counts as a vertex.
    """
    vertices = set()
    seen = set()
    edges: List[Tuple[int, int]] = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            parts = s.split()
            if len(parts) != 2:
                raise DatasetError(f"{path}:{lineno}: expected 2 fields, got {len(parts)}")
            try:
                a, b = int(parts[0]), int(parts[1])
            except ValueError:
                raise DatasetError(f"{path}:{lineno}: non-integer node id in {s!r}") from None
            vertices.add(a)
            vertices.add(b)
            if a != b and (a, b) not in seen:
                seen.add((a, b))
                edges.append((a, b))
    return sorted(vertices), edges
