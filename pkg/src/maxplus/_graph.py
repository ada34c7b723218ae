"""Small digraph utilities shared by the spectral and cyclic modules."""

from __future__ import annotations

import math
from collections import deque

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import GammaOverflow

_INT64_MAX = 2**63 - 1


def strong_components(adjacency: np.ndarray) -> list[tuple[int, ...]]:
    """Strongly connected components of a boolean adjacency matrix.

    Components are returned as sorted node tuples, ordered by smallest node.
    """
    n = adjacency.shape[0]
    _, labels = connected_components(csr_matrix(adjacency.astype(np.int8)), directed=True,
                                     connection="strong")
    groups: dict[int, list[int]] = {}
    for node in range(n):
        groups.setdefault(int(labels[node]), []).append(node)
    return sorted((tuple(g) for g in groups.values()), key=lambda g: g[0])


def bfs_levels(nodes, edges) -> tuple[int, dict[int, int]]:
    """BFS levelling of a strongly connected digraph from its smallest node.

    Returns the cyclicity (gcd of ``level(u) + 1 - level(v)`` over all edges)
    and the level of every node.
    """
    nodes = sorted(nodes)
    succ: dict[int, list[int]] = {v: [] for v in nodes}
    for u, v in edges:
        succ[u].append(v)
    root = nodes[0]
    level = {root: 0}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v in succ[u]:
            if v not in level:
                level[v] = level[u] + 1
                queue.append(v)
    if len(level) != len(nodes):
        raise ValueError("component is not strongly connected")
    g = 0
    for u, v in edges:
        g = math.gcd(g, abs(level[u] + 1 - level[v]))
    if g == 0:
        raise ValueError("component has no cycle")
    return g, level


def checked_lcm(values) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, int(v))
        if out > _INT64_MAX:
            raise GammaOverflow(f"cyclicity lcm exceeds 64-bit range: {out}")
    return out
