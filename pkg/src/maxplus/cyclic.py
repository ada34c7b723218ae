"""Cyclic classes of the critical graph and the access relations between them."""

from __future__ import annotations

from dataclasses import dataclass

from ._graph import bfs_levels
from .errors import NonCriticalNode
from .spectral import SpectralData


@dataclass(frozen=True)
class CyclicClasses:
    """Partition of the critical nodes into cyclic classes.

    ``classes[mu][s]`` is the class of component ``mu`` with shift index
    ``s``; every critical edge goes from shift ``s`` to ``s + 1`` (mod the
    component's cyclicity), and the smallest node of each component has
    shift 0.
    """

    classes: tuple[tuple[tuple[int, ...], ...], ...]
    shift_index: dict
    gammas: tuple[int, ...]

    @property
    def total(self) -> int:
        """Total number of cyclic classes over all components."""
        return sum(len(c) for c in self.classes)

    def _locate(self, i: int) -> tuple[int, int]:
        try:
            return self.shift_index[i]
        except KeyError:
            raise NonCriticalNode(f"node {i} is not critical") from None

    def class_of(self, i: int) -> tuple[int, ...]:
        mu, s = self._locate(i)
        return self.classes[mu][s]

    def access(self, i: int, j: int) -> int | None:
        """Residue ``t`` with ``[i] ->_t [j]``, or None across components."""
        mu, si = self._locate(i)
        nu, sj = self._locate(j)
        if mu != nu:
            return None
        return (sj - si) % self.gammas[mu]

    def class_shift(self, i: int, m: int) -> tuple[int, ...]:
        """The class ``[j]`` with ``[j] ->_m [i]``."""
        mu, s = self._locate(i)
        return self.classes[mu][(s - m) % self.gammas[mu]]

    def shifted(self, mu: int, s: int, m: int) -> tuple[int, ...]:
        """Class reached from class ``s`` of component ``mu`` after ``m`` steps."""
        return self.classes[mu][(s + m) % self.gammas[mu]]


def balcer_veinott(nodes, edges) -> list[tuple[int, ...]]:
    """Cyclic classes of a strongly connected digraph by successor condensation.

    All successors of a (condensed) node belong to one class, so they are
    merged until every condensed node has a single successor.
    """
    parent = {v: v for v in nodes}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    changed = True
    while changed:
        changed = False
        succ: dict[int, set[int]] = {}
        for u, v in edges:
            succ.setdefault(find(u), set()).add(find(v))
        for targets in succ.values():
            roots = {find(t) for t in targets}
            if len(roots) > 1:
                first, *rest = sorted(roots)
                for r in rest:
                    parent[find(r)] = find(first)
                changed = True
    groups: dict[int, list[int]] = {}
    for v in sorted(nodes):
        groups.setdefault(find(v), []).append(v)
    return sorted((tuple(g) for g in groups.values()), key=lambda g: g[0])


def cyclic_classes(sd: SpectralData, edges=None) -> CyclicClasses:
    """Cyclic classes from a BFS levelling, cross-checked by condensation."""
    edges = sd.critical_edges if edges is None else edges
    all_classes = []
    shift_index = {}
    for mu, comp in enumerate(sd.components):
        members = set(comp)
        comp_edges = [(u, v) for u, v in edges if u in members]
        gamma, level = bfs_levels(comp, comp_edges)
        by_shift = [[] for _ in range(gamma)]
        for v in comp:
            by_shift[level[v] % gamma].append(v)
        classes = tuple(tuple(c) for c in by_shift)
        condensed = balcer_veinott(comp, comp_edges)
        if sorted(classes) != sorted(condensed) or gamma != sd.cyclicities[mu]:
            raise RuntimeError(f"cyclic class computations disagree on component {mu}")
        all_classes.append(classes)
        for s, cls in enumerate(classes):
            for v in cls:
                shift_index[v] = (mu, s)
    return CyclicClasses(classes=tuple(all_classes), shift_index=shift_index,
                         gammas=tuple(sd.cyclicities))
