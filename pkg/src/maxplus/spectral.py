"""Eigenvalue, Kleene star, critical graph and visualization scalings."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.special import logsumexp

from ._graph import bfs_levels, checked_lcm, strong_components
from .errors import AcyclicMatrix, DivergentStar, NotDefinite
from .semiring import EPS, NEG_INF, mp_matmul, mp_matrix


@dataclass(frozen=True)
class SpectralData:
    """Eigenvalue and critical graph of a square max-plus matrix.

    Nodes are 0-based.  ``components`` are the node sets of the strongly
    connected components of the critical graph, ordered by smallest node,
    and ``cyclicities[mu]`` is the cyclicity of ``components[mu]``.
    """

    lam: float
    n: int
    critical_nodes: tuple[int, ...]
    critical_edges: frozenset
    components: tuple[tuple[int, ...], ...]
    cyclicities: tuple[int, ...]
    gamma: int

    @property
    def c(self) -> int:
        return len(self.critical_nodes)

    @property
    def cbar(self) -> int:
        return self.n - self.c

    @cached_property
    def noncritical_nodes(self) -> tuple[int, ...]:
        crit = set(self.critical_nodes)
        return tuple(i for i in range(self.n) if i not in crit)

    @cached_property
    def component_of(self) -> dict[int, int]:
        return {v: mu for mu, comp in enumerate(self.components) for v in comp}

    def component_edges(self, mu: int) -> list[tuple[int, int]]:
        members = set(self.components[mu])
        return sorted((u, v) for u, v in self.critical_edges if u in members)


@dataclass(frozen=True)
class VisualizedMatrix:
    """``matrix[i, j] = a[i, j] - scaling[i] + scaling[j]``."""

    matrix: np.ndarray
    scaling: np.ndarray
    strict: bool = field(default=False)

    def to_original(self, m: np.ndarray) -> np.ndarray:
        """Undo the scaling on a matrix (e.g. a power of ``matrix``)."""
        return m + self.scaling[:, None] - self.scaling[None, :]

    def scale_vector(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(x, dtype=float) - self.scaling

    def unscale_vector(self, z: np.ndarray) -> np.ndarray:
        return np.asarray(z, dtype=float) + self.scaling


def _karp(sub: np.ndarray) -> float:
    """Maximum cycle mean of a strongly connected digraph (Karp)."""
    m = sub.shape[0]
    walks = np.full((m + 1, m), NEG_INF)
    walks[0, 0] = 0.0
    for k in range(m):
        walks[k + 1] = (walks[k][:, None] + sub).max(axis=0)
    best = NEG_INF
    final = walks[m]
    for v in range(m):
        if final[v] == NEG_INF:
            continue
        worst = np.inf
        for k in range(m):
            if walks[k, v] != NEG_INF:
                worst = min(worst, (final[v] - walks[k, v]) / (m - k))
        best = max(best, worst)
    return float(best)


def max_cycle_mean(a) -> float:
    """Maximum cycle mean ``λ(A)``; ``-inf`` if the digraph is acyclic."""
    a = mp_matrix(a)
    best = NEG_INF
    for comp in strong_components(a > NEG_INF):
        idx = np.array(comp)
        sub = a[np.ix_(idx, idx)]
        if len(comp) == 1 and sub[0, 0] == NEG_INF:
            continue
        best = max(best, _karp(sub))
    return best


def is_irreducible(a) -> bool:
    a = mp_matrix(a)
    return len(strong_components(a > NEG_INF)) == 1


def definite_form(a) -> np.ndarray:
    """Subtract ``λ(A)`` from every finite entry, so that ``λ = 0``."""
    a = mp_matrix(a)
    lam = max_cycle_mean(a)
    if lam == NEG_INF:
        raise AcyclicMatrix("λ(A) = -inf: the digraph has no cycle")
    return a - lam


def kleene_star(a, eps: float = EPS) -> np.ndarray:
    """``A* = I ⊕ A ⊕ A² ⊕ ...`` via a Floyd-Warshall closure.

    Raises :class:`DivergentStar` if some cycle has positive weight
    (beyond ``eps``).
    """
    closure = mp_matrix(a).copy()
    for k in range(closure.shape[0]):
        np.maximum(closure, closure[:, k:k + 1] + closure[k:k + 1, :], out=closure)
    diag = np.diagonal(closure)
    if (diag > eps).any():
        raise DivergentStar(f"positive cycle weight {diag.max():.6g}; the Kleene star diverges")
    np.fill_diagonal(closure, 0.0)
    return closure


def _check_definite(a: np.ndarray, eps: float) -> float:
    lam = max_cycle_mean(a)
    if lam > eps:
        raise DivergentStar(f"λ(A) = {lam:.6g} > 0; the Kleene star diverges")
    if lam < -eps:
        raise NotDefinite(f"λ(A) = {lam:.6g}; expected a definite matrix (λ = 0)")
    return lam


def critical_graph(a, eps: float = EPS) -> SpectralData:
    """Eigenvalue, critical nodes/edges, components and cyclicities.

    An edge ``(i, j)`` is critical iff ``d[i, j] + d*[j, i] = 0`` (within
    ``eps``) for the definite form ``d = A - λ``.
    """
    a = mp_matrix(a)
    lam = max_cycle_mean(a)
    if lam == NEG_INF:
        raise AcyclicMatrix("λ(A) = -inf: the digraph has no cycle")
    d = a - lam
    star = kleene_star(d, eps)
    finite = d > NEG_INF
    crit = finite & (np.abs(d + star.T) <= eps)
    edges = frozenset((int(i), int(j)) for i, j in zip(*np.nonzero(crit)))
    nodes = sorted({i for i, _ in edges})
    sub = crit[np.ix_(nodes, nodes)]
    components = tuple(tuple(nodes[k] for k in comp) for comp in strong_components(sub))
    cycl = []
    for comp in components:
        members = set(comp)
        g, _ = bfs_levels(comp, [(u, v) for u, v in edges if u in members])
        cycl.append(g)
    return SpectralData(lam=float(lam), n=a.shape[0], critical_nodes=tuple(nodes),
                        critical_edges=edges, components=components,
                        cyclicities=tuple(cycl), gamma=checked_lcm(cycl))


def critical_matrix(a, sd: SpectralData | None = None, eps: float = EPS) -> np.ndarray:
    """Boolean critical matrix: 0 on critical edges, ``-inf`` elsewhere."""
    a = mp_matrix(a)
    sd = sd or critical_graph(a, eps)
    out = np.full(a.shape, NEG_INF)
    for i, j in sd.critical_edges:
        out[i, j] = 0.0
    return out


def spectral_projector(a, eps: float = EPS) -> np.ndarray:
    """``Q(A)[i, j] = max over critical k of a*[i, k] + a*[k, j]`` for definite A."""
    a = mp_matrix(a)
    _check_definite(a, eps)
    star = kleene_star(a, eps)
    crit = list(critical_graph(a, eps).critical_nodes)
    return mp_matmul(star[:, crit], star[crit, :])


def _representatives(sd: SpectralData) -> list[int]:
    return [comp[0] for comp in sd.components]


def eigencone_basis(a, eps: float = EPS) -> list[np.ndarray]:
    """Columns of ``A*`` at one (smallest) node per critical component."""
    a = mp_matrix(a)
    _check_definite(a, eps)
    star = kleene_star(a, eps)
    sd = critical_graph(a, eps)
    return [star[:, k].copy() for k in _representatives(sd)]


def subeigencone_basis(a, eps: float = EPS) -> list[np.ndarray]:
    """Eigencone basis plus the columns of ``A*`` at all non-critical nodes."""
    a = mp_matrix(a)
    _check_definite(a, eps)
    star = kleene_star(a, eps)
    sd = critical_graph(a, eps)
    idx = sorted(_representatives(sd) + list(sd.noncritical_nodes))
    return [star[:, k].copy() for k in idx]


def visualize(a, strict: bool = False, eps: float = EPS) -> VisualizedMatrix:
    """Diagonal similarity scaling into visualized form.

    The scaling vector is the row-wise max of ``A*`` or, for a strict
    visualization, the row-wise log-sum-exp of ``A*`` (the max-plus image of
    the conventional sum of its columns).  Entries on critical edges are
    set to exactly 0 afterwards to remove rounding noise.
    """
    a = mp_matrix(a)
    _check_definite(a, eps)
    star = kleene_star(a, eps)
    scaling = logsumexp(star, axis=1) if strict else star.max(axis=1)
    out = a - scaling[:, None] + scaling[None, :]
    for i, j in critical_graph(a, eps).critical_edges:
        out[i, j] = 0.0
    return VisualizedMatrix(matrix=out, scaling=np.asarray(scaling, dtype=float), strict=strict)


def is_visualized(a, sd: SpectralData | None = None, strict: bool = False,
                  eps: float = EPS) -> bool:
    a = mp_matrix(a)
    sd = sd or critical_graph(a, eps)
    if abs(sd.lam) > eps or (a > eps).any():
        return False
    on_crit = np.zeros(a.shape, dtype=bool)
    for i, j in sd.critical_edges:
        on_crit[i, j] = True
    if not (np.abs(a[on_crit]) <= eps).all():
        return False
    if strict:
        return bool((a[~on_crit] < -eps).all())
    return True
