"""Periodic powers of visualized irreducible matrices by repeated squaring.

Critical rows and columns of ``A^r`` are periodic from ``r >= n²`` on, and
for a visualized matrix moving along the cyclic classes permutes them.  One
power ``A^{r0}`` with ``r0`` the first power of two ``>= n²`` therefore
determines every critical row/column of the periodic regime; the
non-critical block follows from the linear dependence of non-critical
columns on critical ones.  The transient itself is never computed here
except by :func:`transient_oracle`, which is a brute-force test oracle.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .cyclic import CyclicClasses, cyclic_classes
from .errors import CapExceeded, DimensionMismatch, NotIrreducible, NotVisualized
from .semiring import (EPS, NEG_INF, approx_equal, identity, mp_matmul, mp_matrix, mp_matvec,
                       mp_power, mp_power_residues, mp_vector)
from .spectral import SpectralData, critical_graph, is_irreducible, is_visualized, kleene_star


class PeriodicPowerEngine:
    """Caches ``A^{r0}`` and the cyclic structure of a visualized matrix.

    Parameters
    ----------
    a : array_like
        Irreducible, definite, visualized max-plus matrix.
    eps : float
        Tolerance for criticality and for equality of computed weights.
    """

    def __init__(self, a, eps: float = EPS):
        a = mp_matrix(a)
        if not is_irreducible(a):
            raise NotIrreducible("the matrix digraph is not strongly connected")
        sd = critical_graph(a, eps)
        if not is_visualized(a, sd, eps=eps):
            raise NotVisualized("expected a definite visualized matrix; use spectral.visualize")
        self.matrix = a
        self.eps = eps
        self.spectral: SpectralData = sd
        self.classes: CyclicClasses = cyclic_classes(sd)
        n = a.shape[0]
        table = mp_power_residues(a, n * n)
        self.r0: int = table.exponent
        self.squarings: int = table.squarings
        self._cache = table.power
        self._cache.setflags(write=False)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def gamma(self) -> int:
        return self.spectral.gamma

    @property
    def cached_power(self) -> np.ndarray:
        """``A^{r0}``, read-only."""
        return self._cache

    def _shift(self, node: int, k: int) -> int:
        """Shift index offset ``l = k - r0`` reduced for ``node``'s component."""
        mu, _ = self.classes.shift_index[node]
        return (k - self.r0) % self.classes.gammas[mu]

    def critical_columns(self, k: int) -> np.ndarray:
        """Critical columns (n x c) of every periodic ``A^r`` with ``r ≡ k (mod γ)``."""
        cols = []
        for j in self.spectral.critical_nodes:
            mu, s = self.classes.shift_index[j]
            src = self.classes.shifted(mu, s, -self._shift(j, k))[0]
            cols.append(self._cache[:, src])
        return np.stack(cols, axis=1)

    def critical_rows(self, k: int) -> np.ndarray:
        """Critical rows (c x n) of every periodic ``A^r`` with ``r ≡ k (mod γ)``."""
        rows = []
        for i in self.spectral.critical_nodes:
            mu, s = self.classes.shift_index[i]
            dst = self.classes.shifted(mu, s, self._shift(i, k))[0]
            rows.append(self._cache[dst, :])
        return np.stack(rows, axis=0)


def periodic_power(e: PeriodicPowerEngine, k: int) -> np.ndarray:
    """``A^r`` for all ``r >= T(A)`` with ``r ≡ k (mod γ)``."""
    if not 0 <= k < e.gamma:
        raise ValueError(f"residue must satisfy 0 <= k < {e.gamma}, got {k}")
    crit = list(e.spectral.critical_nodes)
    noncrit = list(e.spectral.noncritical_nodes)
    cols = e.critical_columns(k)
    out = np.empty((e.n, e.n))
    out[:, crit] = cols
    out[crit, :] = e.critical_rows(k)
    if noncrit:
        coeffs = e.critical_rows(0)[:, noncrit]
        out[np.ix_(noncrit, noncrit)] = mp_matmul(cols[noncrit, :], coeffs)
    return out


def _class_values(e: PeriodicPowerEngine, x) -> list[np.ndarray]:
    x = mp_vector(x)
    if x.size != e.n:
        raise DimensionMismatch(f"vector has length {x.size}, expected {e.n}")
    y = mp_matvec(e.cached_power, x)
    return [np.array([y[cls[0]] for cls in comp]) for comp in e.classes.classes]


def _rotation_matches(values: np.ndarray, t: int, eps: float) -> bool:
    return bool(approx_equal(values, np.roll(values, -t), eps).all())


def orbit_period(e: PeriodicPowerEngine, x) -> int:
    """Ultimate period of the orbit ``A^r ⊗ x``."""
    period = 1
    for values in _class_values(e, x):
        g = values.size
        p = next(d for d in range(1, g + 1) if g % d == 0 and _rotation_matches(values, d, e.eps))
        period = math.lcm(period, p)
    return period


def attraction_member(e: PeriodicPowerEngine, x, t: int) -> bool:
    """Whether ``A^r ⊗ x = A^{r+t} ⊗ x`` in the periodic regime."""
    if t < 1:
        raise ValueError("t must be >= 1")
    return all(_rotation_matches(values, t % values.size, e.eps)
               for values in _class_values(e, x))


@dataclass(frozen=True)
class CoreMatrix:
    """Component-level matrix of maximal entries and its Kleene star.

    ``groups`` lists the node sets indexing ``alpha``: the critical
    components first, then one singleton per non-critical node.
    """

    alpha: np.ndarray
    alpha_star: np.ndarray
    groups: tuple[tuple[int, ...], ...]
    n_critical: int

    @cached_property
    def group_of(self) -> dict[int, int]:
        return {v: g for g, nodes in enumerate(self.groups) for v in nodes}

    @property
    def h(self) -> np.ndarray:
        """First row off the diagonal (single critical component only)."""
        return self.alpha[0, self.n_critical:]

    @property
    def g(self) -> np.ndarray:
        return self.alpha[self.n_critical:, 0]

    @property
    def b(self) -> np.ndarray:
        return self.alpha[self.n_critical:, self.n_critical:]


def core_matrix(e: PeriodicPowerEngine) -> CoreMatrix:
    sd = e.spectral
    groups = tuple(sd.components) + tuple((v,) for v in sd.noncritical_nodes)
    m = len(groups)
    alpha = np.empty((m, m))
    for p, gp in enumerate(groups):
        for q, gq in enumerate(groups):
            alpha[p, q] = e.matrix[np.ix_(gp, gq)].max()
    return CoreMatrix(alpha=alpha, alpha_star=kleene_star(alpha, e.eps), groups=groups,
                      n_critical=len(sd.components))


@dataclass(frozen=True)
class CsrDecomposition:
    """``A^r = C ⊗ S^l ⊗ R`` for periodic ``r ≡ l (mod γ)``.

    Rows of ``S`` and ``R`` and columns of ``C`` follow ``nodes`` (the
    critical nodes in increasing order).
    """

    C: np.ndarray
    S: np.ndarray
    R: np.ndarray
    gamma: int
    nodes: tuple[int, ...]


def csr(e: PeriodicPowerEngine) -> CsrDecomposition:
    nodes = e.spectral.critical_nodes
    pos = {v: p for p, v in enumerate(nodes)}
    s = np.full((len(nodes), len(nodes)), NEG_INF)
    for i, j in e.spectral.critical_edges:
        s[pos[i], pos[j]] = 0.0
    return CsrDecomposition(C=e.critical_columns(0), S=s, R=e.critical_rows(0),
                            gamma=e.gamma, nodes=nodes)


def csr_reconstruct(d: CsrDecomposition, l: int) -> np.ndarray:
    """``C ⊗ S^l ⊗ R``; any ``l >= 0`` is accepted since only ``l mod γ`` matters."""
    return mp_matmul(mp_matmul(d.C, mp_power(d.S, l % d.gamma)), d.R)


@dataclass(frozen=True)
class ReducedPower:
    """Periodic power with each cyclic class collapsed to one index.

    ``labels`` gives the node set behind each index: cyclic classes
    component by component in shift order, then non-critical singletons.
    """

    matrix: np.ndarray
    labels: tuple[tuple[int, ...], ...]
    n_classes: int
    n: int

    def expand(self) -> np.ndarray:
        out = np.empty((self.n, self.n))
        for p, rows in enumerate(self.labels):
            for q, cols in enumerate(self.labels):
                out[np.ix_(rows, cols)] = self.matrix[p, q]
        return out

    def block(self, p_nodes, q_nodes) -> np.ndarray:
        """Sub-block between two groups of labels given by node membership."""
        rows = [k for k, lab in enumerate(self.labels) if lab[0] in p_nodes]
        cols = [k for k, lab in enumerate(self.labels) if lab[0] in q_nodes]
        return self.matrix[np.ix_(rows, cols)]


def reduced_power(e: PeriodicPowerEngine, k: int) -> ReducedPower:
    power = periodic_power(e, k)
    labels = tuple(cls for comp in e.classes.classes for cls in comp)
    n_classes = len(labels)
    labels += tuple((v,) for v in e.spectral.noncritical_nodes)
    reps = [lab[0] for lab in labels]
    return ReducedPower(matrix=power[np.ix_(reps, reps)], labels=labels, n_classes=n_classes,
                        n=e.n)


def transient_oracle(a, cap: int, eps: float = 0.0) -> int:
    """Least ``T`` with ``A^{T+γ} = A^T``, by plain iterated multiplication."""
    a = mp_matrix(a)
    gamma = critical_graph(a).gamma
    window = deque([identity(a.shape[0])])
    for _ in range(gamma):
        window.append(mp_matmul(window[-1], a))
    for t in range(cap + 1):
        if approx_equal(window[0], window[-1], eps).all():
            return t
        window.append(mp_matmul(window[-1], a))
        window.popleft()
    raise CapExceeded(cap)


def is_rectangular_circulant(m: np.ndarray, eps: float = 0.0) -> bool:
    """``m[i, j] == m[(i+1) % rows, (j+1) % cols]`` for all ``i, j``."""
    shifted = np.roll(np.roll(m, -1, axis=0), -1, axis=1)
    return bool(approx_equal(m, shifted, eps).all())


def is_d_periodic(m: np.ndarray, d: int, eps: float = 0.0) -> bool:
    rows, cols = m.shape
    ok_cols = approx_equal(m, np.roll(m, -d % cols, axis=1), eps).all()
    ok_rows = approx_equal(m, np.roll(m, -d % rows, axis=0), eps).all()
    return bool(ok_cols and ok_rows)
