"""Equation systems for attraction cones and their extremal solutions.

A vector ``x`` is in the attraction cone ``Attr(A, t)`` when its orbit
``A^r ⊗ x`` ultimately has period dividing ``t``.  For a visualized matrix
the condition reduces to chains of equalities between critical rows of a
periodic power, one side per cyclic class, and chain cancellation leaves
each variable only on the sides where its coefficient is maximal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CoverageGap, NotStronglyConnectedCritical
from .periodic import PeriodicPowerEngine, core_matrix
from .semiring import EPS, NEG_INF, identity, mp_matmul, mp_vector

Term = tuple[int, float]


@dataclass(frozen=True)
class Side:
    """One side ``⊕ coeff ⊗ x_var`` of a chain.

    ``cls`` is the cyclic class whose row produced the side (empty when the
    side was built from a bare coefficient matrix).
    """

    terms: tuple[Term, ...]
    cls: tuple[int, ...] = ()

    @property
    def variables(self) -> frozenset[int]:
        return frozenset(v for v, _ in self.terms)

    def value(self, x: np.ndarray) -> float:
        return max((c + x[v] for v, c in self.terms), default=NEG_INF)


@dataclass(frozen=True)
class Chain:
    """``side_0 = side_1 = ... = side_{m-1}``; a single side imposes nothing."""

    sides: tuple[Side, ...]
    component: int = 0

    def satisfied(self, x, eps: float = EPS) -> bool:
        values = [s.value(x) for s in self.sides]
        first = values[0]
        if first == NEG_INF:
            return all(v == NEG_INF for v in values)
        return all(v != NEG_INF and abs(v - first) <= eps for v in values)


@dataclass(frozen=True)
class IndexSets:
    """Variables of one side grouped by where they live.

    ``class_terms`` are the side's own cyclic class, ``m_sets[nu]`` the
    nodes of another critical component ``nu``, ``k_set`` the non-critical
    nodes and ``other_classes`` the remaining classes of the side's own
    component (only possible for ``t > 1``).
    """

    class_terms: frozenset[int]
    m_sets: dict = field(default_factory=dict)
    k_set: frozenset[int] = frozenset()
    other_classes: frozenset[int] = frozenset()


@dataclass(frozen=True)
class AttractionSystem:
    """Chains of max-linear equalities, one per component of the critical
    graph of ``A^t`` (one per component of the critical graph for t=1)."""

    chains: tuple[Chain, ...]
    n: int
    t: int = 1

    def satisfied(self, x, eps: float = EPS) -> bool:
        x = mp_vector(x, self.n)
        return all(ch.satisfied(x, eps) for ch in self.chains)

    def to_original(self, scaling) -> AttractionSystem:
        """Rewrite for ``x = z + scaling`` where ``z`` are the visualized variables."""
        s = np.asarray(scaling, dtype=float)
        chains = tuple(
            Chain(tuple(Side(tuple((v, float(c - s[v])) for v, c in side.terms), side.cls)
                        for side in ch.sides), ch.component)
            for ch in self.chains)
        return AttractionSystem(chains=chains, n=self.n, t=self.t)

    def side_of(self, i: int) -> Side:
        """The side produced by the cyclic class of critical node ``i``."""
        for ch in self.chains:
            for side in ch.sides:
                if i in side.cls:
                    return side
        raise KeyError(i)

    def index_sets(self, e: PeriodicPowerEngine, i: int) -> IndexSets:
        sd = e.spectral
        side = self.side_of(i)
        mu = sd.component_of[i]
        own = set(side.cls)
        m_sets: dict[int, set[int]] = {}
        k_set, other = set(), set()
        for v in side.variables:
            if v in own:
                continue
            nu = sd.component_of.get(v)
            if nu is None:
                k_set.add(v)
            elif nu == mu:
                other.add(v)
            else:
                m_sets.setdefault(nu, set()).add(v)
        return IndexSets(class_terms=frozenset(own & side.variables),
                         m_sets={nu: frozenset(s) for nu, s in sorted(m_sets.items())},
                         k_set=frozenset(k_set), other_classes=frozenset(other))


def _cancel(raw: np.ndarray, alpha: np.ndarray | None, eps: float) -> list[list[Term]]:
    """Terms kept on each side of one chain (variables in increasing order)."""
    raw = np.atleast_2d(np.asarray(raw, dtype=float))
    if alpha is None:
        alpha = raw.max(axis=0)
    alpha = np.asarray(alpha, dtype=float)
    if (raw > alpha[None, :] + eps).any():
        raise ValueError("a coefficient exceeds its cancellation bound")
    finite = raw > NEG_INF
    hit = finite & (np.abs(raw - alpha[None, :]) <= eps)
    gaps = [k for k in range(raw.shape[1]) if alpha[k] > NEG_INF and not hit[:, k].any()]
    if gaps:
        raise CoverageGap(f"maximal coefficient of x{gaps[0] + 1} is attained on no side")
    return [[(int(k), float(alpha[k])) for k in np.nonzero(row)[0]] for row in hit]


def chain_cancel(raw_chains, alphas=None, eps: float = EPS, t: int = 1) -> AttractionSystem:
    """Cancel dominated terms in each chain ``R_0 ⊗ x = R_1 ⊗ x = ...``.

    ``raw_chains`` holds one coefficient matrix per chain (one row per
    side).  Each variable keeps its bound ``alphas[c][k]`` (by default the
    column maximum) on exactly the sides attaining it; the solution set is
    unchanged.
    """
    chains = []
    n = None
    for c, raw in enumerate(raw_chains):
        raw = np.atleast_2d(np.asarray(raw, dtype=float))
        n = raw.shape[1]
        sides = _cancel(raw, None if alphas is None else alphas[c], eps)
        chains.append(Chain(tuple(Side(tuple(s)) for s in sides), component=c))
    if n is None:
        raise ValueError("no chains given")
    return AttractionSystem(chains=tuple(chains), n=n, t=t)


@dataclass(frozen=True)
class CriticalChain:
    """Critical rows of a periodic power grouped into one uncancelled chain."""

    component: int
    classes: tuple[tuple[int, ...], ...]
    rows: np.ndarray


def critical_subsystem(e: PeriodicPowerEngine, t: int = 1) -> list[CriticalChain]:
    """Rows of ``A^r`` (``r`` a multiple of γ) for ``A^r ⊗ x = A^{r+t} ⊗ x``.

    Row ``i`` of ``A^{r+t}`` equals row ``j`` of ``A^r`` when ``[i] ->_t [j]``,
    so the equalities link the classes of each component along orbits of
    the shift by ``t``; each orbit is one chain.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    rows = e.critical_rows(0)
    row_of = {v: rows[p] for p, v in enumerate(e.spectral.critical_nodes)}
    out = []
    for mu, comp in enumerate(e.classes.classes):
        g = len(comp)
        d = math.gcd(t, g)
        for start in range(d):
            order = [(start + q * t) % g for q in range(g // d)]
            classes = tuple(comp[s] for s in order)
            out.append(CriticalChain(mu, classes, np.stack([row_of[c[0]] for c in classes])))
    return out


def attraction_system(e: PeriodicPowerEngine, t: int = 1) -> AttractionSystem:
    """Cancelled system whose solution set is ``Attr(A, t)``.

    For ``t = 1`` every kept coefficient is the matching entry of the star
    of the core matrix.  For ``t > 1`` the bounds are the column maxima of
    each chain, i.e. the core-matrix star of ``A^t``.
    """
    sub = critical_subsystem(e, t)
    alpha_for = None
    if t == 1:
        core = core_matrix(e)
        groups = [core.group_of[k] for k in range(e.n)]
        alpha_for = lambda mu: core.alpha_star[mu, groups]  # noqa: E731
    chains = []
    for ch in sub:
        alpha = None if alpha_for is None else alpha_for(ch.component)
        sides = _cancel(ch.rows, alpha, e.eps)
        chains.append(Chain(tuple(Side(tuple(s), cls) for s, cls in zip(sides, ch.classes)),
                            component=ch.component))
    return AttractionSystem(chains=tuple(chains), n=e.n, t=t)


@dataclass(frozen=True)
class Algorithm1State:
    """Intermediate data of the core-matrix route to the attraction system.

    Vectors over non-critical nodes follow ``noncritical`` order; Boolean
    vectors over critical nodes follow ``critical`` order.  ``u[s][t]`` is
    the set of lengths ``m <= c̄-1`` at which ``B^m`` attains ``b*[s, t]``.
    """

    critical: tuple[int, ...]
    noncritical: tuple[int, ...]
    h: np.ndarray
    g: np.ndarray
    b: np.ndarray
    b_star: np.ndarray
    u: tuple[tuple[frozenset[int], ...], ...]
    hb_star: np.ndarray
    p: dict
    w: dict
    gvec: dict
    k_sets: dict


def algorithm1_state(e: PeriodicPowerEngine) -> Algorithm1State:
    sd = e.spectral
    if len(sd.components) != 1:
        raise NotStronglyConnectedCritical(
            f"critical graph has {len(sd.components)} components; expected one")
    eps = e.eps
    a = e.matrix
    crit = sd.critical_nodes
    nc = sd.noncritical_nodes
    cbar = len(nc)
    classes = e.classes
    h = a[np.ix_(crit, nc)].max(axis=0) if cbar else np.empty(0)
    g = a[np.ix_(nc, crit)].max(axis=1) if cbar else np.empty(0)
    b = a[np.ix_(nc, nc)]

    # B* as the series I ⊕ B ⊕ ... ⊕ B^{c̄-1}, keeping every power for U
    powers = [identity(cbar)] if cbar else []
    for _ in range(1, cbar):
        powers.append(mp_matmul(powers[-1], b))
    b_star = np.max(powers, axis=0) if cbar else np.empty((0, 0))
    u = tuple(
        tuple(frozenset(m for m, pw in enumerate(powers)
                        if pw[s, t] > NEG_INF and abs(pw[s, t] - b_star[s, t]) <= eps)
              for t in range(cbar))
        for s in range(cbar))

    # P_s: classes one step before a node attaining h_s
    p = {}
    for q, s in enumerate(nc):
        winners = {k for k in crit if a[k, s] > NEG_INF and abs(a[k, s] - h[q]) <= eps}
        p[s] = np.array([bool(winners & set(classes.class_shift(i, 1))) for i in crit])

    hb = h[:, None] + b_star if cbar else np.empty((0, 0))
    hb_star = hb.max(axis=0) if cbar else np.empty(0)
    w, gvec = {}, {}
    for qt, t in enumerate(nc):
        w[t] = frozenset(nc[qs] for qs in range(cbar)
                         if hb[qs, qt] > NEG_INF and abs(hb[qs, qt] - hb_star[qt]) <= eps)
        out = np.zeros(len(crit), dtype=bool)
        for s in w[t]:
            qs = nc.index(s)
            for m in u[qs][qt]:
                # P_s shifted by m: node i inherits P_s from the class m steps before it
                out |= np.array([p[s][crit.index(classes.class_shift(i, m)[0])] for i in crit])
        gvec[t] = out
    k_sets = {i: frozenset(t for t in nc if gvec[t][ci]) for ci, i in enumerate(crit)}
    return Algorithm1State(critical=crit, noncritical=nc, h=h, g=g, b=b, b_star=b_star, u=u,
                           hb_star=hb_star, p=p, w=w, gvec=gvec, k_sets=k_sets)


def algorithm1(e: PeriodicPowerEngine, state: Algorithm1State | None = None) -> AttractionSystem:
    """Attraction system for ``t = 1`` from the core matrix alone.

    Needs a strongly connected critical graph; no periodic power is formed.
    """
    st = state or algorithm1_state(e)
    coeff = {t: float(st.hb_star[q]) for q, t in enumerate(st.noncritical)}
    sides = []
    for cls in e.classes.classes[0]:
        terms = [(v, 0.0) for v in cls] + [(t, coeff[t]) for t in st.k_sets[cls[0]]]
        sides.append(Side(tuple(sorted(terms)), cls))
    return AttractionSystem(chains=(Chain(tuple(sides), component=0),), n=e.n, t=1)


@dataclass(frozen=True)
class CoveringProblem:
    """Rows of ``T`` are the sides of a single chain; ``a`` are the common
    coefficients (0 for a variable that occurs on no side)."""

    T: np.ndarray
    a: np.ndarray

    @property
    def rows(self) -> list[frozenset[int]]:
        return [frozenset(np.nonzero(r)[0].tolist()) for r in self.T]

    @property
    def free(self) -> list[int]:
        return [int(k) for k in np.nonzero(~self.T.any(axis=0))[0]]


def covering_problem(system: AttractionSystem) -> CoveringProblem:
    if len(system.chains) != 1:
        raise NotStronglyConnectedCritical(
            f"system has {len(system.chains)} chains; extremals need exactly one")
    chain = system.chains[0]
    t = np.zeros((len(chain.sides), system.n), dtype=bool)
    a = np.zeros(system.n)
    for row, side in enumerate(chain.sides):
        for v, c in side.terms:
            t[row, v] = True
            a[v] = c
    return CoveringProblem(T=t, a=a)


def _is_covering(rows, k: frozenset) -> bool:
    return all(r & k for r in rows)


def minimal_coverings(cp: CoveringProblem) -> list[frozenset[int]]:
    """All minimal coverings, by branching on the first uncovered row."""
    rows = cp.rows
    found: set[frozenset[int]] = set()

    def grow(chosen: frozenset):
        open_rows = [r for r in rows if not (r & chosen)]
        if not open_rows:
            if all(not _is_covering(rows, chosen - {v}) for v in chosen):
                found.add(chosen)
            return
        for v in sorted(open_rows[0]):
            grow(chosen | {v})

    grow(frozenset())
    return sorted(found, key=lambda k: (len(k), sorted(k)))


def nearly_minimal_coverings(cp: CoveringProblem) -> list[frozenset[int]]:
    """Coverings from which at most one index can be dropped.

    Such a covering is either minimal or a minimal covering plus one index
    whose addition leaves every original index indispensable.  Exponential
    in the worst case, like the number of coverings itself.
    """
    rows = cp.rows
    used = sorted(set().union(*rows)) if rows else []
    minimal = minimal_coverings(cp)
    out = set(minimal)
    for m in minimal:
        for v in used:
            if v in m:
                continue
            k = m | {v}
            removable = [x for x in k if _is_covering(rows, k - {x})]
            if removable == [v]:
                out.add(k)
    return sorted(out, key=lambda k: (len(k), sorted(k)))


def extremals(cp: CoveringProblem) -> list[np.ndarray]:
    """Scaled extremal solutions (entries 0 or ``-inf``) of the chain.

    Every variable that occurs on no side is unconstrained and contributes
    its own unit vector.
    """
    n = cp.T.shape[1]
    out = []
    for k in nearly_minimal_coverings(cp):
        v = np.full(n, NEG_INF)
        v[sorted(k)] = 0.0
        out.append(v)
    for k in cp.free:
        v = np.full(n, NEG_INF)
        v[k] = 0.0
        out.append(v)
    return out


def unscale(cp: CoveringProblem, y) -> np.ndarray:
    """Undo the scaling ``y_i = a_i + x_i`` of a scaled solution."""
    y = np.asarray(y, dtype=float)
    return np.where(y > NEG_INF, y - cp.a, NEG_INF)


def render_side(side: Side, semiring: str = "maxplus") -> str:
    parts = []
    for v, c in side.terms:
        name = f"x{v + 1}"
        if c == 0.0:
            parts.append(name)
        elif semiring == "maxtimes":
            parts.append(f"({math.exp(c):.12g} * {name})")
        else:
            parts.append(f"({name} {'+' if c > 0 else '-'} {abs(c):.12g})")
    return " (+) ".join(parts) if parts else "-inf"


def render_system(system: AttractionSystem, semiring: str = "maxplus") -> str:
    """One line per chain, e.g. ``x1 (+) (x5 - 5) = x2 (+) (x6 - 3)``."""
    lines = []
    for ch in system.chains:
        text = " = ".join(render_side(s, semiring) for s in ch.sides)
        if len(ch.sides) == 1:
            text += "  # single class, no constraint"
        lines.append(text)
    return "\n".join(lines)
