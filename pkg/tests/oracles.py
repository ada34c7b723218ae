"""Brute-force reference implementations and random instance generators.

Nothing here calls into the package's algorithms; everything is written the
slow, obvious way so that it can serve as an independent check.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations, product

import numpy as np

NEG = -math.inf
DATA = __import__("pathlib").Path(__file__).parent / "data"


def naive_mul(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    n, m = a.shape[0], b.shape[1]
    out = np.full((n, m), NEG)
    for i in range(n):
        for j in range(m):
            best = NEG
            for k in range(a.shape[1]):
                if a[i, k] != NEG and b[k, j] != NEG:
                    best = max(best, a[i, k] + b[k, j])
            out[i, j] = best
    return out


def fast_mul(a, b):
    """Broadcast product, used where the triple loop would be too slow."""
    return (np.asarray(a)[:, :, None] + np.asarray(b)[None, :, :]).max(axis=1)


def unit(n):
    out = np.full((n, n), NEG)
    np.fill_diagonal(out, 0.0)
    return out


def powers(a, count):
    """``[A^0, A^1, ..., A^count]`` by repeated multiplication."""
    out = [unit(a.shape[0])]
    for _ in range(count):
        out.append(fast_mul(out[-1], a))
    return out


def elementary_cycles(a):
    """All elementary cycles of the digraph of ``a`` as node lists (smallest node first)."""
    n = a.shape[0]
    cycles = []

    def dfs(start, node, path, seen):
        for nxt in range(start, n):
            if a[node, nxt] == NEG:
                continue
            if nxt == start:
                cycles.append(list(path))
            elif nxt not in seen:
                seen.add(nxt)
                path.append(nxt)
                dfs(start, nxt, path, seen)
                path.pop()
                seen.discard(nxt)

    for s in range(n):
        dfs(s, s, [s], {s})
    return cycles


def cycle_weight(a, cyc):
    return sum(a[cyc[k], cyc[(k + 1) % len(cyc)]] for k in range(len(cyc)))


def brute_lambda(a):
    """Maximum cycle mean as an exact fraction over elementary cycles."""
    best = None
    for cyc in elementary_cycles(a):
        mean = Fraction(cycle_weight(a, cyc)).limit_denominator(10**6) / len(cyc)
        best = mean if best is None or mean > best else best
    return best


def brute_critical(a, tol=1e-9):
    """Critical nodes and edges: those on cycles attaining the maximum mean."""
    cycles = elementary_cycles(a)
    means = [cycle_weight(a, c) / len(c) for c in cycles]
    lam = max(means)
    nodes, edges = set(), set()
    for cyc, m in zip(cycles, means):
        if abs(m - lam) <= tol:
            nodes.update(cyc)
            edges.update((cyc[k], cyc[(k + 1) % len(cyc)]) for k in range(len(cyc)))
    return lam, sorted(nodes), edges


def reach(nodes, edges):
    succ = {v: set() for v in nodes}
    for u, v in edges:
        succ[u].add(v)
    closure = {}
    for s in nodes:
        seen, stack = {s}, [s]
        while stack:
            for v in succ[stack.pop()]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        closure[s] = seen
    return closure


def brute_components(nodes, edges):
    r = reach(nodes, edges)
    comps = []
    for v in nodes:
        comp = tuple(sorted(u for u in nodes if u in r[v] and v in r[u]))
        if comp not in comps:
            comps.append(comp)
    return sorted(comps)


def brute_cyclicity(a, comp, edges):
    """gcd of the lengths of all elementary cycles inside a critical component."""
    members = set(comp)
    sub = np.full(a.shape, NEG)
    for u, v in edges:
        if u in members and v in members:
            sub[u, v] = 0.0
    g = 0
    for cyc in elementary_cycles(sub):
        g = math.gcd(g, len(cyc))
    return g


def series_star(a):
    n = a.shape[0]
    out = unit(n)
    p = unit(n)
    for _ in range(n):
        p = fast_mul(p, a)
        out = np.maximum(out, p)
    return out


def brute_transient(a, gamma, cap=5000):
    pw = [unit(a.shape[0])]
    for _ in range(gamma):
        pw.append(fast_mul(pw[-1], a))
    t = 0
    while not np.array_equal(pw[t], pw[t + gamma]):
        t += 1
        if t > cap:
            raise RuntimeError("transient cap exceeded")
        pw.append(fast_mul(pw[-1], a))
    return t, pw


def brute_orbit_period(a, x, cap=5000):
    """Ultimate period of ``A^k ⊗ x`` by cycle detection on exact states."""
    seen = {}
    y = np.asarray(x, dtype=float)
    for k in range(cap):
        key = tuple(y.tolist())
        if key in seen:
            return k - seen[key]
        seen[key] = k
        y = (a + y[None, :]).max(axis=1)
    raise RuntimeError("orbit did not cycle")


def grid(n, values=(0.0, -1.0, NEG)):
    return np.array(list(product(values, repeat=n)), dtype=float)


def apply_many(m, xs):
    """Rows of ``xs`` mapped by ``m`` (each row a vector)."""
    return (m[None, :, :] + xs[:, None, :]).max(axis=2)


def eval_chain_terms(sides, xs):
    """Values of each side (lists of (var, coeff)) on every row of ``xs``."""
    vals = []
    for terms in sides:
        v = np.full(xs.shape[0], NEG)
        for var, c in terms:
            v = np.maximum(v, c + xs[:, var])
        vals.append(v)
    return vals


def system_holds(system, xs, tol=1e-9):
    ok = np.ones(xs.shape[0], dtype=bool)
    for ch in system.chains:
        vals = eval_chain_terms([s.terms for s in ch.sides], xs)
        for v in vals[1:]:
            both = (v == NEG) & (vals[0] == NEG)
            with np.errstate(invalid="ignore"):
                close = np.abs(v - vals[0]) <= tol
            ok &= both | close
    return ok


def covering_rows(system):
    return [frozenset(v for v, _ in side.terms) for side in system.chains[0].sides]


def brute_nearly_minimal(rows, n):
    """Coverings with at most one proper subcovering, over all subsets."""
    covers = [frozenset(k) for size in range(1, n + 1) for k in combinations(range(n), size)
              if all(r & frozenset(k) for r in rows)]
    cover_set = set(covers)
    out = []
    for k in covers:
        subs = [s for s in cover_set if s < k]
        if len(subs) <= 1:
            out.append(k)
    return sorted(out, key=lambda k: (len(k), sorted(k)))


def brute_extremal_supports(rows, n):
    """0/1 solutions that are not the max of strictly smaller 0/1 solutions."""
    covers = [frozenset(k) for size in range(1, n + 1) for k in combinations(range(n), size)
              if all(r & frozenset(k) for r in rows)]
    out = []
    for k in covers:
        below = [s for s in covers if s < k]
        if frozenset().union(*below) != k:
            out.append(k)
    return sorted(out, key=lambda k: (len(k), sorted(k)))


def generated_by(x, gens, tol=1e-9):
    """Whether ``x`` is a max-combination of ``gens`` (via residuation)."""
    x = np.asarray(x, dtype=float)
    acc = np.full(x.shape, NEG)
    for g in gens:
        sup = g > NEG
        if not sup.any():
            continue
        coef = np.min(x[sup] - g[sup])
        if coef == NEG:
            continue
        acc = np.maximum(acc, g + coef)
    both = (acc == NEG) & (x == NEG)
    with np.errstate(invalid="ignore"):
        return bool(np.all(both | (np.abs(acc - x) <= tol)))


# random instances

def random_definite(rng, n, density=None, zero_cycles=None):
    """Irreducible matrix with λ = 0 and all entries <= 0 (hence visualized).

    Entries are integers in [-9, 0] or -inf; a Hamiltonian cycle of finite
    entries guarantees irreducibility and planted 0-weight cycles fix λ = 0.
    """
    density = rng.uniform(0.35, 0.9) if density is None else density
    a = np.where(rng.random((n, n)) < density,
                 -rng.integers(1, 10, size=(n, n)).astype(float), NEG)
    perm = rng.permutation(n)
    for k in range(n):
        i, j = perm[k], perm[(k + 1) % n]
        if a[i, j] == NEG:
            a[i, j] = -float(rng.integers(1, 10))
    count = rng.integers(1, 3) if zero_cycles is None else zero_cycles
    for _ in range(count):
        length = int(rng.integers(1, n + 1))
        nodes = rng.choice(n, size=length, replace=False)
        for k in range(length):
            a[nodes[k], nodes[(k + 1) % length]] = 0.0
    # a few stray zeros make critical graphs with chords and several components
    stray = rng.random((n, n)) < 0.08
    a[stray & (a > NEG)] = 0.0
    return a


def random_sc_critical(rng, n):
    """Definite visualized matrix whose critical graph is strongly connected."""
    a = random_definite(rng, n, zero_cycles=0)
    a[a == 0.0] = -1.0
    length = int(rng.integers(1, n + 1))
    nodes = [int(v) for v in rng.choice(n, size=length, replace=False)]
    for k in range(length):
        a[nodes[k], nodes[(k + 1) % length]] = 0.0
    if length >= 3 and rng.random() < 0.5:
        # a second zero cycle through the same nodes keeps one component
        i, j = nodes[0], nodes[2]
        a[i, j] = 0.0
    return a


def corpus(seed, count, sizes=range(3, 8), maker=random_definite):
    rng = np.random.default_rng(seed)
    sizes = list(sizes)
    return [maker(rng, sizes[k % len(sizes)]) for k in range(count)]
