import math

import numpy as np
import pytest

from maxplus.errors import AcyclicMatrix, DivergentStar, NotDefinite
from maxplus.periodic import PeriodicPowerEngine, csr
from maxplus.semiring import NEG_INF, identity, mp_matmul, mp_power
from maxplus.spectral import (critical_graph, critical_matrix, definite_form, eigencone_basis,
                              is_irreducible, is_visualized, kleene_star, max_cycle_mean,
                              spectral_projector, subeigencone_basis, visualize)
from oracles import (brute_critical, brute_components, brute_cyclicity, brute_lambda, corpus,
                     fast_mul, reach, series_star)

CORPUS = corpus(11, 60)


def random_matrix(rng, n, lo=-9, hi=0, density=0.7):
    a = rng.integers(lo, hi + 1, size=(n, n)).astype(float)
    a[rng.random((n, n)) > density] = NEG_INF
    return a


def test_lambda_examples(gamma6, twin3, tri6):
    assert max_cycle_mean(tri6) == 0.0
    assert max_cycle_mean(gamma6) == 0.0 and max_cycle_mean(twin3) == 0.0
    assert max_cycle_mean([[2.5]]) == 2.5
    assert max_cycle_mean([[NEG_INF, 0.0], [NEG_INF, NEG_INF]]) == NEG_INF


def test_lambda_matches_cycle_enumeration():
    rng = np.random.default_rng(1)
    for _ in range(80):
        n = int(rng.integers(1, 7))
        a = random_matrix(rng, n, density=rng.uniform(0.2, 1.0))
        expected = brute_lambda(a)
        got = max_cycle_mean(a)
        if expected is None:
            assert got == NEG_INF
        else:
            assert abs(got - float(expected)) < 1e-12


def test_lambda_shift_and_power_laws():
    rng = np.random.default_rng(2)
    for _ in range(30):
        a = random_matrix(rng, 5, density=0.8)
        lam = max_cycle_mean(a)
        if lam == NEG_INF:
            continue
        assert abs(max_cycle_mean(a + 2.5) - (lam + 2.5)) < 1e-12
        for k in (2, 3):
            assert abs(max_cycle_mean(mp_power(a, k)) - k * lam) < 1e-9


def test_irreducibility_against_reachability():
    rng = np.random.default_rng(3)
    block = np.full((4, 4), NEG_INF)
    block[:2, :2] = 0.0
    block[2:, 2:] = 0.0
    assert not is_irreducible(block)
    for _ in range(50):
        n = int(rng.integers(1, 7))
        a = random_matrix(rng, n, density=rng.uniform(0.1, 0.6))
        nodes = list(range(n))
        edges = [(i, j) for i in nodes for j in nodes if a[i, j] > NEG_INF]
        r = reach(nodes, edges)
        assert is_irreducible(a) == all(len(r[v]) == n for v in nodes)


def test_definite_form():
    assert definite_form([[1.0]]).tolist() == [[0.0]]
    a = np.array([[1.0, 3.0], [-1.0, NEG_INF]])
    d = definite_form(a)
    assert max_cycle_mean(d) == 0.0 and d[1, 1] == NEG_INF
    with pytest.raises(AcyclicMatrix):
        definite_form([[NEG_INF, 0.0], [NEG_INF, NEG_INF]])


def test_star_example_from_non_critical_block(tri6):
    b = tri6[3:, 3:]
    assert b.tolist() == [[-1, -1, -3], [-2, -4, -1], [-1, -4, -1]]
    assert kleene_star(b).tolist() == [[0, -1, -2], [-2, 0, -1], [-1, -2, 0]]


def test_star_properties_and_series_oracle():
    assert np.array_equal(kleene_star(np.full((3, 3), NEG_INF)), identity(3))
    for a in CORPUS:
        star = kleene_star(a)
        assert np.array_equal(star, series_star(a))
        assert np.array_equal(mp_matmul(star, star), star)
        assert (np.diag(star) == 0).all() and (star >= a).all()


def test_star_diverges_for_positive_cycle():
    with pytest.raises(DivergentStar):
        kleene_star([[0.5]])
    with pytest.raises(DivergentStar):
        spectral_projector([[0.0, 1.0], [0.0, 0.0]])


def test_critical_graph_examples(gamma6, twin3):
    sd = critical_graph(gamma6)
    assert sd.components == ((0, 1, 2, 3), (4, 5, 6))
    assert sd.cyclicities == (2, 3) and sd.gamma == 6
    assert sd.noncritical_nodes == (7, 8) and sd.c == 7 and sd.cbar == 2
    sd = critical_graph(twin3)
    assert [len(c) for c in sd.components] == [6, 3]
    assert sd.cyclicities == (3, 3) and sd.gamma == 3
    loop = np.array([[0.0, -1.0], [-1.0, -5.0]])
    sd = critical_graph(loop)
    assert sd.components == ((0,),) and sd.gamma == 1


def test_critical_graph_matches_cycle_enumeration():
    for a in CORPUS:
        sd = critical_graph(a)
        lam, nodes, edges = brute_critical(a)
        assert sd.lam == lam
        assert list(sd.critical_nodes) == nodes and set(sd.critical_edges) == edges
        comps = brute_components(nodes, edges)
        assert sorted(sd.components) == comps
        for comp, g in zip(sd.components, sd.cyclicities):
            assert g == brute_cyclicity(a, comp, edges)
        assert sd.gamma == math.lcm(*sd.cyclicities)


def test_critical_graph_structure_invariants():
    for a in CORPUS:
        sd = critical_graph(a)
        members = [v for comp in sd.components for v in comp]
        assert sorted(members) == list(sd.critical_nodes)
        for i, j in sd.critical_edges:
            assert sd.component_of[i] == sd.component_of[j]


def test_critical_graph_invariant_under_permutation():
    rng = np.random.default_rng(4)
    for a in CORPUS[:20]:
        n = a.shape[0]
        p = rng.permutation(n)
        b = a[np.ix_(p, p)]
        sd_a, sd_b = critical_graph(a), critical_graph(b)
        mapped = {(int(p[i]), int(p[j])) for i, j in sd_b.critical_edges}
        assert mapped == set(sd_a.critical_edges)
        assert sorted(sd_a.cyclicities) == sorted(sd_b.cyclicities)


def test_critical_matrix_boolean_correspondence():
    """(A^[C])^k equals (A^k)^[C] for visualized A."""
    for a in CORPUS[:25]:
        sd = critical_graph(a)
        s = critical_matrix(a, sd)
        for k in (1, 2, 3, 5):
            ak = mp_power(a, k)
            sk = mp_power(s, k)
            # critical part of A^k: entries reached by critical walks only
            crit_walks = sk == 0.0
            assert (ak[crit_walks] == 0.0).all()
            walks = np.full(a.shape, NEG_INF)
            walks[crit_walks] = 0.0
            assert np.array_equal(walks, sk)


def test_spectral_projector(tri6):
    a = np.array([[0.0, -1.0], [-2.0, 0.0]])
    assert np.array_equal(spectral_projector(a), kleene_star(a))
    q = spectral_projector(mp_power(tri6, 3))
    a9 = mp_power(tri6, 9)
    assert np.array_equal(q[:3], a9[:3])
    for a in CORPUS[:30]:
        e = PeriodicPowerEngine(a)
        d = csr(e)
        q = spectral_projector(mp_power(a, e.gamma))
        assert np.array_equal(q, mp_matmul(d.C, d.R))
        star = kleene_star(a)
        crit = list(critical_graph(a).critical_nodes)
        q1 = spectral_projector(a)
        assert np.array_equal(q1[:, crit], star[:, crit])
        assert np.array_equal(q1[crit, :], star[crit, :])


def test_eigencone_bases(tri6):
    basis = eigencone_basis(tri6)
    assert len(basis) == 1
    v = basis[0]
    assert np.array_equal(fast_mul(tri6, v[:, None])[:, 0], v)
    assert len(eigencone_basis(identity(3))) == 3
    assert all(np.array_equal(b, identity(3)[:, k]) for k, b in enumerate(eigencone_basis(identity(3))))
    for a in CORPUS[:30]:
        sd = critical_graph(a)
        for v in eigencone_basis(a):
            assert np.array_equal(fast_mul(a, v[:, None])[:, 0], v)
        sub = subeigencone_basis(a)
        assert len(sub) == len(sd.components) + sd.cbar
        for x in sub:
            assert (fast_mul(a, x[:, None])[:, 0] <= x).all()
            for i, j in sd.critical_edges:
                assert a[i, j] + x[j] == x[i]
        ag = mp_power(a, sd.gamma)
        for v in eigencone_basis(ag):
            assert np.array_equal(fast_mul(ag, v[:, None])[:, 0], v)


def test_non_definite_bases_rejected():
    with pytest.raises(NotDefinite):
        eigencone_basis([[-1.0]])


@pytest.mark.parametrize("strict", [False, True])
def test_visualize_invariants(strict):
    rng = np.random.default_rng(5)
    for a in CORPUS[:40]:
        d = rng.uniform(-5, 5, size=a.shape[0])
        scaled = a + d[:, None] - d[None, :]
        vis = visualize(scaled, strict=strict)
        sd = critical_graph(scaled)
        assert is_visualized(vis.matrix, strict=strict)
        assert (vis.matrix <= 1e-9).all()
        for i, j in sd.critical_edges:
            assert vis.matrix[i, j] == 0.0
        if strict:
            off = np.ones(a.shape, dtype=bool)
            for i, j in sd.critical_edges:
                off[i, j] = False
            assert (vis.matrix[off] < -1e-9).all()
        assert set(critical_graph(vis.matrix).critical_edges) == set(sd.critical_edges)
        assert np.allclose(vis.to_original(vis.matrix)[a > NEG_INF], scaled[a > NEG_INF])


def test_visualize_examples(twin3):
    assert visualize([[0.0]]).matrix.tolist() == [[0.0]]
    vis = visualize(twin3, strict=True)
    assert is_visualized(vis.matrix, strict=True)
    assert set(critical_graph(vis.matrix).critical_edges) == set(critical_graph(twin3).critical_edges)
    assert is_visualized(twin3, strict=True)
