import math
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from depbounds import DepBoundsException, CapExceeded
from depbounds import bounds as B
from depbounds import oracle as O
from depbounds.hypergraph import (Hypergraph, DependencyGraph, cycle_graph,
                                  complete_graph, triangle_hypergraph,
                                  graph_correlated_hypergraph, VertexProbabilities)
from depbounds.invariants import (fractional_matching_number, uniform_matching,
                                  graph_independence_system)

HALF = Fraction(1, 2)
C5 = cycle_graph(5)
PS = [Fraction(1, 10), Fraction(1, 4), HALF, Fraction(3, 4), Fraction(9, 10)]


@pytest.mark.parametrize("p", PS)
def test_c5_law(p):
    d = O.c5_distribution(p)
    assert d.mass() == 1
    assert all(d.mean(j) == p for j in range(5))
    dep = O.check_dependency_graph(d, C5)
    assert dep.holds and dep.checked > 0 and not dep.truncated
    v = O.verify_product_inequality(d, C5, 2)
    assert v.lhs == (p ** 2 + p ** 3) / 2
    assert v.rhs == p ** 2
    assert v.holds and v.extra["chi_b"] == 5


@pytest.mark.parametrize("p", PS)
def test_example1_is_not_hypergraph_correlated(p):
    e = O.example1_checks(p)
    assert e["all_ones"] == (p ** 2 + p ** 3) / 2
    assert e["exceeds_limit"]
    assert float(e["all_ones"]) > float(p) ** 2.5


def test_example1_numbers():
    e = O.example1_checks(HALF)
    assert e["all_ones"] == Fraction(3, 16)
    assert abs(float(e["hypergraph_limit"]) - 0.17678) < 1e-5


def test_c5_law_with_float_p():
    d = O.c5_distribution(0.3)
    assert abs(d.mass() - 1) < 1e-12
    assert O.check_dependency_graph(d, C5).holds


def test_c5_rejects_bad_p():
    with pytest.raises(DepBoundsException):
        O.c5_distribution(0)


def test_dependency_check_detects_dependence():
    d = O.c5_distribution(HALF)
    empty = DependencyGraph(C5.vertices, [])
    dep = O.check_dependency_graph(d, empty)
    assert not dep.holds and dep.failures
    full = O.check_dependency_graph(d, complete_graph(5))
    assert full.holds and full.checked == 0


def test_dependency_check_truncates(capsys):
    h = Hypergraph("abcdef", [[v] for v in "abcdef"])
    d = O.correlated_distribution(h, VertexProbabilities(HALF))
    dep = O.check_dependency_graph(d, DependencyGraph(d.names, []), subset_cap=2)
    assert dep.holds and dep.truncated
    assert "WARNING" in capsys.readouterr().err


def test_distribution_validation():
    with pytest.raises(DepBoundsException, match="sum to"):
        O.DiscreteJointDistribution([((0,), HALF)])
    with pytest.raises(DepBoundsException, match="lengths"):
        O.DiscreteJointDistribution([((0,), HALF), ((0, 1), HALF)])
    with pytest.raises(DepBoundsException, match="negative"):
        O.DiscreteJointDistribution([((0,), Fraction(3, 2)), ((1,), -HALF)])
    d = O.DiscreteJointDistribution([((0,), HALF), ((0,), Fraction(1, 4)),
                                     ((1,), Fraction(1, 4))])
    assert len(d.support) == 2


def test_product_expectation():
    d = O.c5_distribution(HALF)
    assert O.exact_product_expectation(d, [1, 0, 0, 0, 0]) == HALF
    assert O.exact_product_expectation(d, [1] * 5) == Fraction(3, 16)
    with pytest.raises(DepBoundsException):
        O.exact_product_expectation(d, [1])


def test_coordinates_outside_unit_interval():
    d = O.DiscreteJointDistribution([((2,), 1)])
    with pytest.raises(DepBoundsException, match="outside"):
        O.verify_product_inequality(d, DependencyGraph(["a"], []), 1)


def test_holder_with_independence_system():
    d = O.c5_distribution(Fraction(1, 4))
    v = O.verify_product_inequality(d, graph_independence_system(C5), 2)
    assert v.holds and v.extra["chi_b"] == 5


def test_independence_probability_c5():
    h = C5.as_hypergraph()
    pi = O.exact_independence_probability(h, VertexProbabilities(HALF))
    assert pi == Fraction(11, 32)
    bound = B.finner_independence_bound(h, VertexProbabilities(HALF),
                                        fractional_matching_number(h)[1])
    assert float(pi) <= bound.value + 1e-9


def test_independence_probability_cap():
    with pytest.raises(CapExceeded):
        O.exact_independence_probability(triangle_hypergraph(8), VertexProbabilities(HALF))


def test_independence_probability_same_for_any_workers():
    h = triangle_hypergraph(5)
    pv = VertexProbabilities(Fraction(1, 3))
    assert O.exact_independence_probability(h, pv, threads=1) == \
        O.exact_independence_probability(h, pv, threads=2)


def test_triangle_free_below_both_bounds():
    h = triangle_hypergraph(6)
    for p in map(float, B.DEFAULT_GRID):
        exact = O.exact_independence_probability(h, VertexProbabilities(p))
        assert exact <= B.finner_triangle_bound(6, p).value + 1e-12
        assert exact <= B.janson_triangle_bound(6, p).value + 1e-12


def test_degree_absence_below_bound():
    for p in (0.2, 0.5, 0.8):
        exact = O.exact_degree_absence_probability(4, 1, p)
        assert 0 < exact <= B.degree_absence_bound(4, 1, p).value + 1e-12


def test_mc_independence_c5():
    h = C5.as_hypergraph()
    est = O.mc_independence(h, VertexProbabilities(HALF), 10 ** 6, 12345)
    assert est.covers(Fraction(11, 32))
    assert est.half_width < 1e-3
    assert est.to_json()["seed"] == 12345


def test_mc_reproducible():
    h = triangle_hypergraph(5)
    pv = VertexProbabilities(HALF)
    a = O.mc_independence(h, pv, 40000, 7)
    b = O.mc_independence(h, pv, 40000, 7, threads=2)
    c = O.mc_independence(h, pv, 40000, 8)
    assert a.estimate == b.estimate
    assert a.as_row() == b.as_row()
    assert c.seed == 8
    with pytest.raises(DepBoundsException):
        O.mc_independence(h, pv, 0, 7)
    with pytest.raises(DepBoundsException):
        O.mc_independence(h, pv, 10, -1)


@pytest.mark.parametrize("eps", [Fraction(1, 10), Fraction(2, 10), Fraction(3, 10)])
def test_mc_tail_below_ramon(eps):
    h = triangle_hypergraph(5)
    phi = uniform_matching(h)
    Phi, q = phi.total(), HALF ** 3
    t = Phi * (q + eps)
    est = O.mc_tail(h, VertexProbabilities(HALF), t, 10 ** 5, 2024, phi)
    bound = B.ramon_concentration_bound(Phi, q, eps)
    assert est.estimate <= bound.value + 3 * est.half_width
    exact = O.exact_tail(O.correlated_distribution(h, VertexProbabilities(HALF)),
                         t * 3)
    assert est.covers(exact, widths=4) or est.estimate == exact == 0


def test_half_width_shrinks_with_samples():
    h = C5.as_hypergraph()
    pv = VertexProbabilities(HALF)
    w = [O.mc_independence(h, pv, n, 99).half_width for n in (40000, 80000, 160000)]
    assert w[1] / w[0] == pytest.approx(2 ** -0.5, rel=0.05)
    assert w[2] / w[0] == pytest.approx(0.5, rel=0.05)


def test_mc_distribution_tail():
    d = O.c5_distribution(HALF)
    exact = O.exact_tail(d, 3)
    assert exact == Fraction(8, 16)
    est = O.mc_distribution_tail(d, 3, 50000, 3)
    assert est.covers(exact, widths=4)


def test_correlated_mean_kind():
    h = Hypergraph("abc", [["a", "b"], ["b", "c"]])
    d = O.correlated_distribution(h, VertexProbabilities(HALF), kind="mean")
    assert d.mean(0) == HALF
    assert all(y in (0, HALF, 1) for vec, _ in d.support for y in vec)
    with pytest.raises(DepBoundsException):
        O.correlated_distribution(h, VertexProbabilities(HALF), kind="max")


def test_verify_finner_c5():
    h = C5.as_hypergraph()
    _, phi = fractional_matching_number(h)
    v = O.verify_finner(h, VertexProbabilities(HALF), phi)
    assert v.holds
    assert abs(v.lhs - 0.5 ** 5) < 1e-12
    c = O.verify_finner(h, VertexProbabilities(HALF), phi, kind="complement")
    assert c.holds
    assert abs(c.lhs - 11 / 32.) < 1e-12


def test_verify_finner_disjoint_is_tight():
    h = Hypergraph("abcd", [["a", "b"], ["c", "d"]])
    v = O.verify_finner(h, VertexProbabilities(HALF), uniform_matching(h))
    assert v.rhs == Fraction(1, 16)
    assert abs(v.lhs - 1 / 16.) < 1e-12 and v.holds


hypergraphs = st.integers(1, 14).flatmap(lambda n: st.lists(
    st.frozensets(st.integers(0, n - 1), min_size=1, max_size=4),
    min_size=1, max_size=10, unique=True).map(
    lambda es: Hypergraph([str(i) for i in range(n)],
                          [[str(v) for v in sorted(e)] for e in es])))


@settings(max_examples=200, deadline=None)
@given(hypergraphs, st.integers(1, 9), st.booleans(), st.booleans())
def test_finner_suite(h, pi, optimal, complement):
    phi = fractional_matching_number(h)[1] if optimal else uniform_matching(h)
    kind = "complement" if complement else "product"
    v = O.verify_finner(h, VertexProbabilities(pi / 10.), phi, kind)
    assert v.lhs <= float(v.rhs) + O.CHECK_TOL


graphs = st.integers(1, 4).flatmap(lambda n: st.sets(
    st.sampled_from(list(combinations(range(n), 2)) or [None]), max_size=6).map(
    lambda es: DependencyGraph([str(i) for i in range(n)],
                               [(str(a), str(b)) for a, b in
                                (e for e in es if e is not None)])))


@settings(max_examples=100, deadline=None)
@given(graphs, st.sampled_from([1, 2]), st.sampled_from(PS), st.booleans())
def test_holder_on_correlated_families(g, b, p, mean):
    h = graph_correlated_hypergraph(g)
    d = O.correlated_distribution(h, VertexProbabilities(p),
                                  kind="mean" if mean else "product")
    assert O.check_dependency_graph(d, g).holds
    assert O.verify_product_inequality(d, g, b).holds
