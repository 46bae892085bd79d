from fractions import Fraction
import os
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from depbounds import DepBoundsException, CapExceeded
from depbounds.hypergraph import (Hypergraph, DependencyGraph, cycle_graph,
                                  complete_graph, triangle_hypergraph, path_hypergraph,
                                  IndependenceSystem, read_system)
from depbounds.invariants import (FractionalWeighting, fractional_matching_number,
                                  fractional_cover_number, uniform_matching,
                                  maximal_independent_sets, greedy_coloring,
                                  fractional_chromatic_number, b_fold_chromatic_number,
                                  independence_system_chi_star,
                                  independence_system_chi_b, graph_independence_system,
                                  check_monotonicity)

HERE = os.path.dirname(os.path.abspath(__file__))
C5 = cycle_graph(5)


def test_c5_colouring_numbers():
    chi, cert = fractional_chromatic_number(C5)
    assert chi == Fraction(5, 2)
    assert cert.problems(C5) == []
    assert b_fold_chromatic_number(C5, 1)[0] == 3
    assert b_fold_chromatic_number(C5, 2)[0] == 5


def test_b_fold_certificate_is_a_colouring():
    value, cert = b_fold_chromatic_number(C5, 2)
    assert cert.problems(C5) == []
    colours = cert.colors()
    assert all(len(colours[v]) == 2 for v in range(5))
    for i, j in C5.edges:
        assert not set(colours[i]) & set(colours[j])
    assert len(set(c for cs in colours.values() for c in cs)) == value


def test_complete_graph():
    g = complete_graph(4)
    assert fractional_chromatic_number(g)[0] == 4
    assert b_fold_chromatic_number(g, 2)[0] == 8


def test_matching_numbers():
    assert fractional_matching_number(C5.as_hypergraph())[0] == Fraction(5, 2)
    nu, phi = fractional_matching_number(triangle_hypergraph(5))
    assert nu == Fraction(10, 3)
    assert phi.violation(triangle_hypergraph(5)) is None
    assert phi.total() == nu
    assert fractional_matching_number(path_hypergraph(6, 3, 0, 1))[0] == 4
    assert fractional_matching_number(Hypergraph("ab", []))[0] == 0


def test_matching_json():
    _, phi = fractional_matching_number(C5.as_hypergraph())
    d = phi.to_json()
    assert d["value"] == "5/2"
    assert set(d["weights"].values()) == {"1/2"}


def test_violation_names_vertex():
    h = Hypergraph("abc", [["a", "b"], ["b", "c"]])
    phi = FractionalWeighting({0: 1, 1: 1})
    assert phi.violation(h) == "vertex b carries load 2 > 1"
    assert FractionalWeighting({5: 1}).violation(h).startswith("weight on edge 5")
    with pytest.raises(DepBoundsException):
        FractionalWeighting({0: -1})


def test_uniform_matching():
    h = triangle_hypergraph(5)
    phi = uniform_matching(h)
    assert phi.total() == Fraction(10, 3)
    assert phi.violation(h) is None


def test_float_mode_agrees():
    for h in (triangle_hypergraph(5), C5.as_hypergraph(), path_hypergraph(6, 4, 0, 1)):
        exact = fractional_matching_number(h)[0]
        approx = fractional_matching_number(h, mode="float")[0]
        assert abs(approx - float(exact)) < 1e-8
    assert abs(fractional_chromatic_number(C5, mode="float")[0] - 2.5) < 1e-8


def test_maximal_independent_sets():
    assert maximal_independent_sets(DependencyGraph("abc", [])) == [(0, 1, 2)]
    assert maximal_independent_sets(complete_graph(3)) == [(0,), (1,), (2,)]


def _petersen():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return DependencyGraph([str(i) for i in range(10)],
                           [(str(a), str(b)) for a, b in outer + spokes + inner])


@pytest.mark.parametrize("g,chi_star", [(cycle_graph(7), Fraction(7, 3)),
                                        (_petersen(), Fraction(5, 2))])
def test_b_fold_reaches_fractional_at_denominator(g, chi_star):
    value, cert = fractional_chromatic_number(g)
    assert value == chi_star
    b = chi_star.denominator
    chi_b, cert_b = b_fold_chromatic_number(g, b)
    assert cert_b.problems(g) == []
    assert Fraction(chi_b, b) == chi_star


def test_caps():
    with pytest.raises(CapExceeded, match="greedy_coloring"):
        fractional_chromatic_number(cycle_graph(30))
    with pytest.raises(CapExceeded):
        b_fold_chromatic_number(C5, 9)
    with pytest.raises(DepBoundsException):
        b_fold_chromatic_number(C5, 0)


def test_independence_systems():
    a = IndependenceSystem("xyz", [["x"], ["y"], ["z"]])
    assert independence_system_chi_star(a)[0] == 3
    assert independence_system_chi_b(a, 2)[0] == 6
    c5 = read_system(os.path.join(HERE, "..", "example", "c5-system.json"))
    assert independence_system_chi_star(c5)[0] == Fraction(5, 2)
    value, cert = independence_system_chi_b(c5, 2)
    assert value == 5
    assert cert.problems(c5) == []
    with pytest.raises(DepBoundsException, match="singleton"):
        independence_system_chi_star(IndependenceSystem("xy", [["x"]]))


def test_graph_independence_system_matches_graph():
    a = graph_independence_system(C5)
    assert independence_system_chi_star(a)[0] == fractional_chromatic_number(C5)[0]


def test_monotonicity():
    h = triangle_hypergraph(5)
    sub = h.subhypergraph(range(4))
    nu_sub, nu_super, ok = check_monotonicity(sub, h)
    assert ok and nu_sub <= nu_super
    with pytest.raises(DepBoundsException, match="missing"):
        check_monotonicity(h, sub)


graphs = st.integers(2, 7).flatmap(lambda n: st.sets(
    st.sampled_from(list(combinations(range(n), 2))), max_size=12).map(
    lambda es: DependencyGraph([str(i) for i in range(n)],
                               [(str(a), str(b)) for a, b in es])))


@settings(max_examples=40, deadline=None)
@given(graphs)
def test_maximal_sets_match_enumeration(g):
    n = len(g.vertices)
    independent = [s for r in range(1, n + 1) for s in combinations(range(n), r)
                   if not any(g.is_adjacent(i, j) for i, j in combinations(s, 2))]
    maximal = [s for s in independent
               if not any(set(s) < set(t) for t in independent)]
    assert maximal_independent_sets(g) == sorted(maximal)


@settings(max_examples=40, deadline=None)
@given(graphs)
def test_colouring_chain(g):
    colours = greedy_coloring(g)
    for i, j in g.edges:
        assert colours[i] != colours[j]
    chi_star, cert = fractional_chromatic_number(g)
    assert cert.problems(g) == []
    chi1 = b_fold_chromatic_number(g, 1)[0]
    chi2, cert2 = b_fold_chromatic_number(g, 2)
    assert cert2.problems(g) == []
    assert chi_star <= Fraction(chi2, 2) <= chi1 <= max(colours) + 1


hypergraphs = st.lists(st.frozensets(st.integers(0, 6), min_size=1, max_size=3),
                       min_size=1, max_size=8, unique=True).map(
    lambda es: Hypergraph([str(i) for i in range(7)],
                          [[str(v) for v in sorted(e)] for e in es]))


@settings(max_examples=40, deadline=None)
@given(hypergraphs)
def test_matching_cover_duality(h):
    nu, phi = fractional_matching_number(h)
    assert phi.violation(h) is None
    assert fractional_cover_number(h)[0] == nu
    assert uniform_matching(h).total() <= nu
