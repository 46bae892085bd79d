from fractions import Fraction
from itertools import permutations

import pytest

from depbounds import DepBoundsException
from depbounds.hypergraph import (Hypergraph, validate, check, degree, max_degree,
                                  DependencyGraph, dependency_graph_of, cycle_graph,
                                  complete_graph, triangle_hypergraph,
                                  clique_hypergraph, path_hypergraph,
                                  path_count_through_edge, path_matching_exponent,
                                  degree_hypergraph, graph_correlated_hypergraph,
                                  IndependenceSystem, validate_system,
                                  VertexProbabilities, hypergraph_json,
                                  read_hypergraph, write_json, parse_number)


def test_validate_reports_every_problem():
    h = Hypergraph(["a", "b", "a"], [[], ["a", "x"], ["a", "a", "b"], ["b", "a"]])
    problems = validate(h)
    assert "vertex a listed twice" in problems
    assert "edge 0 is empty" in problems
    assert "edge 1 references unknown vertex x" in problems
    assert "edge 2 repeats a vertex" in problems
    assert "edge 3 duplicates edge 2" in problems


def test_duplicate_edges_allowed_for_multi():
    edges = [["a", "b"], ["b", "a"]]
    assert validate(Hypergraph("ab", edges)) == ["edge 1 duplicates edge 0"]
    assert validate(Hypergraph("ab", edges, multi=True)) == []


def test_check_raises_with_message():
    with pytest.raises(DepBoundsException, match="unknown vertex z"):
        check(Hypergraph("ab", [["a", "z"]]))


def test_degree():
    h = Hypergraph("abc", [["a", "b"], ["b", "c"]])
    assert degree(h, "b") == 2
    assert degree(h, "a") == 1
    assert max_degree(Hypergraph("ab", [])) == 0
    with pytest.raises(DepBoundsException):
        degree(h, "q")


def test_cycle_as_hypergraph():
    h = cycle_graph(5).as_hypergraph()
    assert len(h.vertices) == 5 and len(h.edges) == 5
    assert validate(h) == []
    with pytest.raises(DepBoundsException):
        cycle_graph(2)


def test_triangle_and_clique_hypergraphs():
    h = triangle_hypergraph(5)
    assert (len(h.vertices), len(h.edges)) == (10, 10)
    assert max_degree(h) == 3
    assert set(len(e) for e in h.edges) == {3}
    k4 = clique_hypergraph(5, 4)
    assert len(k4.edges) == 5
    assert k4.sizes() == [6]
    with pytest.raises(DepBoundsException):
        triangle_hypergraph(2)


def test_path_hypergraph_counts():
    assert len(path_hypergraph(6, 3, 0, 1).edges) == 12
    h = path_hypergraph(6, 4, 0, 1)
    assert degree(h, "0-2") == path_count_through_edge(6, 4, "incident") == 6
    assert degree(h, "2-3") == path_count_through_edge(6, 4, "interior") == 8
    assert degree(h, "1-5") == 6


def _paths_through(n, k, a, b):
    hits = 0
    for inner in permutations(range(2, n), k - 1):
        seq = (0,) + inner + (1,)
        steps = set(frozenset(s) for s in zip(seq, seq[1:]))
        hits += frozenset((a, b)) in steps
    return hits


@pytest.mark.parametrize("n,k", [(n, k) for n in range(4, 8)
                                 for k in range(3, min(5, n - 1) + 1)])
def test_path_counts_match_enumeration(n, k):
    assert _paths_through(n, k, 0, 2) == path_count_through_edge(n, k, "incident")
    assert _paths_through(n, k, 1, n - 1) == path_count_through_edge(n, k, "incident")
    assert _paths_through(n, k, 2, 3) == path_count_through_edge(n, k, "interior")


@pytest.mark.parametrize("n,k", [(3, 4), (5, 2), (6, 6)])
def test_path_parameters_rejected(n, k):
    with pytest.raises(DepBoundsException):
        path_hypergraph(n, k, 0, 1)


def test_path_endpoints_rejected():
    with pytest.raises(DepBoundsException):
        path_hypergraph(5, 3, 2, 2)
    with pytest.raises(DepBoundsException):
        path_hypergraph(5, 3, 0, 5)


def test_path_matching_exponent():
    assert path_matching_exponent(9, 4) == 7
    assert path_matching_exponent(7, 4) == 5
    # even n with k = n/2: the edges at u cover every path
    assert path_matching_exponent(6, 3) == 4
    h = path_hypergraph(6, 3, 0, 1)
    assert Fraction(len(h.edges), max_degree(h)) == path_matching_exponent(6, 3)


def test_degree_hypergraph():
    h = degree_hypergraph(5)
    assert len(h.vertices) == 10
    assert all(len(e) == 4 for e in h.edges)
    assert max_degree(h) == 2


def test_dependency_graph_rejects_loops_and_unknowns():
    with pytest.raises(DepBoundsException, match="loop"):
        DependencyGraph("ab", [("a", "a")])
    with pytest.raises(DepBoundsException, match="unknown vertex c"):
        DependencyGraph("ab", [("a", "c")])
    g = DependencyGraph("abc", [("b", "a"), ("a", "b")])
    assert g.edges == ((0, 1),)
    assert g.is_adjacent(1, 0) and not g.is_adjacent(0, 2)


def test_from_hypergraph_needs_two_uniform():
    with pytest.raises(DepBoundsException, match="intersection graph"):
        DependencyGraph.from_hypergraph(triangle_hypergraph(4))
    g = DependencyGraph.from_hypergraph(cycle_graph(5).as_hypergraph())
    assert g.edges == cycle_graph(5).edges


def test_intersection_graph():
    g = dependency_graph_of(triangle_hypergraph(4))
    assert g.edges == complete_graph(4).edges
    disjoint = Hypergraph("abcd", [["a", "b"], ["c", "d"]])
    assert dependency_graph_of(disjoint).edges == ()


@pytest.mark.parametrize("g", [cycle_graph(5), complete_graph(4),
                               DependencyGraph("abc", [("a", "b")])])
def test_graph_correlated_hypergraph_recovers_graph(g):
    h = graph_correlated_hypergraph(g)
    assert validate(h) == []
    assert len(h.edges) == len(g.vertices)
    assert dependency_graph_of(h).edges == g.edges


def test_independence_system():
    a = IndependenceSystem("abc", [["a", "b"], ["a"], ["c"], ["b", "a"]])
    assert len(a.sets) == 3
    assert sorted(a.label(s) for s in a.maximal()) == ["{a,b}", "{c}"]
    assert a.is_independent(["b"]) and not a.is_independent(["b", "c"])
    assert validate_system(a) == []
    assert "empty set is not listed" in validate_system(a, strict=True)
    with pytest.raises(DepBoundsException):
        IndependenceSystem("ab", [["z"]])
    assert validate_system(IndependenceSystem("ab", [["a"]])) == \
        ["singleton {b} is not independent"]


def test_vertex_probabilities():
    pv = VertexProbabilities(Fraction(1, 2), {"a": Fraction(1, 3)})
    assert pv.of("a") == Fraction(1, 3) and pv.of("b") == Fraction(1, 2)
    assert pv.uniform() is None
    assert VertexProbabilities(0.5).uniform() == 0.5
    with pytest.raises(DepBoundsException):
        VertexProbabilities(1)
    with pytest.raises(DepBoundsException):
        VertexProbabilities(values={"a": 0.5}).of("b")


def test_parse_number():
    assert parse_number("0.1") == Fraction(1, 10)
    with pytest.raises(DepBoundsException):
        parse_number("half")


def test_json_round_trip(tmp_path):
    h = path_hypergraph(5, 3, 0, 1)
    path = tmp_path / "p.json"
    with open(str(path), "w") as fh:
        write_json(hypergraph_json(h), fh)
    back = read_hypergraph(str(path))
    assert back.vertices == h.vertices
    assert back.edges == h.edges


def test_read_rejects_bad_files(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"vertices": ["a"]}')
    with pytest.raises(DepBoundsException, match="expected keys"):
        read_hypergraph(str(bad))
    bad.write_text('{"vertices": ["a"], "edges": [["a"], ["a"]]}')
    with pytest.raises(DepBoundsException, match="duplicates"):
        read_hypergraph(str(bad))
    bad.write_text("not json")
    with pytest.raises(DepBoundsException, match="could not parse"):
        read_hypergraph(str(bad))
