"""
hypergraphs, dependency graphs and independence systems, plus the constructions
over the potential edges of K_n (triangles, cliques, u-v paths, vertex stars).

vertex identifiers are opaque strings mapped to dense integer indices in input
order; edges are stored as sorted tuples of those indices.
"""
import json
import sys
from fractions import Fraction
from itertools import combinations, permutations
from math import comb, factorial, perm

import networkx as nx
from toolshed import nopen

from . import DepBoundsException


def parse_number(s):
    """
    exact rational for strings like '0.5' or '1/3'; numbers pass through.

    >>> parse_number('0.25')
    Fraction(1, 4)
    >>> parse_number('2/6')
    Fraction(1, 3)
    """
    if isinstance(s, (int, float, Fraction)):
        return s
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError):
        raise DepBoundsException("not a number: %r" % s)


class Hypergraph(object):
    __slots__ = ('vertices', 'index', 'raw', 'edges', 'multi')

    def __init__(self, vertices, edges, multi=False):
        self.vertices = tuple(str(v) for v in vertices)
        index = {}
        for i, v in enumerate(self.vertices):
            index.setdefault(v, i)
        self.index = index
        self.raw = tuple(tuple(str(v) for v in e) for e in edges)
        self.edges = tuple(tuple(sorted(set(index[v] for v in e if v in index)))
                           for e in self.raw)
        self.multi = bool(multi)

    def __repr__(self):
        return "Hypergraph({nv} vertices, {ne} edges)".format(
            nv=len(self.vertices), ne=len(self.edges))

    def masks(self):
        "edges as integer bitmasks over the vertex indices"
        return tuple(sum(1 << i for i in e) for e in self.edges)

    def edge_names(self, i):
        return tuple(self.vertices[j] for j in self.edges[i])

    def label(self, i):
        return "{%s}" % ",".join(self.edge_names(i))

    def sizes(self):
        return sorted(set(len(e) for e in self.edges))

    def is_uniform(self):
        return len(self.sizes()) <= 1

    def subhypergraph(self, edge_ids):
        "same vertex set, only the listed edges"
        return Hypergraph(self.vertices, [self.edge_names(i) for i in edge_ids],
                          multi=self.multi)


def validate(h):
    """
    list of human-readable invariant violations; empty when `h` is valid.

    >>> validate(Hypergraph(['a'], []))
    []
    >>> validate(Hypergraph(['a', 'b'], [['a', 'x']]))
    ['edge 0 references unknown vertex x']
    """
    out = []
    seen_v = set()
    for v in h.vertices:
        if v in seen_v:
            out.append("vertex %s listed twice" % v)
        seen_v.add(v)
    seen = {}
    for i, e in enumerate(h.raw):
        if len(e) == 0:
            out.append("edge %d is empty" % i)
            continue
        for v in e:
            if v not in h.index:
                out.append("edge %d references unknown vertex %s" % (i, v))
        if len(set(e)) != len(e):
            out.append("edge %d repeats a vertex" % i)
        key = frozenset(e)
        if key in seen and not h.multi:
            out.append("edge %d duplicates edge %d" % (i, seen[key]))
        seen.setdefault(key, i)
    return out


def check(h):
    "raise with every violation listed if `h` is not a valid hypergraph"
    problems = validate(h)
    if problems:
        raise DepBoundsException("invalid hypergraph: " + "; ".join(problems))
    return h


def degree(h, v):
    """
    >>> degree(Hypergraph(['a', 'b'], [['a', 'b']]), 'a')
    1
    """
    try:
        i = h.index[str(v)]
    except KeyError:
        raise DepBoundsException("unknown vertex: %s" % v)
    return sum(1 for e in h.edges if i in e)


def degrees(h):
    counts = [0] * len(h.vertices)
    for e in h.edges:
        for i in e:
            counts[i] += 1
    return counts


def max_degree(h):
    return max(degrees(h) or [0])


class DependencyGraph(object):
    __slots__ = ('vertices', 'index', 'edges', 'adj')

    def __init__(self, vertices, edges):
        self.vertices = tuple(str(v) for v in vertices)
        self.index = dict((v, i) for i, v in enumerate(self.vertices))
        if len(self.index) != len(self.vertices):
            raise DepBoundsException("dependency graph lists a vertex twice")
        pairs = set()
        for e in edges:
            a, b = [str(x) for x in e]
            if a == b:
                raise DepBoundsException("loop at vertex %s" % a)
            for x in (a, b):
                if x not in self.index:
                    raise DepBoundsException("edge %s-%s references unknown vertex %s"
                                             % (a, b, x))
            i, j = sorted((self.index[a], self.index[b]))
            pairs.add((i, j))
        self.edges = tuple(sorted(pairs))
        adj = [set() for _ in self.vertices]
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        self.adj = tuple(frozenset(a) for a in adj)

    def __repr__(self):
        return "DependencyGraph({nv} vertices, {ne} edges)".format(
            nv=len(self.vertices), ne=len(self.edges))

    def __len__(self):
        return len(self.vertices)

    @classmethod
    def from_hypergraph(cls, h):
        "a 2-uniform hypergraph read from graph JSON"
        check(h)
        bad = [i for i, e in enumerate(h.edges) if len(e) != 2]
        if bad:
            raise DepBoundsException("edge %d has %d vertices; a graph needs 2 "
                                     "(use the intersection graph instead)"
                                     % (bad[0], len(h.edges[bad[0]])))
        return cls(h.vertices, [h.edge_names(i) for i in range(len(h.edges))])

    def as_hypergraph(self):
        return Hypergraph(self.vertices,
                          [(self.vertices[i], self.vertices[j]) for i, j in self.edges])

    def is_adjacent(self, i, j):
        return j in self.adj[i]

    def to_networkx(self):
        "nodes are the dense indices 0..n-1"
        G = nx.Graph()
        G.add_nodes_from(range(len(self.vertices)))
        G.add_edges_from(self.edges)
        return G


def dependency_graph_of(h):
    """
    intersection graph of the edge family: vertex e<i> per edge, adjacent iff
    the two edges share a vertex.
    """
    masks = h.masks()
    pairs = [("e%d" % i, "e%d" % j) for i, j in combinations(range(len(masks)), 2)
             if masks[i] & masks[j]]
    return DependencyGraph(["e%d" % i for i in range(len(masks))], pairs)


def cycle_graph(n):
    """
    >>> cycle_graph(5).edges
    ((0, 1), (0, 4), (1, 2), (2, 3), (3, 4))
    """
    if n < 3:
        raise DepBoundsException("a cycle needs n >= 3, got %d" % n)
    names = ["v%d" % i for i in range(1, n + 1)]
    return DependencyGraph(names, [(names[i], names[(i + 1) % n]) for i in range(n)])


def complete_graph(n):
    names = ["v%d" % i for i in range(1, n + 1)]
    return DependencyGraph(names, combinations(names, 2))


def _pair(a, b):
    if a > b:
        a, b = b, a
    return "%d-%d" % (a, b)


def _kn_pairs(n):
    return [_pair(a, b) for a, b in combinations(range(n), 2)]


def clique_hypergraph(n, k):
    """
    vertices are the potential edges of K_n, one hyperedge per k-clique.
    """
    if k < 3:
        raise DepBoundsException("clique size must be >= 3, got %d" % k)
    if n < k:
        raise DepBoundsException("need n >= k, got n=%d k=%d" % (n, k))
    edges = [[_pair(a, b) for a, b in combinations(c, 2)]
             for c in combinations(range(n), k)]
    return Hypergraph(_kn_pairs(n), edges)


def triangle_hypergraph(n):
    """
    >>> h = triangle_hypergraph(5)
    >>> len(h.vertices), len(h.edges), max_degree(h)
    (10, 10, 3)
    """
    if n < 3:
        raise DepBoundsException("triangle hypergraph needs n >= 3, got %d" % n)
    return clique_hypergraph(n, 3)


def _check_path_params(n, k):
    if k < 3:
        raise DepBoundsException("path length k must be >= 3, got %d" % k)
    if k > n - 1:
        raise DepBoundsException("path length k must be <= n - 1, got n=%d k=%d"
                                 % (n, k))


def path_hypergraph(n, k, u, v):
    """
    one hyperedge per length-k u-v path in K_n, as the set of its k edges.

    >>> len(path_hypergraph(5, 3, 0, 1).edges)
    6
    """
    _check_path_params(n, k)
    u, v = int(u), int(v)
    if u == v:
        raise DepBoundsException("path endpoints must differ, got u=v=%d" % u)
    for x in (u, v):
        if not 0 <= x < n:
            raise DepBoundsException("endpoint %d is not a vertex of K_%d" % (x, n))
    others = [x for x in range(n) if x not in (u, v)]
    edges = []
    for inner in permutations(others, k - 1):
        seq = (u,) + inner + (v,)
        edges.append([_pair(a, b) for a, b in zip(seq, seq[1:])])
    return Hypergraph(_kn_pairs(n), edges)


def path_count_through_edge(n, k, edge_class):
    """
    number of length-k u-v paths of K_n through a fixed edge that touches an
    endpoint ('incident') or avoids both endpoints ('interior').

    >>> path_count_through_edge(6, 3, 'incident')
    3
    >>> path_count_through_edge(6, 4, 'interior')
    8
    """
    _check_path_params(n, k)
    if edge_class in ("incident", "incident-to-endpoint"):
        return comb(n - 3, k - 2) * factorial(k - 2)
    if edge_class == "interior":
        return 2 * (k - 2) * comb(n - 4, k - 3) * factorial(k - 3)
    raise DepBoundsException("edge class must be 'incident' or 'interior', got %r"
                             % edge_class)


def path_max_degree(n, k):
    return max(path_count_through_edge(n, k, "incident"),
               path_count_through_edge(n, k, "interior"))


def path_matching_exponent(n, k):
    """
    total weight of the uniform matching 1/max-degree on the path hypergraph.

    >>> path_matching_exponent(9, 4), path_matching_exponent(7, 4)
    (Fraction(7, 1), Fraction(5, 1))
    """
    return Fraction(perm(n - 2, k - 1), path_max_degree(n, k))


def degree_hypergraph(n):
    """
    hyperedge E_i holds the potential edges of K_n at graph vertex i.

    >>> h = degree_hypergraph(4)
    >>> len(h.vertices), [len(e) for e in h.edges], max_degree(h)
    (6, [3, 3, 3, 3], 2)
    """
    if n < 2:
        raise DepBoundsException("degree hypergraph needs n >= 2, got %d" % n)
    edges = [[_pair(i, j) for j in range(n) if j != i] for i in range(n)]
    return Hypergraph(_kn_pairs(n), edges)


def graph_correlated_hypergraph(g):
    """
    seeds on the edges of `g` plus one private seed per vertex; hyperedge i
    collects the seeds of graph vertex i, so its intersection graph is `g`.
    """
    seeds = ["x:%s~%s" % (g.vertices[i], g.vertices[j]) for i, j in g.edges]
    seeds.extend("x:%s" % v for v in g.vertices)
    edges = []
    for i, v in enumerate(g.vertices):
        e = ["x:%s~%s" % (g.vertices[a], g.vertices[b]) for a, b in g.edges
             if i in (a, b)]
        e.append("x:%s" % v)
        edges.append(e)
    return Hypergraph(seeds, edges)


class IndependenceSystem(object):
    """
    ground set plus a listed family of independent sets; the family is read as
    its downward closure, so only the maximal members matter for colourings.
    """
    __slots__ = ('ground', 'index', 'sets')

    def __init__(self, ground, independent):
        self.ground = tuple(str(v) for v in ground)
        self.index = dict((v, i) for i, v in enumerate(self.ground))
        sets, seen = [], set()
        for s in independent:
            idx = []
            for v in s:
                if str(v) not in self.index:
                    raise DepBoundsException("independent set references unknown "
                                             "element %s" % v)
                idx.append(self.index[str(v)])
            f = frozenset(idx)
            if f not in seen:
                seen.add(f)
                sets.append(f)
        self.sets = tuple(sets)

    def __repr__(self):
        return "IndependenceSystem(%d elements, %d sets)" % (len(self.ground),
                                                             len(self.sets))

    def maximal(self):
        "listed sets not strictly inside another listed set, in input order"
        return [s for s in self.sets if s and not any(s < t for t in self.sets)]

    def is_independent(self, members):
        s = frozenset(self.index[str(v)] for v in members)
        return any(s <= t for t in self.sets) or not s

    def label(self, s):
        return "{%s}" % ",".join(self.ground[i] for i in sorted(s))


def validate_system(a, strict=False):
    """
    violations of the independence-system axioms. with strict=True the listed
    family itself must be hereditary, otherwise closure is implied.
    """
    out = []
    if not a.sets:
        out.append("no independent sets listed")
    for i, v in enumerate(a.ground):
        if not any(i in s for s in a.sets):
            out.append("singleton {%s} is not independent" % v)
    if strict:
        listed = set(a.sets)
        if a.sets and frozenset() not in listed:
            out.append("empty set is not listed")
        for s in a.sets:
            for x in s:
                if s - {x} and s - {x} not in listed:
                    out.append("subset %s of listed set %s is missing"
                               % (a.label(s - {x}), a.label(s)))
    return out


class VertexProbabilities(object):
    """
    inclusion probability per vertex; `default` applies to unlisted vertices.

    >>> VertexProbabilities(Fraction(1, 2)).of('anything')
    Fraction(1, 2)
    """
    __slots__ = ('default', 'values')

    def __init__(self, default=None, values=None):
        self.default = default
        self.values = dict((str(k), v) for k, v in (values or {}).items())
        for v, p in list(self.values.items()) + [("*", default)]:
            if p is None:
                continue
            if not 0 < p < 1:
                raise DepBoundsException("probability for vertex %s must lie in "
                                         "(0, 1), got %s" % (v, p))

    def of(self, v):
        p = self.values.get(str(v), self.default)
        if p is None:
            raise DepBoundsException("no probability given for vertex %s" % v)
        return p

    def vector(self, h):
        return [self.of(v) for v in h.vertices]

    def uniform(self):
        "the common probability, or None when vertices differ"
        ps = set(self.values.values())
        if self.default is not None:
            ps.add(self.default)
        return ps.pop() if len(ps) == 1 else None


def hypergraph_json(h):
    d = {"vertices": list(h.vertices),
         "edges": [list(h.edge_names(i)) for i in range(len(h.edges))]}
    if h.multi:
        d["multi"] = True
    return d


def write_json(obj, out=sys.stdout):
    out.write(json.dumps(obj) + "\n")
    out.flush()


def _load(path):
    try:
        return json.loads("".join(nopen(path)))
    except ValueError as e:
        raise DepBoundsException("could not parse JSON from %s: %s" % (path, e))


def read_hypergraph(path):
    d = _load(path)
    if not isinstance(d, dict) or "vertices" not in d or "edges" not in d:
        raise DepBoundsException("%s: expected keys 'vertices' and 'edges'" % path)
    return check(Hypergraph(d["vertices"], d["edges"], multi=d.get("multi", False)))


def read_system(path):
    d = _load(path)
    if not isinstance(d, dict) or "vertices" not in d or "independent" not in d:
        raise DepBoundsException("%s: expected keys 'vertices' and 'independent'"
                                 % path)
    return IndependenceSystem(d["vertices"], d["independent"])
