"""
fractional matching number nu*(H), fractional chromatic number chi*(G), b-fold
chromatic numbers chi_b(G), and the same colouring numbers for independence
systems. all exact by default (rational LP, exhaustive search).
"""
import sys
from fractions import Fraction
from math import ceil

import networkx as nx

from . import DepBoundsException, CapExceeded
from .hypergraph import check, max_degree, IndependenceSystem
from .lp import LpProblem, solve

MAX_VERTICES = 24
MAX_FOLD = 8


def fmt(x):
    """
    >>> fmt(Fraction(5, 2)), fmt(Fraction(3)), fmt(4)
    ('5/2', '3', '4')
    """
    if isinstance(x, float):
        return repr(x)
    return str(x)


class FractionalWeighting(object):
    """
    edge (or independent set) index -> nonnegative weight. as a fractional
    matching every vertex load sum_{e ∋ v} w(e) is at most 1.
    """
    __slots__ = ('weights', 'labels')

    def __init__(self, weights, labels=None):
        self.weights = dict((k, w) for k, w in weights.items() if w)
        for k, w in self.weights.items():
            if w < 0:
                raise DepBoundsException("weight of %s is negative: %s" % (k, w))
        self.labels = labels

    def __repr__(self):
        return "FractionalWeighting(total=%s, support=%d)" % (self.total(),
                                                             len(self.weights))

    def get(self, k):
        return self.weights.get(k, 0)

    def total(self):
        return sum(self.weights.values(), Fraction(0))

    def loads(self, h):
        out = [Fraction(0)] * len(h.vertices)
        for k, w in self.weights.items():
            for v in h.edges[k]:
                out[v] += w
        return out

    def violation(self, h, tol=0):
        "message naming the first overloaded vertex, or None for a valid matching"
        for k in self.weights:
            if not 0 <= k < len(h.edges):
                return "weight on edge %d, which is not in the hypergraph" % k
        for v, load in enumerate(self.loads(h)):
            if load > 1 + tol:
                return "vertex %s carries load %s > 1" % (h.vertices[v], fmt(load))
        return None

    def to_json(self):
        lab = self.labels or {}
        return {"value": fmt(self.total()),
                "weights": dict((lab[k] if k < len(lab) else "e%d" % k, fmt(w))
                                for k, w in sorted(self.weights.items()))}


def fractional_matching_number(h, mode="rational"):
    """
    nu*(H) = max sum_e phi(e) over fractional matchings, with an optimal phi.

    >>> from .hypergraph import Hypergraph
    >>> fractional_matching_number(Hypergraph(['a', 'b'], [['a', 'b']]))[0]
    Fraction(1, 1)
    """
    check(h)
    labels = [h.label(i) for i in range(len(h.edges))]
    if not h.edges:
        return Fraction(0), FractionalWeighting({}, labels)
    A = [[1 if v in e else 0 for e in h.edges] for v in range(len(h.vertices))]
    sol = solve(LpProblem([1] * len(h.edges), A, [1] * len(h.vertices)), mode)
    if sol.status != "optimal":
        raise DepBoundsException("matching LP returned %s" % sol.status)
    return sol.value, FractionalWeighting(dict(enumerate(sol.x)), labels)


def fractional_cover_number(h, mode="rational"):
    "the dual LP: min sum_v y_v with sum_{v in e} y_v >= 1 for every edge"
    check(h)
    if not h.edges:
        return Fraction(0), {}
    A = [[1 if v in e else 0 for v in range(len(h.vertices))] for e in h.edges]
    sol = solve(LpProblem([1] * len(h.vertices), A, [1] * len(h.edges),
                          senses=[">="] * len(h.edges), sense="minimize"), mode)
    if sol.status != "optimal":
        raise DepBoundsException("cover LP returned %s" % sol.status)
    return sol.value, dict((h.vertices[i], y) for i, y in enumerate(sol.x) if y)


def uniform_matching(h):
    "phi(e) = 1/max_degree for every edge"
    d = max_degree(h)
    labels = [h.label(i) for i in range(len(h.edges))]
    if d == 0:
        return FractionalWeighting({}, labels)
    return FractionalWeighting(dict((i, Fraction(1, d)) for i in range(len(h.edges))),
                               labels)


def _check_cap(n, cap):
    if n > cap:
        raise CapExceeded("%d vertices exceeds the enumeration cap of %d; "
                          "use greedy_coloring for an upper bound instead" % (n, cap))


def maximal_independent_sets(g, cap=MAX_VERTICES):
    """
    maximal cliques of the complement graph; sorted output.

    >>> from .hypergraph import cycle_graph
    >>> maximal_independent_sets(cycle_graph(5))
    [(0, 2), (0, 3), (1, 3), (1, 4), (2, 4)]
    """
    n = len(g.vertices)
    _check_cap(n, cap)
    if n == 0:
        return []
    co = nx.complement(g.to_networkx())
    found = sorted(tuple(sorted(c)) for c in nx.find_cliques(co))
    if n > 16:
        sys.stderr.write("found %d maximal independent sets on %d vertices\n"
                         % (len(found), n))
    return found


def greedy_coloring(g):
    """
    first-fit proper colouring in vertex order; the number of colours used is
    an upper bound for chi and so for chi*.

    >>> from .hypergraph import cycle_graph
    >>> greedy_coloring(cycle_graph(5))
    [0, 1, 0, 1, 2]
    """
    G = g.to_networkx()
    colors = nx.coloring.greedy_color(G, strategy=lambda G, colors: sorted(G))
    return [colors[v] for v in range(len(g.vertices))]


class ChromaticCertificate(object):
    """
    independent sets with weights. fractional: sum of weights over sets holding v
    is >= 1. b-fold: weights are multiplicities and every vertex is covered
    exactly b times.
    """
    __slots__ = ('sets', 'weights', 'b', 'value', 'labels')

    def __init__(self, sets, weights, value, b=None, labels=None):
        self.sets = [tuple(s) for s in sets]
        self.weights = list(weights)
        self.value = value
        self.b = b
        self.labels = labels

    def __repr__(self):
        return "ChromaticCertificate(value=%s, b=%s, sets=%d)" % (
            fmt(self.value), self.b, len(self.sets))

    def coverage(self, n):
        out = [0] * n
        for s, w in zip(self.sets, self.weights):
            for v in s:
                out[v] += w
        return out

    def colors(self):
        "b-fold certificates only: vertex index -> list of its colours"
        out, c = {}, 0
        for s, w in zip(self.sets, self.weights):
            for _ in range(w):
                for v in s:
                    out.setdefault(v, []).append(c)
                c += 1
        return out

    def problems(self, structure):
        "violations against a DependencyGraph or IndependenceSystem"
        out = []
        if isinstance(structure, IndependenceSystem):
            names, n = structure.ground, len(structure.ground)
            indep = lambda s: any(set(s) <= t for t in structure.sets)
        else:
            names, n = structure.vertices, len(structure.vertices)
            indep = lambda s: not any(structure.is_adjacent(a, b)
                                      for a in s for b in s if a < b)
        for s in self.sets:
            if not indep(s):
                out.append("set %s is not independent" % self._label(s, names))
        for v, c in enumerate(self.coverage(n)):
            if (self.b is None and c < 1) or (self.b is not None and c != self.b):
                out.append("vertex %s covered %s times" % (names[v], fmt(c)))
        total = sum(self.weights, Fraction(0))
        if total != self.value:
            out.append("weights sum to %s, not %s" % (fmt(total), fmt(self.value)))
        return out

    def _label(self, s, names=None):
        names = names or self.labels
        return "{%s}" % ",".join(names[v] for v in s)

    def to_json(self):
        d = {"value": fmt(self.value),
             "weights": dict((self._label(s), fmt(w))
                             for s, w in zip(self.sets, self.weights) if w)}
        if self.b is not None:
            d["b"] = self.b
        return d


def _cover_lp(n, sets, mode):
    A = [[1 if v in s else 0 for s in sets] for v in range(n)]
    sol = solve(LpProblem([1] * len(sets), A, [1] * n, senses=[">="] * n,
                          sense="minimize"), mode)
    if sol.status != "optimal":
        raise DepBoundsException("covering LP returned %s" % sol.status)
    return sol.value, sol.x


def fractional_chromatic_number(g, cap=MAX_VERTICES, mode="rational"):
    """
    chi*(G) by the covering LP over maximal independent sets.

    >>> from .hypergraph import cycle_graph
    >>> fractional_chromatic_number(cycle_graph(5))[0]
    Fraction(5, 2)
    """
    n = len(g.vertices)
    _check_cap(n, cap)
    if n == 0:
        return Fraction(0), ChromaticCertificate([], [], Fraction(0), labels=g.vertices)
    sets = maximal_independent_sets(g, cap)
    value, x = _cover_lp(n, sets, mode)
    keep = [(s, w) for s, w in zip(sets, x) if w]
    return value, ChromaticCertificate([s for s, _ in keep], [w for _, w in keep],
                                       value, labels=g.vertices)


def _min_b_cover(n, sets, b, lb, ub):
    """
    least number of sets (with repetition) covering every element at least b
    times; depth-first search with failure memo on the residual demand.
    """
    members = [frozenset(s) for s in sets]
    alpha = max(len(s) for s in members)
    containing = [[k for k, s in enumerate(members) if v in s] for v in range(n)]
    failed = {}
    stack = []

    def feasible(demand, budget):
        total = sum(demand)
        if total == 0:
            return True
        if max(demand) > budget or total > budget * alpha:
            return False
        if failed.get(demand, -1) >= budget:
            return False
        v = min((i for i in range(n) if demand[i]),
                key=lambda i: (len(containing[i]), i))
        for k in containing[v]:
            s = members[k]
            stack.append(k)
            if feasible(tuple(d - 1 if (d and i in s) else d
                              for i, d in enumerate(demand)), budget - 1):
                return True
            stack.pop()
        failed[demand] = budget
        return False

    for a in range(lb, ub + 1):
        del stack[:]
        if feasible((b,) * n, a):
            return a, list(stack)
    raise DepBoundsException("no %d-fold cover with at most %d sets" % (b, ub))


def _shrink(n, sets, chosen, b):
    """
    trim the chosen sets so that each element is covered exactly b times;
    relies on subsets of independent sets staying independent.
    """
    count = [0] * n
    used = []
    for k in chosen:
        s = tuple(v for v in sets[k] if count[v] < b)
        for v in s:
            count[v] += 1
        if s:
            used.append(s)
    uniq, weights = [], []
    for s in sorted(used):
        if uniq and uniq[-1] == s:
            weights[-1] += 1
        else:
            uniq.append(s)
            weights.append(1)
    return uniq, weights


def _check_fold(b, fold_cap):
    if b < 1:
        raise DepBoundsException("b must be a positive integer, got %d" % b)
    if b > fold_cap:
        raise CapExceeded("b=%d exceeds the fold cap of %d" % (b, fold_cap))


def b_fold_chromatic_number(g, b, cap=MAX_VERTICES, fold_cap=MAX_FOLD):
    """
    chi_b(G): the least palette size such that every vertex gets b colours and
    adjacent vertices get disjoint colour sets.

    >>> from .hypergraph import cycle_graph
    >>> [b_fold_chromatic_number(cycle_graph(5), b)[0] for b in (1, 2)]
    [3, 5]
    """
    _check_fold(b, fold_cap)
    n = len(g.vertices)
    _check_cap(n, cap)
    if n == 0:
        return 0, ChromaticCertificate([], [], 0, b=b, labels=g.vertices)
    sets = maximal_independent_sets(g, cap)
    chi_star, _ = fractional_chromatic_number(g, cap)
    ub = b * (max(greedy_coloring(g)) + 1)
    a, chosen = _min_b_cover(n, sets, b, int(ceil(b * chi_star)), ub)
    uniq, weights = _shrink(n, sets, chosen, b)
    return a, ChromaticCertificate(uniq, weights, a, b=b, labels=g.vertices)


def _system_sets(a, cap):
    n = len(a.ground)
    _check_cap(n, cap)
    covered = set()
    for s in a.sets:
        covered |= s
    for i, v in enumerate(a.ground):
        if i not in covered:
            raise DepBoundsException("singleton {%s} is not independent; every "
                                     "element must be independent on its own" % v)
    return n, [tuple(sorted(s)) for s in a.maximal()]


def independence_system_chi_star(a, cap=MAX_VERTICES, mode="rational"):
    """
    chi*(A) by the covering LP over the maximal listed sets.

    >>> a = IndependenceSystem('xyz', [['x'], ['y'], ['z']])
    >>> independence_system_chi_star(a)[0]
    Fraction(3, 1)
    """
    n, sets = _system_sets(a, cap)
    if n == 0:
        return Fraction(0), ChromaticCertificate([], [], Fraction(0), labels=a.ground)
    value, x = _cover_lp(n, sets, mode)
    keep = [(s, w) for s, w in zip(sets, x) if w]
    return value, ChromaticCertificate([s for s, _ in keep], [w for _, w in keep],
                                       value, labels=a.ground)


def independence_system_chi_b(a, b, cap=MAX_VERTICES, fold_cap=MAX_FOLD):
    "chi_b(A) with integral lambda, each element covered exactly b times"
    _check_fold(b, fold_cap)
    n, sets = _system_sets(a, cap)
    if n == 0:
        return 0, ChromaticCertificate([], [], 0, b=b, labels=a.ground)
    chi_star, _ = independence_system_chi_star(a, cap)
    value, chosen = _min_b_cover(n, sets, b, int(ceil(b * chi_star)), b * n)
    uniq, weights = _shrink(n, sets, chosen, b)
    return value, ChromaticCertificate(uniq, weights, value, b=b, labels=a.ground)


def graph_independence_system(g, cap=MAX_VERTICES):
    "the independence system whose members are the independent sets of g"
    return IndependenceSystem(g.vertices,
                              [[g.vertices[v] for v in s]
                               for s in maximal_independent_sets(g, cap)])


def check_monotonicity(h_sub, h_super, mode="rational"):
    """
    nu* is monotone under adding edges, so the uniform Finner bound can only
    shrink. returns (nu_sub, nu_super, holds).
    """
    sup = set(frozenset(h_super.edge_names(i)) for i in range(len(h_super.edges)))
    for i in range(len(h_sub.edges)):
        if frozenset(h_sub.edge_names(i)) not in sup:
            raise DepBoundsException("edge %s of the smaller hypergraph is missing "
                                     "from the larger one" % h_sub.label(i))
    nu_sub, _ = fractional_matching_number(h_sub, mode)
    nu_super, _ = fractional_matching_number(h_super, mode)
    return nu_sub, nu_super, nu_super >= nu_sub
