"""
ground truth for the bounds: exact enumeration on small instances and seeded
Monte Carlo.

Monte Carlo streams are Philox counter-based generators keyed by the seed with
the block number in the counter, and sample i always lives in block
i // MC_BLOCK, so an estimate depends only on (seed, samples), never on the
number of workers.
"""
import math
import sys
from collections import namedtuple, defaultdict
from fractions import Fraction
from functools import partial
from itertools import combinations, product

import numpy as np

from . import DepBoundsException, CapExceeded, pmap
from .bounds import fraction_power, CSV_COLUMNS
from .hypergraph import (check, cycle_graph, degree_hypergraph, IndependenceSystem)
from .invariants import (MAX_VERTICES, b_fold_chromatic_number,
                         independence_system_chi_b, uniform_matching, fmt)

CHECK_TOL = 1e-10
SUBSET_CAP = 4
MC_BLOCK = 1 << 14
ENUM_BLOCK_BITS = 16
PREFIX_BITS = 3

Verdict = namedtuple("Verdict", "lhs rhs holds extra")
DependencyCheck = namedtuple("DependencyCheck", "holds checked cap truncated failures")


def _exact(*xs):
    return all(isinstance(x, (int, Fraction)) for x in xs)


def _pow(y, e):
    "y ** e with 0 ** 0 = 1, exact when the result is rational"
    if e == 0:
        return 1
    if y == 0 or y == 1:
        return y
    f = fraction_power(y, e)
    return f if f is not None else float(y) ** float(e)


def _exceeds_power(x, base, e):
    "x > base ** e, exactly for rationals by raising both sides to e's denominator"
    if _exact(x, base, e):
        e = Fraction(e)
        return Fraction(x) ** e.denominator > Fraction(base) ** e.numerator
    return float(x) > float(base) ** float(e)


class DiscreteJointDistribution(object):
    """
    finite support of vectors with probabilities; exact when the
    probabilities are Fractions.
    """
    __slots__ = ('n', 'support', 'names')

    def __init__(self, support, names=None):
        law, order = {}, []
        for vec, pr in support:
            vec = tuple(vec)
            if pr < 0:
                raise DepBoundsException("negative probability %s at %s" % (pr, vec))
            if vec not in law:
                order.append(vec)
                law[vec] = 0
            law[vec] += pr
        self.support = tuple((v, law[v]) for v in order)
        sizes = set(len(v) for v in order)
        if len(sizes) > 1:
            raise DepBoundsException("support vectors have different lengths: %s"
                                     % sorted(sizes))
        self.n = sizes.pop() if sizes else 0
        self.names = tuple(names) if names else tuple("Y%d" % (i + 1)
                                                      for i in range(self.n))
        total = self.mass()
        if _exact(*[pr for _, pr in self.support]):
            if total != 1:
                raise DepBoundsException("probabilities sum to %s, not 1" % total)
        elif abs(total - 1) > 1e-12:
            raise DepBoundsException("probabilities sum to %r, not 1" % total)

    def __repr__(self):
        return "DiscreteJointDistribution(n=%d, support=%d)" % (self.n,
                                                               len(self.support))

    def mass(self):
        return sum((pr for _, pr in self.support), 0)

    def expect(self, f):
        return sum((pr * f(vec) for vec, pr in self.support if pr), 0)

    def probability(self, pred):
        return sum((pr for vec, pr in self.support if pred(vec)), 0)

    def mean(self, j):
        return self.expect(lambda y: y[j])


def c5_distribution(p):
    """
    a law on {0,1}^5 with all means p and the 5-cycle as a dependency graph
    that is not hypergraph-correlated.

    >>> d = c5_distribution(Fraction(1, 2))
    >>> d.mass(), d.mean(0), d.probability(all)
    (Fraction(1, 1), Fraction(1, 2), Fraction(3, 16))
    """
    if not 0 < p < 1:
        raise DepBoundsException("p must lie in (0, 1), got %s" % p)
    half = Fraction(1, 2)
    bits = lambda s: tuple(int(c) for c in s)
    support = [(bits("00000"), half * (2 - p) * (1 - p) ** 2),
               (bits("11111"), half * (p ** 2 + p ** 3))]
    for s in ("00011", "00110", "01100", "11000", "10001"):
        support.append((bits(s), half * p * (1 - p) ** 2))
    for s in ("00111", "01110", "11100", "11001", "10011"):
        support.append((bits(s), half * (p ** 2 - p ** 3)))
    return DiscreteJointDistribution(support, ["v%d" % i for i in range(1, 6)])


def exact_product_expectation(d, exponents):
    "E[prod_v Y_v ** e_v] over the support of d"
    exponents = list(exponents)
    if len(exponents) != d.n:
        raise DepBoundsException("need %d exponents, got %d" % (d.n, len(exponents)))
    return d.expect(lambda y: _product_pow(y, exponents))


def _product_pow(y, exponents):
    out = 1
    for yv, e in zip(y, exponents):
        out *= _pow(yv, e)
        if out == 0:
            break
    return out


def exact_tail(d, t):
    "P[sum_v Y_v >= t]"
    return d.probability(lambda y: sum(y) >= t)


def _prefix_mass(probs, closing, prefix, r):
    """
    probability mass of independent sets whose restriction to the first r
    vertices is `prefix`; depth-first over the remaining vertices.
    """
    nv = len(probs)
    w, S = 1, 0
    for i in range(r):
        if prefix >> i & 1:
            S |= 1 << i
            if any(m & S == m for m in closing[i]):
                return 0
            w *= probs[i]
        else:
            w *= 1 - probs[i]
    total = 0
    stack = [(r, S, w)]
    while stack:
        i, S, w = stack.pop()
        if i == nv:
            total += w
            continue
        stack.append((i + 1, S, w * (1 - probs[i])))
        S2 = S | (1 << i)
        if not any(m & S2 == m for m in closing[i]):
            stack.append((i + 1, S2, w * probs[i]))
    return total


def _check_vertices(nv, cap):
    if nv > cap:
        raise CapExceeded("%d vertices exceeds the enumeration cap of %d" % (nv, cap))


def exact_independence_probability(h, p, cap=MAX_VERTICES, threads=1):
    """
    pi(p, H): probability that a random vertex subset contains no edge.

    >>> from .hypergraph import Hypergraph, VertexProbabilities
    >>> h = Hypergraph(['a', 'b'], [['a', 'b']])
    >>> exact_independence_probability(h, VertexProbabilities(Fraction(1, 3)))
    Fraction(8, 9)
    """
    check(h)
    nv = len(h.vertices)
    _check_vertices(nv, cap)
    probs = p.vector(h)
    closing = [[] for _ in range(nv)]
    for m in set(h.masks()):
        closing[m.bit_length() - 1].append(m)
    r = min(nv, PREFIX_BITS)
    parts = pmap(partial(_prefix_mass, probs, closing, r=r), range(1 << r), threads)
    total = 0
    for x in parts:
        total += x
    return total


def _block_weights(nv, probs, lo, hi):
    masks = np.arange(lo, hi, dtype=np.int64)
    bits = (masks[:, None] >> np.arange(nv, dtype=np.int64)) & 1
    return masks, bits, np.where(bits == 1, probs, 1.0 - probs).prod(axis=1)


def _blocks(nv):
    size = 1 << min(nv, ENUM_BLOCK_BITS)
    return [(lo, lo + size) for lo in range(0, 1 << nv, size)]


def _finner_block(nv, probs, emasks, ws, kind, block):
    masks, _, w = _block_weights(nv, probs, block[0], block[1])
    val = np.ones(len(masks))
    for m, phi in zip(emasks, ws):
        present = (masks & m) == m
        y = present.astype(float) if kind == "product" else 1.0 - present
        val *= y ** phi
    return float(np.dot(w, val))


def verify_finner(h, p, phi, kind="product", cap=MAX_VERTICES, tol=CHECK_TOL,
                  threads=1):
    """
    E[prod_e Y_e ** phi(e)] <= prod_e E[Y_e] ** phi(e) for Y_e = prod_{v in e} X_v
    (kind='product') or Y_e = 1 - prod_{v in e} X_v (kind='complement').
    lhs by enumeration of all vertex subsets.
    """
    check(h)
    msg = phi.violation(h)
    if msg:
        raise DepBoundsException("not a fractional matching: %s" % msg)
    if kind not in ("product", "complement"):
        raise DepBoundsException("kind must be product or complement, got %r" % kind)
    nv = len(h.vertices)
    _check_vertices(nv, cap)
    probs = np.array([float(x) for x in p.vector(h)])
    support = sorted(phi.weights.items())
    masks = h.masks()
    emasks = [masks[i] for i, _ in support]
    ws = [float(w) for _, w in support]
    lhs = math.fsum(pmap(partial(_finner_block, nv, probs, emasks, ws, kind),
                         _blocks(nv), threads))
    rhs = 1
    for i, w in support:
        q = 1
        for v in h.edge_names(i):
            q *= p.of(v)
        rhs *= _pow(q if kind == "product" else 1 - q, w)
    return Verdict(lhs, rhs, lhs <= float(rhs) + tol, {"kind": kind})


def correlated_distribution(h, p, kind="product", cap=16):
    """
    exact joint law of Y_e = f(X_v : v in e) for independent seeds X_v ~ Ber(p_v);
    f is the product (indicators) or the mean (values in [0, 1]).
    """
    check(h)
    nv = len(h.vertices)
    _check_vertices(nv, cap)
    if kind not in ("product", "mean"):
        raise DepBoundsException("kind must be product or mean, got %r" % kind)
    probs = p.vector(h)
    law = defaultdict(int)
    for bits in product((0, 1), repeat=nv):
        w = 1
        for b, q in zip(bits, probs):
            w *= q if b else 1 - q
        if kind == "product":
            y = tuple(int(all(bits[v] for v in e)) for e in h.edges)
        else:
            y = tuple(Fraction(sum(bits[v] for v in e), len(e)) for e in h.edges)
        law[y] += w
    return DiscreteJointDistribution(sorted(law.items()),
                                     [h.label(i) for i in range(len(h.edges))])


def check_dependency_graph(d, g, subset_cap=SUBSET_CAP, tol=1e-12):
    """
    each Y_i must be independent of (Y_j : j in T) for every set T of
    non-neighbours of i with |T| <= subset_cap.
    """
    if len(g.vertices) != d.n:
        raise DepBoundsException("graph has %d vertices, distribution has %d "
                                 "coordinates" % (len(g.vertices), d.n))
    exact = _exact(*[pr for _, pr in d.support])
    checked, truncated, failures = 0, False, []
    for i in range(d.n):
        non = [j for j in range(d.n) if j != i and j not in g.adj[i]]
        truncated = truncated or len(non) > subset_cap
        for size in range(1, min(subset_cap, len(non)) + 1):
            for T in combinations(non, size):
                joint, mi, mt = defaultdict(int), defaultdict(int), defaultdict(int)
                for vec, pr in d.support:
                    key = tuple(vec[j] for j in T)
                    joint[vec[i], key] += pr
                    mi[vec[i]] += pr
                    mt[key] += pr
                checked += 1
                for a in mi:
                    for key in mt:
                        lhs, rhs = joint.get((a, key), 0), mi[a] * mt[key]
                        if (lhs != rhs) if exact else abs(lhs - rhs) > tol:
                            failures.append((g.vertices[i],
                                             tuple(g.vertices[j] for j in T)))
                            break
                    else:
                        continue
                    break
    if truncated:
        sys.stderr.write("WARNING: non-neighbour sets larger than %d were not "
                         "checked\n" % subset_cap)
    return DependencyCheck(not failures, checked, subset_cap, truncated, failures)


def verify_product_inequality(d, structure, b, tol=CHECK_TOL):
    """
    E[prod_v Y_v] <= prod_v E[Y_v ** (chi_b/b)] ** (b/chi_b) for [0,1] variables
    whose dependencies are described by `structure` (a DependencyGraph or an
    IndependenceSystem); exact when everything stays rational.
    """
    for vec, pr in d.support:
        for j, y in enumerate(vec):
            if not 0 <= y <= 1:
                raise DepBoundsException("coordinate %s takes value %s outside [0, 1]"
                                         % (d.names[j], y))
    if isinstance(structure, IndependenceSystem):
        n = len(structure.ground)
        chi_b, _ = independence_system_chi_b(structure, b)
    else:
        n = len(structure.vertices)
        chi_b, _ = b_fold_chromatic_number(structure, b)
    if n != d.n:
        raise DepBoundsException("structure has %d vertices, distribution has %d "
                                 "coordinates" % (n, d.n))
    r = Fraction(chi_b, b)
    lhs = exact_product_expectation(d, [1] * d.n)
    prod = 1
    for v in range(d.n):
        prod *= d.expect(lambda y: _pow(y[v], r))
    rhs = _pow(prod, 1 / r)
    if _exact(lhs, prod):
        holds = Fraction(lhs) ** chi_b <= Fraction(prod) ** b
    else:
        holds = float(lhs) <= float(rhs) + tol
    return Verdict(lhs, rhs, holds, {"b": b, "chi_b": chi_b})


def example1_checks(p, subset_cap=SUBSET_CAP):
    """
    the five-cycle law: total mass, marginals, dependency-graph factorisations,
    the graph Hoelder inequality with b=2, and P[all ones] against the p^(5/2)
    that hypergraph correlation would force.
    """
    d = c5_distribution(p)
    g = cycle_graph(5)
    all_ones = d.probability(all)
    return {"mass": d.mass(),
            "marginals": [d.mean(j) for j in range(5)],
            "dependency": check_dependency_graph(d, g, subset_cap),
            "holder": verify_product_inequality(d, g, 2),
            "all_ones": all_ones,
            "hypergraph_limit": _pow(p, Fraction(5, 2)),
            "exceeds_limit": _exceeds_power(all_ones, p, Fraction(5, 2))}


def _degree_block(nv, probs, incidence, d, block):
    _, bits, w = _block_weights(nv, probs, block[0], block[1])
    degs = bits @ incidence
    return float(w[~(degs == d).any(axis=1)].sum())


def exact_degree_absence_probability(n, d, p, cap=MAX_VERTICES, threads=1):
    "P[no vertex of degree d in G(n,p)] over all 2^C(n,2) graphs"
    h = degree_hypergraph(n)
    nv = len(h.vertices)
    _check_vertices(nv, cap)
    incidence = np.zeros((nv, n), dtype=np.int64)
    for i, e in enumerate(h.edges):
        for v in e:
            incidence[v, i] = 1
    probs = np.full(nv, float(p))
    return math.fsum(pmap(partial(_degree_block, nv, probs, incidence, d),
                          _blocks(nv), threads))


class McEstimate(object):
    __slots__ = ('name', 'estimate', 'samples', 'seed', 'half_width', 'stream',
                 'params')

    def __init__(self, name, hits, samples, seed, params=None):
        self.name = name
        self.estimate = hits / float(samples)
        self.samples = samples
        self.seed = seed
        e = self.estimate
        self.half_width = 1.96 * math.sqrt(e * (1 - e) / samples)
        self.stream = "philox:%d" % seed
        self.params = params or {}

    def __repr__(self):
        return "McEstimate(%s=%.6g +/- %.3g, samples=%d, seed=%d)" % (
            self.name, self.estimate, self.half_width, self.samples, self.seed)

    def covers(self, value, widths=3):
        return abs(self.estimate - float(value)) <= widths * self.half_width

    def as_row(self):
        p = self.params
        log = math.log(self.estimate) if self.estimate > 0 else float("-inf")
        return dict(zip(CSV_COLUMNS, (
            self.name, str(p.get("n", "")), _plain(p.get("p")), _plain(p.get("t")),
            _plain(p.get("eps")), repr(self.estimate), repr(log),
            "%s;samples=%d;half_width=%r" % (self.stream, self.samples,
                                             self.half_width))))

    def to_json(self):
        return {"name": self.name, "estimate": self.estimate,
                "samples": self.samples, "seed": self.seed,
                "half_width": self.half_width, "stream": self.stream,
                "params": dict((k, fmt(v)) for k, v in self.params.items()
                               if v is not None)}


def _plain(x):
    if x is None:
        return ""
    return repr(float(x))


def _stream(seed, block):
    return np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, block, 0]))


def _mc_block(nv, probs, edges, weights, t, seed, block):
    k, size = block
    X = _stream(seed, k).random((size, nv)) < probs
    if edges:
        present = np.column_stack([X[:, e].all(axis=1) for e in edges])
    else:
        present = np.zeros((size, 0), dtype=bool)
    if weights is None:
        return int((~present.any(axis=1)).sum())
    return int((present.astype(float) @ weights >= t - 1e-12).sum())


def _mc_blocks(samples, seed):
    if not 0 <= seed < 1 << 64:
        raise DepBoundsException("seed must lie in [0, 2^64), got %d" % seed)
    if samples < 1:
        raise DepBoundsException("need at least one sample, got %d" % samples)
    return [(k, min(MC_BLOCK, samples - k * MC_BLOCK))
            for k in range((samples + MC_BLOCK - 1) // MC_BLOCK)]


def mc_independence(h, p, samples, seed, threads=1):
    "fraction of sampled vertex subsets that are independent"
    check(h)
    blocks = _mc_blocks(samples, seed)
    sys.stderr.write("sampling %d subsets in %d blocks, seed %d\n"
                     % (samples, len(blocks), seed))
    probs = np.array([float(x) for x in p.vector(h)])
    edges = [list(e) for e in h.edges]
    hits = sum(pmap(partial(_mc_block, len(h.vertices), probs, edges, None, None,
                            seed), blocks, threads))
    return McEstimate("mc-independence", hits, samples, seed,
                      {"n": len(h.vertices), "p": p.uniform()})


def mc_tail(h, p, t, samples, seed, phi=None, threads=1):
    "P[sum_e phi(e) Y_e >= t] for Y_e = prod_{v in e} X_v; phi defaults to 1/max-degree"
    check(h)
    blocks = _mc_blocks(samples, seed)
    phi = uniform_matching(h) if phi is None else phi
    probs = np.array([float(x) for x in p.vector(h)])
    edges = [list(e) for e in h.edges]
    weights = np.array([float(phi.get(i)) for i in range(len(h.edges))])
    hits = sum(pmap(partial(_mc_block, len(h.vertices), probs, edges, weights,
                            float(t), seed), blocks, threads))
    return McEstimate("mc-tail", hits, samples, seed,
                      {"n": len(h.vertices), "p": p.uniform(), "t": t,
                       "Phi": phi.total()})


def _mc_dist_block(values, probs, t, seed, block):
    k, size = block
    idx = _stream(seed, k).choice(len(probs), size=size, p=probs)
    return int((values[idx] >= t - 1e-12).sum())


def mc_distribution_tail(d, t, samples, seed, threads=1):
    "P[sum_v Y_v >= t] by sampling an explicit joint distribution"
    blocks = _mc_blocks(samples, seed)
    values = np.array([float(sum(v)) for v, _ in d.support])
    probs = np.array([float(pr) for _, pr in d.support])
    probs = probs / probs.sum()
    hits = sum(pmap(partial(_mc_dist_block, values, probs, float(t), seed), blocks,
                    threads))
    return McEstimate("mc-distribution-tail", hits, samples, seed,
                      {"n": d.n, "t": t})
