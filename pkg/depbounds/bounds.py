"""
closed-form tail and correlation bounds. every evaluator works in log space
and returns a BoundReport; value = exp(log_value) is clamped to [0, 1].
"""
import math
import sys
from fractions import Fraction
from functools import partial
from math import comb

from . import DepBoundsException, pmap
from .hypergraph import path_matching_exponent, _check_path_params
from .invariants import fmt, check_monotonicity

CSV_COLUMNS = ("bound_name", "n", "p", "t", "eps", "value", "log_value",
               "certificate_id")
DEFAULT_GRID = [Fraction(i, 100) for i in range(1, 100)]


def _iroot(x, k):
    "floor of the k-th root of a nonnegative integer"
    if x < 2:
        return x
    r = 1 << ((x.bit_length() + k - 1) // k)
    while True:
        s = ((k - 1) * r + x // r ** (k - 1)) // k
        if s >= r:
            return r
        r = s


def fraction_power(base, e):
    """
    base ** e as an exact Fraction when it is rational, else None.

    >>> fraction_power(Fraction(1, 32), Fraction(2, 5))
    Fraction(1, 4)
    >>> fraction_power(Fraction(1, 2), Fraction(1, 2)) is None
    True
    """
    if isinstance(base, float) or isinstance(e, float):
        return None
    base, e = Fraction(base), Fraction(e)
    if e.denominator == 1:
        if base == 0 and e < 0:
            return None
        return base ** e.numerator
    if base < 0:
        return None
    r = base ** e.numerator
    k = e.denominator
    num, den = _iroot(r.numerator, k), _iroot(r.denominator, k)
    if num ** k == r.numerator and den ** k == r.denominator:
        return Fraction(num, den)
    return None


def _csv(x):
    if x is None:
        return ""
    if isinstance(x, Fraction):
        return repr(float(x))
    return str(x)


class BoundReport(object):
    __slots__ = ('name', 'log_value', 'params', 'certificate', 'exact', 'related')

    def __init__(self, name, log_value, params=None, certificate=None, exact=None,
                 related=None):
        self.name = name
        self.log_value = min(0.0, float(log_value))
        self.params = params or {}
        self.certificate = certificate
        self.exact = exact if exact is not None and 0 <= exact <= 1 else None
        self.related = related or []

    def __repr__(self):
        return "BoundReport(%s, value=%.6g, log_value=%.6g)" % (
            self.name, self.value, self.log_value)

    @property
    def value(self):
        return math.exp(self.log_value)

    def rows(self):
        yield self
        for r in self.related:
            for x in r.rows():
                yield x

    def as_row(self):
        p = self.params
        return dict(zip(CSV_COLUMNS, (
            self.name, _csv(p.get("n")), _csv(p.get("p", p.get("q"))),
            _csv(p.get("t")), _csv(p.get("eps")), repr(self.value),
            repr(self.log_value), self.certificate or "")))

    def to_json(self):
        d = {"bound_name": self.name, "value": self.value,
             "log_value": self.log_value,
             "params": dict((k, fmt(v)) for k, v in self.params.items()
                            if v is not None)}
        if self.exact is not None:
            d["exact"] = fmt(self.exact)
        if self.certificate:
            d["certificate_id"] = self.certificate
        if self.related:
            d["related"] = [r.to_json() for r in self.related]
        return d


def _probability(name, x, closed=False):
    ok = 0 <= x <= 1 if closed else 0 < x < 1
    if not ok:
        raise DepBoundsException("%s must lie in %s, got %s"
                                 % (name, "[0, 1]" if closed else "(0, 1)", x))


def _xlog(a, b):
    return 0.0 if a == 0 else a * math.log(a / b)


def kl_divergence(a, q):
    """
    D(a || q) between Bernoulli(a) and Bernoulli(q); a in {0, 1} by limits.

    >>> kl_divergence(0.3, 0.3)
    0.0
    """
    _probability("q", q)
    _probability("a", a, closed=True)
    a, q = float(a), float(q)
    return _xlog(a, q) + _xlog(1 - a, 1 - q)


def chernoff_kl_bound(nv, q, eps, chi_star):
    """
    P[sum Y_v >= |V|(q + eps)] for [0,1] variables with a dependency graph of
    fractional chromatic number chi_star. primary: exp(-2 eps^2 |V| / chi*);
    related: the sharper exp(-|V| D(q+eps || q) / chi*).
    """
    if nv < 1:
        raise DepBoundsException("need at least one variable, got %s" % nv)
    _probability("q", q)
    if eps <= 0:
        raise DepBoundsException("eps must be positive, got %s" % eps)
    if q + eps > 1:
        raise DepBoundsException("q + eps must be at most 1, got %s" % (q + eps))
    if chi_star < 1:
        raise DepBoundsException("chi* must be at least 1, got %s" % chi_star)
    chi, e = float(chi_star), float(eps)
    params = {"n": nv, "q": q, "eps": eps, "t": nv * (q + eps), "chi_star": chi_star}
    sharp = BoundReport("chernoff-kl-sharp",
                        -nv * kl_divergence(min(q + eps, 1), q) / chi, params)
    return BoundReport("chernoff", -2 * e * e * nv / chi, params, related=[sharp])


def psi(x):
    """
    Bennett's rate function (1 + x) ln(1 + x) - x.

    >>> psi(0)
    0.0
    """
    x = float(x)
    return (1 + x) * math.log1p(x) - x


def bennett_g(a):
    "e^a - 1 - a, the exponential-moment auxiliary in the Bennett argument"
    a = float(a)
    return math.expm1(a) - a


def bennett_bound(S, t, chi_star):
    """
    exp(-(S/chi*) psi(t/S)) for centred variables bounded above by 1 with
    variance sum S. related: the weaker exp(-(S/chi*) psi(4t/5S)).
    """
    if S <= 0:
        raise DepBoundsException("variance sum S must be positive, got %s" % S)
    if t <= 0:
        raise DepBoundsException("t must be positive, got %s" % t)
    if chi_star < 1:
        raise DepBoundsException("chi* must be at least 1, got %s" % chi_star)
    S, t_, chi = float(S), float(t), float(chi_star)
    params = {"t": t, "S": S, "chi_star": chi_star}
    older = BoundReport("bennett-four-fifths", -(S / chi) * psi(4 * t_ / (5 * S)),
                        params)
    return BoundReport("bennett", -(S / chi) * psi(t_ / S), params, related=[older])


def _product(xs):
    out = 1
    for x in xs:
        out *= x
    return out


def _edge_mean(h, p, i):
    return _product(p.of(v) for v in h.edge_names(i))


def finner_independence_bound(h, p, phi, certificate=None, tol=0):
    """
    pi(p, H) <= prod_e (1 - prod_{v in e} p_v) ** phi(e) for a fractional
    matching phi of H.
    """
    msg = phi.violation(h, tol)
    if msg:
        raise DepBoundsException("not a fractional matching: %s" % msg)
    log, exact = 0.0, Fraction(1)
    for i, w in sorted(phi.weights.items()):
        q = _edge_mean(h, p, i)
        log += float(w) * math.log1p(-float(q))
        if exact is not None:
            f = fraction_power(1 - q, w)
            exact = None if f is None else exact * f
    params = {"n": len(h.vertices), "p": p.uniform(), "nu": phi.total()}
    return BoundReport("finner", log, params, certificate, exact)


def finner_uniform_bound(k, p, nu):
    "(1 - p^k) ** nu*, the k-uniform equal-probability form"
    _probability("p", p)
    return BoundReport("finner-uniform", nu * math.log1p(-float(p) ** k),
                       {"k": k, "p": p, "nu": nu}, exact=fraction_power(1 - p ** k, nu))


def janson_bound(qv, delta):
    """
    min{exp(-mu + Delta), exp(Delta / (1 - max q)) prod (1 - q)} for indicators
    with means qv and dependent-pair sum Delta.
    """
    qv = list(qv)
    for i, q in enumerate(qv):
        _probability("mean %d" % i, q, closed=True)
    if delta < 0:
        raise DepBoundsException("Delta must be nonnegative, got %s" % delta)
    mu = sum(qv)
    params = {"mu": mu, "delta": delta, "m": len(qv)}
    first = BoundReport("janson-exp", -float(mu) + float(delta), params)
    mx = max(qv) if qv else 0
    if mx >= 1:
        sys.stderr.write("WARNING: a mean equals 1; using exp(-mu + Delta) only\n")
        return BoundReport("janson", first.log_value, params, related=[first])
    second = BoundReport("janson-product", float(delta) / (1 - float(mx))
                         + sum(math.log1p(-float(q)) for q in qv), params)
    return BoundReport("janson", min(first.log_value, second.log_value), params,
                       related=[first, second])


def janson_delta(h, p):
    """
    (means, Delta) for the edge indicators Y_e = prod_{v in e} X_v of H, with
    Delta summed over intersecting pairs of edges.
    """
    qv = [_edge_mean(h, p, i) for i in range(len(h.edges))]
    delta = 0
    for i in range(len(h.edges)):
        for j in range(i + 1, len(h.edges)):
            if set(h.edges[i]) & set(h.edges[j]):
                delta += _product(p.of(h.vertices[v])
                                  for v in set(h.edges[i]) | set(h.edges[j]))
    return qv, delta


def janson_independence_bound(h, p):
    "Janson's inequality for pi(p, H), Delta from the intersection graph"
    qv, delta = janson_delta(h, p)
    r = janson_bound(qv, delta)
    r.params.update({"n": len(h.vertices), "p": p.uniform()})
    return r


def finner_triangle_bound(n, p):
    """
    P[G(n,p) triangle-free] <= (1 - p^3) ** (C(n,3) / (n-2)).

    >>> finner_triangle_bound(5, Fraction(1, 2)).params['nu']
    Fraction(10, 3)
    """
    if n < 3:
        raise DepBoundsException("need n >= 3 for triangles, got %d" % n)
    _probability("p", p)
    nu = Fraction(comb(n, 3), n - 2)
    return BoundReport("finner-triangles", float(nu) * math.log1p(-float(p) ** 3),
                       {"n": n, "p": p, "nu": nu},
                       exact=fraction_power(1 - Fraction(p) ** 3, nu)
                       if not isinstance(p, float) else None)


def janson_triangle_bound(n, p):
    """
    (1 - p^3) ** C(n,3) * exp(Delta / (1 - p^3)), Delta = 6 C(n,4) p^5.

    Delta counts each unordered pair of triangles sharing an edge once, so the
    correction term is the general Janson one with max q = p^3.
    """
    if n < 3:
        raise DepBoundsException("need n >= 3 for triangles, got %d" % n)
    _probability("p", p)
    pf = float(p)
    delta = 6 * comb(n, 4) * pf ** 5
    log = comb(n, 3) * math.log1p(-pf ** 3) + delta / (1 - pf ** 3)
    return BoundReport("janson-triangles", log, {"n": n, "p": p, "delta": delta})


def ramon_concentration_bound(Phi, p, eps):
    """
    P[sum_e phi(e) Y_e >= Phi (p + eps)] <= exp(-2 Phi eps^2) for
    hypergraph-correlated [0,1] variables, Phi = total matching weight.
    """
    if Phi <= 0:
        raise DepBoundsException("Phi must be positive, got %s" % Phi)
    _probability("p", p)
    t = Phi * (p + eps)
    if not Phi * p < t < Phi:
        raise DepBoundsException("t = Phi (p + eps) = %s must lie in (%s, %s)"
                                 % (fmt(t), fmt(Phi * p), fmt(Phi)))
    e = float(eps)
    return BoundReport("ramon", -2 * float(Phi) * e * e,
                       {"p": p, "eps": eps, "t": t, "Phi": Phi})


def ramon_regular_bound(num_edges, d, p, eps):
    "the phi = 1/d corollary: exp(-2 (|E|/d) eps^2)"
    if d < 1:
        raise DepBoundsException("maximum degree must be >= 1, got %s" % d)
    r = ramon_concentration_bound(Fraction(num_edges, d), p, eps)
    r.name = "ramon-regular"
    r.params["d"] = d
    return r


def path_absence_bound(n, k, p):
    """
    P[no length-k u-v path in G(n,p)] <= (1 - p^k) ** nu, nu the weight of the
    uniform matching 1/max-degree on the path hypergraph.
    """
    _check_path_params(n, k)
    _probability("p", p)
    nu = path_matching_exponent(n, k)
    if 2 * k <= n - 1:
        printed = Fraction(n - 2)
    else:
        printed = Fraction((n - 2) * (n - 3), 2 * (k - 2))
    params = {"n": n, "k": k, "p": p, "nu": nu}
    if printed != nu:
        sys.stderr.write("WARNING: n=%d k=%d: exponent %s is not certified by a "
                         "fractional matching; using %s\n" % (n, k, fmt(printed),
                                                             fmt(nu)))
        params["uncertified_exponent"] = printed
    exact = None if isinstance(p, float) else fraction_power(1 - Fraction(p) ** k, nu)
    return BoundReport("paths", float(nu) * math.log1p(-float(p) ** k), params,
                       exact=exact)


def degree_absence_bound(n, d, p):
    """
    P[no vertex of degree d in G(n,p)] <= (1 - C(n-1,d) p^d (1-p)^(n-1-d)) ** (n/2)

    >>> degree_absence_bound(4, 1, Fraction(1, 2)).exact
    Fraction(25, 64)
    """
    if n < 2:
        raise DepBoundsException("need n >= 2, got %d" % n)
    if not 0 <= d <= n - 1:
        raise DepBoundsException("degree d must lie in 0..%d, got %d" % (n - 1, d))
    _probability("p", p)
    q = comb(n - 1, d) * p ** d * (1 - p) ** (n - 1 - d)
    exact = None if isinstance(p, float) else fraction_power(1 - q, Fraction(n, 2))
    return BoundReport("degree", (n / 2.0) * math.log1p(-float(q)),
                       {"n": n, "d": d, "p": p}, exact=exact)


def _triangle_row(n, p):
    f, j = finner_triangle_bound(n, p), janson_triangle_bound(n, p)
    if j.log_value < f.log_value:
        winner = "janson"
    elif f.log_value < j.log_value:
        winner = "finner"
    else:
        winner = "tie"
    return {"n": n, "p": p, "finner": f.value, "janson": j.value,
            "finner_log": f.log_value, "janson_log": j.log_value, "winner": winner}


def compare_triangle_bounds(n, grid=None, threads=1):
    "one row per p with the Finner and Janson triangle-free bounds and the winner"
    if n < 4:
        raise DepBoundsException("comparison needs n >= 4, got %d" % n)
    grid = DEFAULT_GRID if grid is None else list(grid)
    if not grid:
        raise DepBoundsException("empty p grid")
    return pmap(partial(_triangle_row, n), grid, threads)


def crossovers(rows):
    "p values where the winning bound changes, ties skipped"
    out, last = [], None
    for r in rows:
        if r["winner"] == "tie":
            continue
        if last is not None and r["winner"] != last:
            out.append(r["p"])
        last = r["winner"]
    return out


def finner_monotone(h_sub, h_super, k, p):
    """
    the uniform Finner bound of a superhypergraph is never larger.
    returns (bound_sub, bound_super, holds).
    """
    nu_sub, nu_super, ok = check_monotonicity(h_sub, h_super)
    b_sub, b_super = finner_uniform_bound(k, p, nu_sub), finner_uniform_bound(k, p, nu_super)
    return b_sub, b_super, ok and b_super.log_value <= b_sub.log_value
