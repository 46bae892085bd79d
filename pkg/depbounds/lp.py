"""
dense two-phase primal simplex with Bland's rule.

mode='rational' runs on fractions.Fraction and is exact; mode='float' runs on
floats with a tolerance. the public contract is one sense per row:

    maximize / minimize  c.x   s.t.  A_i.x (<= | >= | =) b_i,  x >= lower
"""
import math
import sys
from fractions import Fraction

from . import DepBoundsException

FLOAT_TOL = 1e-9
SENSES = ("<=", ">=", "=")
_FLIP = {"<=": ">=", ">=": "<=", "=": "="}


class LpProblem(object):
    __slots__ = ('c', 'A', 'b', 'senses', 'lower', 'sense')

    def __init__(self, c, A, b, senses=None, lower=None, sense="maximize"):
        self.c = tuple(c)
        self.A = tuple(tuple(row) for row in A)
        self.b = tuple(b)
        m, n = len(self.A), len(self.c)
        self.senses = tuple(senses) if senses is not None else ("<=",) * m
        self.lower = tuple(lower) if lower is not None else (0,) * n
        self.sense = sense
        if len(self.b) != m:
            raise DepBoundsException("A has %d rows but b has %d entries"
                                     % (m, len(self.b)))
        for i, row in enumerate(self.A):
            if len(row) != n:
                raise DepBoundsException("row %d of A has %d entries, expected %d"
                                         % (i, len(row), n))
        if len(self.senses) != m:
            raise DepBoundsException("need one sense per row: %d rows, %d senses"
                                     % (m, len(self.senses)))
        bad = [s for s in self.senses if s not in SENSES]
        if bad:
            raise DepBoundsException("unknown constraint sense %r" % bad[0])
        if len(self.lower) != n:
            raise DepBoundsException("need one lower bound per variable")
        if sense not in ("maximize", "minimize"):
            raise DepBoundsException("sense must be maximize or minimize, got %r"
                                     % sense)
        for x in self.c + self.b + self.lower + sum(self.A, ()):
            if isinstance(x, float) and not math.isfinite(x):
                raise DepBoundsException("LP entries must be finite, got %r" % x)

    def __repr__(self):
        return "LpProblem(%s, %d rows, %d columns)" % (self.sense, len(self.b),
                                                       len(self.c))


class LpSolution(object):
    __slots__ = ('status', 'value', 'x', 'y', 'dual_value', 'pivots')

    def __init__(self, status, value=None, x=None, y=None, dual_value=None,
                 pivots=0):
        self.status = status
        self.value = value
        self.x = x
        self.y = y
        self.dual_value = dual_value
        self.pivots = pivots

    def __repr__(self):
        return "LpSolution(%s, value=%s)" % (self.status, self.value)

    def duality_gap(self):
        return abs(self.value - self.dual_value)


def _pivot(T, basis, r, col):
    piv = T[r][col]
    T[r] = [x / piv for x in T[r]]
    prow = T[r]
    for i, row in enumerate(T):
        if i == r:
            continue
        f = row[col]
        if f:
            T[i] = [a - f * b for a, b in zip(row, prow)]
    basis[r] = col


def _objective_row(T, basis, cost, zero):
    m = len(basis)
    width = len(cost) + 1
    obj = [zero] * width
    for i in range(m):
        cb = cost[basis[i]]
        if cb:
            obj = [o + cb * t for o, t in zip(obj, T[i])]
    for j in range(width - 1):
        obj[j] -= cost[j]
    return obj


def _run(T, basis, allowed, eps):
    """
    Bland's rule: lowest-index improving column enters, ratio ties leave by
    lowest basic index. returns (status, pivots).
    """
    m = len(basis)
    pivots = 0
    while True:
        obj = T[m]
        enter = None
        for j, ok in enumerate(allowed):
            if ok and obj[j] < -eps:
                enter = j
                break
        if enter is None:
            return "optimal", pivots
        leave, best = None, None
        for i in range(m):
            a = T[i][enter]
            if a > eps:
                ratio = T[i][-1] / a
                if (leave is None or ratio < best - eps
                        or (abs(ratio - best) <= eps and basis[i] < basis[leave])):
                    leave, best = i, ratio
        if leave is None:
            return "unbounded", pivots
        _pivot(T, basis, leave, enter)
        pivots += 1


def solve(p, mode="rational", tol=FLOAT_TOL):
    """
    >>> s = solve(LpProblem([1, 1], [[1, 1]], [1]))
    >>> s.status, s.value, s.dual_value
    ('optimal', Fraction(1, 1), Fraction(1, 1))
    """
    if mode == "rational":
        num, eps = Fraction, 0
    elif mode == "float":
        num, eps = float, tol
    else:
        raise DepBoundsException("mode must be 'rational' or 'float', got %r" % mode)
    m, n = len(p.b), len(p.c)
    zero = num(0)
    sign = 1 if p.sense == "maximize" else -1
    if m * n > 5000:
        sys.stderr.write("solving %s LP with %d rows, %d columns\n" % (mode, m, n))

    lower = [num(x) for x in p.lower]
    A = [[num(x) for x in row] for row in p.A]
    b = [num(bi) - sum((a * l for a, l in zip(row, lower)), zero)
         for row, bi in zip(A, p.b)]
    senses = list(p.senses)
    flip = [1] * m
    for i in range(m):
        if b[i] < 0:
            A[i] = [-x for x in A[i]]
            b[i] = -b[i]
            flip[i] = -1
            senses[i] = _FLIP[senses[i]]

    extra = [(i, 1 if s == "<=" else -1) for i, s in enumerate(senses) if s != "="]
    art_rows = [i for i, s in enumerate(senses) if s != "<="]
    total = n + len(extra) + len(art_rows)
    T = [A[i] + [zero] * (total - n) + [b[i]] for i in range(m)]
    basis = [None] * m
    unit = [None] * m
    for k, (i, coef) in enumerate(extra):
        T[i][n + k] = num(coef)
        if coef == 1:
            basis[i] = unit[i] = n + k
    artificial = set()
    for k, i in enumerate(art_rows):
        col = n + len(extra) + k
        T[i][col] = num(1)
        basis[i] = unit[i] = col
        artificial.add(col)

    pivots = 0
    if artificial:
        cost1 = [num(-1) if j in artificial else zero for j in range(total)]
        T.append(_objective_row(T, basis, cost1, zero))
        _, k = _run(T, basis, [True] * total, eps)
        pivots += k
        if T[m][-1] < -10 * eps:
            return LpSolution("infeasible", pivots=pivots)
        T.pop()
        # drive zero-valued artificials out of the basis where a real column can
        # replace them; rows where none can are redundant.
        for i in range(m):
            if basis[i] in artificial:
                for j in range(total):
                    if j not in artificial and abs(T[i][j]) > eps:
                        _pivot(T, basis, i, j)
                        pivots += 1
                        break

    cost = [sign * num(x) for x in p.c] + [zero] * (total - n)
    T.append(_objective_row(T, basis, cost, zero))
    status, k = _run(T, basis, [j not in artificial for j in range(total)], eps)
    pivots += k
    if status != "optimal":
        return LpSolution(status, pivots=pivots)

    xs = [zero] * n
    for i, j in enumerate(basis):
        if j < n:
            xs[j] = T[i][-1]
    if mode == "float":
        xs = [0.0 if -tol < x < 0 else x for x in xs]
    x = [xj + lj for xj, lj in zip(xs, lower)]
    y = [sign * flip[i] * T[m][unit[i]] for i in range(m)]
    value = sum((num(cj) * xj for cj, xj in zip(p.c, x)), zero)
    dual_value = sum((y[i] * (num(p.b[i]) - sum((num(a) * l for a, l in
                                                zip(p.A[i], lower)), zero))
                      for i in range(m)), zero)
    dual_value += sum((num(cj) * lj for cj, lj in zip(p.c, lower)), zero)
    return LpSolution("optimal", value, x, y, dual_value, pivots)


def violations(p, x, tol=0):
    "rows of `p` that `x` violates by more than tol"
    out = []
    for j, (xj, lj) in enumerate(zip(x, p.lower)):
        if xj < lj - tol:
            out.append("x%d=%s below lower bound %s" % (j, xj, lj))
    for i, (row, bi, s) in enumerate(zip(p.A, p.b, p.senses)):
        lhs = sum(a * xj for a, xj in zip(row, x))
        if (s == "<=" and lhs > bi + tol) or (s == ">=" and lhs < bi - tol) \
                or (s == "=" and abs(lhs - bi) > tol):
            out.append("row %d: %s %s %s" % (i, lhs, s, bi))
    return out
