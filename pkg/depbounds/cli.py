"""
compute fractional invariants, evaluate correlation and tail bounds, and check
them against exact enumeration and seeded Monte Carlo.

    depbounds gen {triangles,paths,degrees,cycle,cliques} --n N [--k K --u U --v V]
    depbounds invariant {nu-star,chi-star,chi-b,system-chi-star,system-chi-b} ...
    depbounds bound {finner,chernoff,bennett,janson,ramon,paths,degree,triangles} ...
    depbounds compare triangles --n N [--p-grid 0.01:0.99:0.01]
    depbounds verify {finner,holder,example1} ...
    depbounds simulate {independence,tail,example1} --samples S --seed X [--exact]

every subcommand takes --format json|csv and --out PATH (default stdout).
exit codes: 0 success, 1 usage or parameter error, 2 enumeration cap exceeded,
3 an inequality failed during verify.
"""
import argparse
import csv
import json
import math
import sys
from fractions import Fraction

from toolshed import nopen

from . import (__version__, DepBoundsException, CapExceeded, InequalityViolation,
               get_threads)
from . import bounds as B
from .hypergraph import (parse_number, cycle_graph, complete_graph, triangle_hypergraph,
                         clique_hypergraph, path_hypergraph, degree_hypergraph,
                         read_hypergraph, read_system, hypergraph_json, write_json,
                         max_degree, dependency_graph_of, graph_correlated_hypergraph,
                         DependencyGraph, VertexProbabilities)
from .invariants import (fmt, fractional_matching_number, fractional_cover_number,
                         fractional_chromatic_number, b_fold_chromatic_number,
                         independence_system_chi_star, independence_system_chi_b,
                         uniform_matching, MAX_VERTICES)
from . import oracle as O


class Parser(argparse.ArgumentParser):
    "argparse with usage errors mapped to exit code 1"
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write("%s: error: %s\n" % (self.prog, message))
        sys.exit(1)


def _number(s):
    try:
        return parse_number(s)
    except DepBoundsException as e:
        raise argparse.ArgumentTypeError(str(e))


def p_grid(s):
    """
    'start:stop:step' inclusive of stop when step divides the range, or a
    comma-separated list.

    >>> [str(x) for x in p_grid('0.1:0.5:0.2')]
    ['1/10', '3/10', '1/2']
    >>> len(p_grid('0.1:0.9:0.1')), p_grid('0.5,0.25')
    (9, [Fraction(1, 2), Fraction(1, 4)])
    """
    s = s.strip()
    if ":" in s:
        toks = s.split(":")
        if len(toks) != 3:
            raise DepBoundsException("p-grid must be start:stop:step, got %r" % s)
        start, stop, step = [parse_number(t) for t in toks]
        if step <= 0:
            raise DepBoundsException("p-grid step must be positive, got %s" % step)
        out, k = [], 0
        while start + k * step <= stop:
            out.append(start + k * step)
            k += 1
        return out
    return [parse_number(t) for t in s.split(",") if t.strip()]


def _plain(x):
    if isinstance(x, Fraction):
        return fmt(x)
    if isinstance(x, dict):
        return dict((str(k), _plain(v)) for k, v in x.items())
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x


class RunConfig(object):
    """
    everything needed to rerun a command; echoed at the top of every output.
    """
    __slots__ = ('subcommand', 'which', 'source', 'params', 'format', 'out',
                 'threads', 'argv')

    _skip = ('which', 'format', 'out', 'threads', 'input', 'gen')

    def __init__(self, subcommand, a, argv):
        self.subcommand = subcommand
        self.which = a.which
        self.source = None
        if getattr(a, "input", None):
            self.source = "input:%s" % a.input
        elif getattr(a, "gen", None):
            self.source = "gen:%s" % a.gen
        self.params = dict((k, v) for k, v in sorted(vars(a).items())
                           if k not in self._skip and v is not None)
        self.format = a.format
        self.out = a.out
        self.threads = get_threads(a.threads)
        self.argv = list(argv)

    def __repr__(self):
        return "RunConfig(%s %s)" % (self.subcommand, self.which)

    def to_json(self):
        return {"subcommand": self.subcommand, "which": self.which,
                "source": self.source, "params": _plain(self.params),
                "format": self.format, "out": self.out, "threads": self.threads,
                "version": __version__}

    def header(self):
        cl = " ".join(["depbounds", self.subcommand] + self.argv)
        return "#depbounds\tVN:%s\tCL:\"%s\"\tCF:%s" % (
            __version__, cl.replace("\t", "\\t"),
            json.dumps(self.to_json(), sort_keys=True))


def _common(p):
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default="-", help="output path; .gz is compressed")
    p.add_argument("--threads", type=int, default=None,
                   help="worker count (default: $DEPBOUNDS_THREADS or all cores)")


def _source(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--input", help="hypergraph JSON ({vertices, edges}); - for stdin")
    g.add_argument("--gen", choices=GENERATORS,
                   help="generate the hypergraph in memory instead of reading it")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--u", type=int, default=0, help="path start vertex (default 0)")
    p.add_argument("--v", type=int, default=1, help="path end vertex (default 1)")


GENERATORS = ("triangles", "paths", "degrees", "cycle", "cliques")


def generate(kind, n, k=None, u=0, v=1):
    "hypergraph for a generator name; all parameters are integers"
    if n is None:
        raise DepBoundsException("gen %s needs --n" % kind)
    if kind in ("paths", "cliques") and k is None:
        raise DepBoundsException("gen %s needs --k" % kind)
    if kind == "triangles":
        return triangle_hypergraph(n)
    if kind == "paths":
        return path_hypergraph(n, k, u, v)
    if kind == "degrees":
        return degree_hypergraph(n)
    if kind == "cycle":
        return cycle_graph(n).as_hypergraph()
    if kind == "cliques":
        return clique_hypergraph(n, k)
    raise DepBoundsException("unknown generator %r" % kind)


def _hypergraph(a, p):
    if a.input is None and a.gen is None:
        p.error("exactly one of --input or --gen is required")
    if a.input is not None:
        sys.stderr.write("reading %s\n" % a.input)
        return read_hypergraph(a.input)
    return generate(a.gen, a.n, a.k, a.u, a.v)


def _graph(h, intersection):
    if intersection:
        return dependency_graph_of(h)
    return DependencyGraph.from_hypergraph(h)


def _probabilities(a, p):
    if a.p is None:
        p.error("--p is required")
    return VertexProbabilities(a.p)


def _need(p, a, *names):
    missing = ["--%s" % n.replace("_", "-") for n in names if getattr(a, n) is None]
    if missing:
        p.error("%s %s required" % (", ".join(missing),
                                    "is" if len(missing) == 1 else "are"))


def _open(path):
    return sys.stdout if path in (None, "-") else nopen(path, "w")


def emit(cfg, doc, columns=None, rows=None, comments=()):
    """
    JSON: `doc` plus a config key. CSV: the config header line, any comment
    lines, then `rows` under `columns`.
    """
    out = _open(cfg.out)
    try:
        if cfg.format == "json" or columns is None:
            doc = _plain(doc)
            doc["config"] = cfg.to_json()
            write_json(doc, out)
        else:
            out.write(cfg.header() + "\n")
            for c in comments:
                out.write("#%s\n" % c)
            w = csv.DictWriter(out, columns, lineterminator="\n")
            w.writeheader()
            for r in rows:
                w.writerow(dict((k, _cell(r.get(k))) for k in columns))
            out.flush()
    finally:
        if out is not sys.stdout:
            out.close()


def _cell(x):
    if x is None:
        return ""
    if isinstance(x, Fraction):
        return repr(float(x))
    if isinstance(x, (list, tuple)):
        return ";".join(str(_cell(v)) for v in x)
    return x


def gen_main(args):
    p = Parser(prog="depbounds gen", description="write a hypergraph as JSON")
    p.add_argument("which", choices=GENERATORS)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--u", type=int, default=0)
    p.add_argument("--v", type=int, default=1)
    _common(p)
    a = p.parse_args(args)
    cfg = RunConfig("gen", a, args)
    h = generate(a.which, a.n, a.k, a.u, a.v)
    sys.stderr.write("generated %s: %d vertices, %d edges\n"
                     % (a.which, len(h.vertices), len(h.edges)))
    emit(cfg, hypergraph_json(h))
    return 0


INVARIANTS = ("nu-star", "chi-star", "chi-b", "system-chi-star", "system-chi-b")


def invariant_main(args):
    p = Parser(prog="depbounds invariant",
               description="exact fractional invariants with certificates")
    p.add_argument("which", choices=INVARIANTS)
    _source(p)
    p.add_argument("--b", type=int, default=2, help="fold for chi-b (default 2)")
    p.add_argument("--intersection", action="store_true",
                   help="colour the intersection graph of the hyperedges")
    p.add_argument("--mode", choices=("rational", "float"), default="rational")
    p.add_argument("--cap", type=int, default=MAX_VERTICES,
                   help="vertex cap for exhaustive searches")
    _common(p)
    a = p.parse_args(args)
    cfg = RunConfig("invariant", a, args)

    if a.which.startswith("system-"):
        if a.input is None:
            p.error("%s needs --input with {vertices, independent}" % a.which)
        system = read_system(a.input)
        if a.which == "system-chi-star":
            value, cert = independence_system_chi_star(system, a.cap, a.mode)
        else:
            value, cert = independence_system_chi_b(system, a.b, a.cap)
        doc = {"invariant": a.which, "value": value, "certificate": cert.to_json()}
    else:
        h = _hypergraph(a, p)
        if a.which == "nu-star":
            value, phi = fractional_matching_number(h, a.mode)
            cover, _ = fractional_cover_number(h, a.mode)
            doc = {"invariant": a.which, "value": value, "cover_value": cover,
                   "certificate": phi.to_json()}
        else:
            g = _graph(h, a.intersection)
            if a.which == "chi-star":
                value, cert = fractional_chromatic_number(g, a.cap, a.mode)
            else:
                value, cert = b_fold_chromatic_number(g, a.b, a.cap)
            doc = {"invariant": a.which, "value": value, "certificate": cert.to_json()}
    doc["value"] = fmt(doc["value"])
    row = {"invariant": a.which, "value": doc["value"],
           "b": a.b if a.which.endswith("chi-b") else None}
    emit(cfg, doc, ("invariant", "value", "b"), [row])
    return 0


BOUNDS = ("finner", "chernoff", "bennett", "janson", "ramon", "paths", "degree",
          "triangles")


def bound_main(args):
    p = Parser(prog="depbounds bound", description="evaluate a closed-form bound")
    p.add_argument("which", choices=BOUNDS)
    _source(p)
    p.add_argument("--p", type=_number, help="vertex inclusion probability")
    p.add_argument("--q", type=_number, help="common mean (chernoff)")
    p.add_argument("--eps", type=_number)
    p.add_argument("--t", type=_number)
    p.add_argument("--d", type=int, help="vertex degree (degree bound)")
    p.add_argument("--S", type=_number, help="variance sum (bennett)")
    p.add_argument("--Phi", type=_number, help="fractional matching total (ramon)")
    p.add_argument("--chi-star", type=_number)
    p.add_argument("--nv", type=int, help="number of variables (chernoff)")
    p.add_argument("--uniform", action="store_true",
                   help="use phi = 1/max-degree instead of an optimal matching")
    p.add_argument("--intersection", action="store_true")
    _common(p)
    a = p.parse_args(args)
    cfg = RunConfig("bound", a, args)
    w = a.which

    if w == "finner":
        h = _hypergraph(a, p)
        pv = _probabilities(a, p)
        if a.uniform:
            phi = uniform_matching(h)
        else:
            _, phi = fractional_matching_number(h)
        reports = [B.finner_independence_bound(h, pv, phi, "nu*=%s" % fmt(phi.total()))]
    elif w == "janson":
        h = _hypergraph(a, p)
        reports = [B.janson_independence_bound(h, _probabilities(a, p))]
    elif w == "chernoff":
        _need(p, a, "q", "eps")
        nv, chi = a.nv, a.chi_star
        if a.input is not None or a.gen is not None:
            g = _graph(_hypergraph(a, p), a.intersection)
            nv = len(g.vertices)
            chi, _ = fractional_chromatic_number(g)
        if nv is None or chi is None:
            p.error("chernoff needs --nv and --chi-star, or a graph via --input/--gen")
        reports = [B.chernoff_kl_bound(nv, a.q, a.eps, chi)]
    elif w == "bennett":
        _need(p, a, "S", "t")
        reports = [B.bennett_bound(a.S, a.t, a.chi_star or 1)]
    elif w == "ramon":
        _need(p, a, "p", "eps")
        if a.input is not None or a.gen is not None:
            h = _hypergraph(a, p)
            reports = [B.ramon_regular_bound(len(h.edges), max_degree(h), a.p, a.eps)]
        else:
            _need(p, a, "Phi")
            reports = [B.ramon_concentration_bound(a.Phi, a.p, a.eps)]
    elif w == "paths":
        _need(p, a, "n", "k", "p")
        reports = [B.path_absence_bound(a.n, a.k, a.p)]
    elif w == "degree":
        _need(p, a, "n", "d", "p")
        reports = [B.degree_absence_bound(a.n, a.d, a.p)]
    else:
        _need(p, a, "n", "p")
        reports = [B.finner_triangle_bound(a.n, a.p), B.janson_triangle_bound(a.n, a.p)]

    rows = [r.as_row() for rep in reports for r in rep.rows()]
    emit(cfg, {"bounds": [r.to_json() for r in reports]}, B.CSV_COLUMNS, rows)
    return 0


COMPARE_COLUMNS = ("n", "p", "finner", "janson", "finner_log", "janson_log",
                   "winner", "exact")


def compare_main(args):
    p = Parser(prog="depbounds compare",
               description="scan p and report which bound is smaller")
    p.add_argument("which", choices=("triangles",))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p-grid", default=None,
                   help="start:stop:step (inclusive) or a comma list; "
                        "default 0.01:0.99:0.01")
    p.add_argument("--exact", action="store_true",
                   help="add the exact triangle-free probability (n <= 6)")
    _common(p)
    a = p.parse_args(args)
    cfg = RunConfig("compare", a, args)
    grid = None if a.p_grid is None else p_grid(a.p_grid)
    rows = B.compare_triangle_bounds(a.n, grid, cfg.threads)
    if a.exact:
        h = triangle_hypergraph(a.n)
        sys.stderr.write("enumerating %d potential edges per grid point\n"
                         % len(h.vertices))
        for r in rows:
            r["exact"] = O.exact_independence_probability(
                h, VertexProbabilities(float(r["p"])), threads=cfg.threads)
    cross = B.crossovers(rows)
    winners = [r["winner"] for r in rows if r["winner"] != "tie"]
    doc = {"rows": rows, "crossovers": cross,
           "small_p_winner": winners[0] if winners else None,
           "large_p_winner": winners[-1] if winners else None}
    comments = ["crossovers:%s" % ",".join(repr(float(x)) for x in cross)]
    emit(cfg, doc, COMPARE_COLUMNS, rows, comments)
    return 0


VERIFY_COLUMNS = ("check", "lhs", "rhs", "holds")


def _is_c5(g):
    return len(g.vertices) == 5 and g.edges == cycle_graph(5).edges


def verify_main(args):
    p = Parser(prog="depbounds verify",
               description="check an inequality by exact enumeration")
    p.add_argument("which", choices=("finner", "holder", "example1"))
    _source(p)
    p.add_argument("--p", type=_number, default=None)
    p.add_argument("--p-grid", default=None, help="several p values (example1)")
    p.add_argument("--b", type=int, default=2)
    p.add_argument("--kind", choices=("product", "complement"), default="product",
                   help="Y_e as the product of its seeds or one minus it (finner)")
    p.add_argument("--dist", choices=("auto", "c5", "correlated"), default="auto",
                   help="holder: the five-cycle law or a hypergraph-correlated "
                        "family built on the graph (auto: c5 for the 5-cycle)")
    p.add_argument("--uniform", action="store_true")
    p.add_argument("--intersection", action="store_true")
    p.add_argument("--subset-cap", type=int, default=O.SUBSET_CAP)
    _common(p)
    a = p.parse_args(args)
    cfg = RunConfig("verify", a, args)
    results = []

    if a.which == "finner":
        h = _hypergraph(a, p)
        pv = _probabilities(a, p)
        phi = uniform_matching(h) if a.uniform else fractional_matching_number(h)[1]
        v = O.verify_finner(h, pv, phi, a.kind, threads=cfg.threads)
        results.append({"check": "finner-%s" % a.kind, "lhs": v.lhs, "rhs": v.rhs,
                        "holds": v.holds})
    elif a.which == "holder":
        g = _graph(_hypergraph(a, p), a.intersection)
        pr = a.p if a.p is not None else Fraction(1, 2)
        dist = a.dist
        if dist == "auto":
            dist = "c5" if _is_c5(g) else "correlated"
        if dist == "c5":
            if not _is_c5(g):
                p.error("--dist c5 needs the 5-cycle as the graph")
            d = O.c5_distribution(pr)
        else:
            d = O.correlated_distribution(graph_correlated_hypergraph(g),
                                          VertexProbabilities(pr))
        v = O.verify_product_inequality(d, g, a.b)
        results.append({"check": "holder-b%d" % a.b, "lhs": v.lhs, "rhs": v.rhs,
                        "holds": v.holds, "chi_b": v.extra["chi_b"],
                        "distribution": dist})
    else:
        ps = p_grid(a.p_grid) if a.p_grid else [a.p if a.p is not None
                                                else Fraction(1, 2)]
        for pr in ps:
            results.extend(_example1_results(pr, a.subset_cap))

    ok = all(r["holds"] for r in results)
    emit(cfg, {"results": results, "holds": ok}, VERIFY_COLUMNS, results)
    if not ok:
        bad = [r["check"] for r in results if not r["holds"]]
        raise InequalityViolation("failed: %s" % ", ".join(bad))
    return 0


def _example1_results(p, subset_cap):
    e = O.example1_checks(p, subset_cap)
    dep, holder = e["dependency"], e["holder"]
    tag = "p=%s" % fmt(p)
    return [
        {"check": "mass %s" % tag, "lhs": e["mass"], "rhs": 1,
         "holds": e["mass"] == 1 if O._exact(p) else abs(e["mass"] - 1) <= 1e-12},
        {"check": "marginals %s" % tag, "lhs": e["marginals"], "rhs": p,
         "holds": all(m == p if O._exact(p) else abs(m - p) <= 1e-12
                      for m in e["marginals"])},
        {"check": "dependency-graph %s" % tag, "lhs": dep.checked, "rhs": dep.cap,
         "holds": dep.holds},
        {"check": "holder-b2 %s" % tag, "lhs": holder.lhs, "rhs": holder.rhs,
         "holds": holder.holds},
        {"check": "all-ones-exceeds-p^5/2 %s" % tag, "lhs": e["all_ones"],
         "rhs": e["hypergraph_limit"], "holds": e["exceeds_limit"]},
    ]


MC_COLUMNS = B.CSV_COLUMNS


def simulate_main(args):
    p = Parser(prog="depbounds simulate", description="seeded Monte Carlo estimates")
    p.add_argument("which", choices=("independence", "tail", "example1"))
    _source(p)
    p.add_argument("--p", type=_number, default=None)
    p.add_argument("--eps", type=_number, default=None,
                   help="tail: threshold Phi (p^k + eps)")
    p.add_argument("--t", type=_number, default=None, help="tail threshold")
    p.add_argument("--samples", type=int, default=100000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--exact", action="store_true", help="also report the exact value")
    _common(p)
    a = p.parse_args(args)
    cfg = RunConfig("simulate", a, args)
    reports, exact = [], None

    if a.which == "independence":
        h = _hypergraph(a, p)
        pv = _probabilities(a, p)
        est = O.mc_independence(h, pv, a.samples, a.seed, cfg.threads)
        if a.exact:
            exact = O.exact_independence_probability(h, pv, threads=cfg.threads)
    elif a.which == "tail":
        h = _hypergraph(a, p)
        pv = _probabilities(a, p)
        phi = uniform_matching(h)
        Phi = phi.total()
        t = a.t
        if t is None:
            _need(p, a, "eps")
            if not h.is_uniform() or not h.edges:
                p.error("--eps needs a uniform hypergraph; give --t instead")
            q = a.p ** len(h.edges[0])
            t = Phi * (q + a.eps)
            reports.append(B.ramon_concentration_bound(Phi, q, a.eps))
        est = O.mc_tail(h, pv, t, a.samples, a.seed, phi, cfg.threads)
        if a.exact:
            # phi is constant 1/d, so sum phi(e) Y_e >= t iff sum Y_e >= t d
            d = O.correlated_distribution(h, pv)
            exact = O.exact_tail(d, t * max_degree(h))
    else:
        _need(p, a, "p", "t")
        d = O.c5_distribution(a.p)
        est = O.mc_distribution_tail(d, a.t, a.samples, a.seed, cfg.threads)
        if a.exact:
            exact = O.exact_tail(d, a.t)

    doc = {"estimate": est.to_json(), "bounds": [r.to_json() for r in reports]}
    rows = [est.as_row()]
    if exact is not None:
        doc["exact"] = exact
        log = math.log(exact) if exact > 0 else float("-inf")
        rows.append(dict(est.as_row(), bound_name="exact", value=repr(float(exact)),
                         log_value=repr(log), certificate_id="enumeration"))
        if not est.covers(exact):
            sys.stderr.write("WARNING: estimate %r is more than 3 half-widths from "
                             "the exact value %r\n" % (est.estimate, float(exact)))
    rows.extend(r.as_row() for rep in reports for r in rep.rows())
    emit(cfg, doc, MC_COLUMNS, rows)
    return 0


COMMANDS = {"gen": gen_main, "invariant": invariant_main, "bound": bound_main,
            "compare": compare_main, "verify": verify_main, "simulate": simulate_main}


def main(args=sys.argv[1:]):
    if len(args) > 0 and args[0] == "--version":
        print("depbounds %s" % __version__)
        return 0
    if len(args) == 0 or args[0] not in COMMANDS:
        sys.stderr.write(__doc__.lstrip())
        if len(args) > 0 and args[0] in ("-h", "--help"):
            return 0
        return 1
    try:
        return COMMANDS[args[0]](args[1:])
    except CapExceeded as e:
        sys.stderr.write("ERROR: %s\n" % e)
        return 2
    except InequalityViolation as e:
        sys.stderr.write("ERROR: inequality violated: %s\n" % e)
        return 3
    except DepBoundsException as e:
        sys.stderr.write("ERROR: %s\n" % e)
        return 1


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
