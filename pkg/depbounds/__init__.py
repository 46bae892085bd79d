"""
fractional invariants of hypergraphs and dependency graphs, the correlation and
tail bounds built on them, and exact / Monte Carlo oracles to check the bounds.

    depbounds gen triangles --n 5 > t5.json
    depbounds invariant nu-star --input t5.json
    depbounds bound finner --input t5.json --p 0.5
    depbounds compare triangles --n 8
    depbounds verify example1 --p 0.5
"""
import os
import sys

__version__ = "0.1.0"


class DepBoundsException(Exception): pass


class CapExceeded(DepBoundsException):
    """an enumeration cap was hit; exit code 2 from the command line"""
    pass


class InequalityViolation(DepBoundsException):
    """lhs > rhs + tolerance in a verification run; exit code 3"""
    pass


def get_threads(threads=None):
    """
    worker count: explicit value, else $DEPBOUNDS_THREADS, else all cores.

    >>> get_threads(3)
    3
    """
    if threads is None:
        threads = os.environ.get("DEPBOUNDS_THREADS")
    if threads is None or threads == "":
        return os.cpu_count() or 1
    try:
        threads = int(threads)
    except ValueError:
        raise DepBoundsException("DEPBOUNDS_THREADS must be an integer, got %r"
                                 % threads)
    if threads < 1:
        raise DepBoundsException("need at least 1 worker, got %d" % threads)
    return threads


def pmap(f, items, threads=1):
    """
    ordered map over `items`, in a process pool when threads > 1.
    results are returned in input order so callers stay deterministic.
    """
    items = list(items)
    threads = min(get_threads(threads), len(items))
    if threads <= 1:
        return [f(x) for x in items]
    import multiprocessing
    sys.stderr.write("using %d workers for %d blocks\n" % (threads, len(items)))
    p = multiprocessing.Pool(threads)
    try:
        return p.map(f, items)
    finally:
        p.close()
        p.join()
