"""
summarise `depbounds compare triangles --format csv` output: for each n, the p
values where the winning bound changes and the winners at either end of the
grid.

    python scripts/tabulate-crossover.py n5.csv n6.csv.gz > crossover.txt
"""
import sys
import argparse
from itertools import groupby
from operator import itemgetter

from toolshed import reader


def crossover_rows(fname):
    rows = reader(fname, sep=",", skip_while=lambda toks: toks[0].startswith("#"))
    for n, grp in groupby(rows, itemgetter("n")):
        grp = [r for r in grp if r["winner"] != "tie"]
        if not grp:
            continue
        cross = [b["p"] for a, b in zip(grp, grp[1:]) if a["winner"] != b["winner"]]
        yield n, cross, grp[0]["winner"], grp[-1]["winner"]


def tabulate_main(args):
    __doc__ = """
    tabulate crossover points from depbounds compare CSV files
    """
    p = argparse.ArgumentParser(__doc__)
    p.add_argument("--require-single", action="store_true",
                   help="exit 1 unless every n has exactly one crossover")
    p.add_argument("csvs", nargs="+")
    a = p.parse_args(args)

    sys.stdout.write("#n\tcrossovers\tsmall_p_winner\tlarge_p_winner\tfile\n")
    bad = 0
    for fname in a.csvs:
        for n, cross, small, large in crossover_rows(fname):
            sys.stdout.write("%s\t%s\t%s\t%s\t%s\n" % (n, ",".join(cross) or ".",
                                                       small, large, fname))
            if len(cross) != 1:
                sys.stderr.write("WARNING: n=%s in %s has %d crossovers\n"
                                 % (n, fname, len(cross)))
                bad += 1
    return 1 if bad and a.require_single else 0

if __name__ == "__main__":
    sys.exit(tabulate_main(sys.argv[1:]))
