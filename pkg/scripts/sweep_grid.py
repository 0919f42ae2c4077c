"""Build a sharp graph for every violated tuple in a grid and tabulate the results."""

import argparse
import csv
import itertools
import sys
import time

from itcover.construct import run_pipeline, verify_trace
from itcover.criteria import sufficient
from itcover.graph import Params, Side, validate
from itcover.solver import BudgetExceeded, NoIT, find_it


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-k", type=int, default=6)
    ap.add_argument("--max-d", type=int, default=4)
    ap.add_argument("--exhaust-up-to", type=int, default=24, help="run the solver on outputs with at most this many classes")
    ap.add_argument("--budget", type=int, default=10**7)
    ap.add_argument("--out", help="CSV file (default: stdout)")
    args = ap.parse_args(argv)

    rows = []
    for t in itertools.product(range(1, args.max_k + 1), range(1, args.max_k + 1),
                               range(1, args.max_d + 1), range(1, args.max_d + 1)):
        p = Params(*t)
        if sufficient(p):
            continue
        t0 = time.perf_counter()
        r = run_pipeline(p)
        g = r.graph
        a, na = g.count(Side.A)
        b, nb = g.count(Side.B)
        verdict = "skipped"
        nodes = ""
        if a + b <= args.exhaust_up_to:
            out = find_it(g, args.budget)
            verdict = "budget" if isinstance(out, BudgetExceeded) else "no-it" if isinstance(out, NoIT) else "HAS-IT"
            nodes = out.nodes
        rows.append(dict(kA=p.kA, kB=p.kB, DA=p.DA, DB=p.DB, normalized=r.normalized.as_tuple(),
                         a=a, b=b, vertices=na + nb, edges=len(g.edges),
                         full=validate(g, p, require_full=True).full, certified=verify_trace(g, r.trace).ok,
                         solver=verdict, nodes=nodes, seconds=round(time.perf_counter() - t0, 4)))

    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.DictWriter(fh, fieldnames=list(rows[0]))
    w.writeheader()
    w.writerows(rows)
    if args.out:
        fh.close()
    bad = [r for r in rows if not (r["full"] and r["certified"]) or r["solver"] == "HAS-IT"]
    print(f"{len(rows)} tuples, {len(bad)} failures", file=sys.stderr)
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
