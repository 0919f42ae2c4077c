"""Assemble the paired no-IT covers for small D and report what was checked."""

import argparse

from itcover.asymmetric import (assemble_sharp_asymmetric, check_pair_condition, derived_graph, multi_gadget,
                                uncovered_sign_vectors)
from itcover.graph import Side
from itcover.solver import BudgetExceeded, NoIT, find_it


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-d", type=int, default=3)
    ap.add_argument("--budget", type=int, default=10**6)
    args = ap.parse_args(argv)
    for D in range(1, args.max_d + 1):
        m = D * D
        h, bp = assemble_sharp_asymmetric(D)
        g = h.graph
        blocks = sorted({len(g.members[c]) for c in g.classes_on(Side.A)})
        deg = max(g.degree(v) for v, _, _ in g.vertices)
        out = find_it(derived_graph(multi_gadget(D)).partitioned(bp), args.budget)
        status = "budget" if isinstance(out, BudgetExceeded) else "no IT" if isinstance(out, NoIT) else "HAS IT"
        print(f"D={D}: {len(bp.blocks)} blocks of size {blocks}, {len(h.pairs)} pairs, max degree {deg}, "
              f"pair condition {check_pair_condition(g, h.pairs)}, "
              f"uncovered side choices {uncovered_sign_vectors(m, bp)}, derived graph: {status} ({out.nodes} nodes)")


if __name__ == "__main__":
    main()
