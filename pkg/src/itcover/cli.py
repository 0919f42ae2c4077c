"""Command-line interface.

Exit codes: 0 success or IT found, 1 sharp parameters or no IT, 2 budget
exhausted or nothing proved, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import asymmetric
from .construct import build_sharp, verify_trace
from .criteria import ConditionError, normalize, sufficient, surplus, witness_counting_check
from .graph import Params, Side, StructureError, validate
from .serialize import (DocumentError, GraphDocument, export_dot, read_graph, read_trace, write_graph,
                        write_trace)
from .solver import BudgetExceeded, Found, SearchSpaceError, find_domination_witness, find_it

EX_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EX_USAGE)


def _params(args) -> Params:
    return Params(args.ka, args.kb, args.da, args.db)


def _add_params(p):
    for flag in ("--ka", "--kb", "--da", "--db"):
        p.add_argument(flag, type=int, required=True)


def cmd_check(args) -> int:
    p = _params(args)
    lhs, rhs = p.DB * p.kB + p.DA * p.kA, p.kA * p.kB
    if sufficient(p):
        print(f"SUFFICIENT ({lhs} ≤ {rhs})")
        return 0
    print(f"SHARP ({lhs} > {rhs}) t={surplus(p)}")
    return 1


def cmd_build(args) -> int:
    p = _params(args)
    if sufficient(p):
        print(f"SUFFICIENT: every cover with parameters {p.as_tuple()} has an independent transversal; "
              "nothing to build", file=sys.stderr)
        return 1
    g, trace = build_sharp(p)
    a, na = g.count(Side.A)
    b, nb = g.count(Side.B)
    full = validate(g, p, require_full=True).ok
    print(f"built {'full ' if full else ''}{p.as_tuple()}-graph: {a} A-classes, {b} B-classes, "
          f"{na + nb} vertices, {len(g.edges)} edges")
    if args.out:
        write_graph(g, args.out, params=p)
    if args.trace:
        write_trace(trace, args.trace)
    if args.dot:
        export_dot(g, args.dot)
    if args.verify == "trace":
        report = verify_trace(g, trace)
        print("NO-IT certified by trace replay" if report.ok else f"trace REJECTED: {report.reasons[0]}")
        return 0 if report.ok else 2
    if args.verify == "exhaustive":
        out = find_it(g, args.budget)
        if isinstance(out, BudgetExceeded):
            print(f"BUDGET exhausted after {out.nodes} nodes; nothing proved")
            return 2
        if isinstance(out, Found):
            print("IT FOUND: construction is broken", file=sys.stderr)
            return 2
        print(f"NO-IT confirmed (exhaustive search, {out.nodes} nodes)")
    return 0


def cmd_solve(args) -> int:
    g = read_graph(args.infile).graph
    out = find_it(g, args.budget)
    if isinstance(out, Found):
        print(f"IT ({out.nodes} nodes)")
        for c, v in sorted(out.solution.choice.items()):
            print(f"  class {c}: vertex {v}")
        return 0
    if isinstance(out, BudgetExceeded):
        print(f"BUDGET exhausted after {out.nodes} nodes")
        return 2
    print(f"NO-IT (exhaustive search, {out.nodes} nodes)")
    return 1


def cmd_certify(args) -> int:
    d = read_graph(args.infile)
    try:
        trace = read_trace(args.trace)
    except DocumentError as exc:
        print(f"REJECTED: malformed trace ({exc})")
        return 2
    report = verify_trace(d.graph, trace)
    if not report.ok:
        print(f"REJECTED: {report.reasons[0]}")
        return 2
    if trace.params is not None and d.params is not None and trace.params != d.params:
        print("REJECTED: trace and graph document disagree on parameters")
        return 2
    if trace.params is not None:
        try:
            q, nt = normalize(trace.params)
        except ConditionError:
            print("REJECTED: trace parameters satisfy the sufficiency condition")
            return 2
        if (q, nt) != (trace.normalized, trace.normalization):
            print("REJECTED: normalization metadata does not match the parameters")
            return 2
    p = trace.params or d.params
    if p is not None:
        check = validate(d.graph, p, require_full=True)
        if not check.ok:
            print(f"REJECTED: not a full {p.as_tuple()}-graph ({check.violations[0]})")
            return 2
        print(f"CERTIFIED: full {p.as_tuple()}-graph with no independent transversal")
    else:
        print("CERTIFIED: no independent transversal")
    return 0


def cmd_witness(args) -> int:
    g = read_graph(args.infile).graph
    try:
        w = find_domination_witness(g, args.max_s)
    except SearchSpaceError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    if w is None:
        print("NONE")
        return 2
    print(f"S = {sorted(w.S)}")
    print(f"Z = {[list(e) for e in sorted(w.Z)]}")
    print(f"counting check: {'pass' if witness_counting_check(g, w) else 'fail'}")
    print("note: a witness alone does not certify that no independent transversal exists")
    return 0


def cmd_asym(args) -> int:
    blocks = None
    if args.blocks:
        raw = json.loads(Path(args.blocks).read_text(encoding="utf-8"))
        if not isinstance(raw, dict) or "blocks" not in raw:
            print(f"{args.blocks}: no 'blocks' list found", file=sys.stderr)
            return EX_USAGE
        blocks = asymmetric.BlockPartition(tuple(tuple(b) for b in raw["blocks"]))
    h, bp = asymmetric.assemble_sharp_asymmetric(args.d, blocks, args.strategy,
                                                 **({"seed": args.seed, "time_budget": args.time_budget}
                                                    if args.strategy == "search" else {}))
    g = h.graph
    m = args.d * args.d
    print(f"D={args.d}: {len(bp.blocks)} A-blocks of size {2 * m - 1}, {len(h.pairs)} pairs, "
          f"max degree {max(g.degree(v) for v, _, _ in g.vertices)}, "
          f"pair condition {'holds' if asymmetric.check_pair_condition(g, h.pairs) else 'FAILS'}")
    derived = asymmetric.derived_graph(asymmetric.multi_gadget(args.d))
    out = find_it(derived.partitioned(bp), args.budget)
    verdict = {Found: "HAS an IT", BudgetExceeded: "undecided within budget"}.get(type(out), "has no IT")
    print(f"derived graph with blocks {verdict}")
    if args.out:
        write_graph(GraphDocument(g, None, h.pairs, bp.blocks), args.out)
    return 2 if isinstance(out, (Found, BudgetExceeded)) else 0


def cmd_export(args) -> int:
    export_dot(read_graph(args.infile).graph, args.dot)
    return 0


def make_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="itcover", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", help="decide the sufficiency condition")
    _add_params(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("build", help="build a full sharp graph with no IT")
    _add_params(p)
    p.add_argument("--out")
    p.add_argument("--trace")
    p.add_argument("--dot")
    p.add_argument("--verify", choices=("exhaustive", "trace"))
    p.add_argument("--budget", type=int, default=10**7)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("solve", help="search for an independent transversal")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--budget", type=int)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("certify", help="replay a construction trace against a graph")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--trace", required=True)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("witness", help="brute-force a domination witness")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--max-s", type=int)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("asym", help="paired cover with A-classes of size 2D^2-1 and no IT")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--blocks")
    p.add_argument("--out")
    p.add_argument("--strategy", choices=("construction", "search"), default="construction")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--time-budget", type=float, default=30.0)
    p.add_argument("--budget", type=int, default=10**7)
    p.set_defaults(func=cmd_asym)

    p = sub.add_parser("export", help="write a cluster-graph DOT file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--dot", required=True)
    p.set_defaults(func=cmd_export)
    return ap


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DocumentError, StructureError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
