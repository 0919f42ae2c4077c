"""Write a sharp graph, its trace, and a DOT rendering (default: the (5,6,3,3) case)."""

import argparse
from pathlib import Path

from itcover.construct import build_sharp
from itcover.graph import Params, Side
from itcover.serialize import export_dot, write_graph, write_trace


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("params", nargs=4, type=int, metavar=("KA", "KB", "DA", "DB"), default=[5, 6, 3, 3])
    ap.add_argument("--dir", default="figures")
    args = ap.parse_args(argv)
    p = Params(*args.params)
    g, t = build_sharp(p)
    out = Path(args.dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = "sharp_" + "_".join(map(str, p.as_tuple()))
    write_graph(g, out / f"{stem}.json", params=p)
    write_trace(t, out / f"{stem}.trace.json")
    export_dot(g, out / f"{stem}.dot")
    print(f"{stem}: {g.count(Side.A)[0]} A-classes, {g.count(Side.B)[0]} B-classes -> {out}/")
    print(f"render with: dot -Tsvg {out / stem}.dot -o {out / stem}.svg")


if __name__ == "__main__":
    main()
