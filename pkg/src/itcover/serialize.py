"""JSON documents for graphs and traces, and cluster-graph (DOT) export.

Graph documents have the top-level keys ``params`` (optional), ``classes``,
``vertices``, ``edges`` (each edge written A-endpoint first), ``pairs``
(optional) and ``blocks`` (optional).  Writers emit keys in that order,
one list item per line, LF line endings, so equal inputs give equal bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import jsonschema

from .construct import Base, BuildTrace, Delete, JoinGadget, JoinSubsystem, Swap
from .criteria import NormalizationTrace
from .graph import CoverGraph, Params, Side, StructureError


class DocumentError(ValueError):
    """The document does not match the schema."""


_INT = {"type": "integer", "minimum": 0}
_POS = {"type": "integer", "minimum": 1}
_SIDE = {"enum": ["A", "B"]}
_PARAMS = {"type": "object", "required": ["kA", "kB", "DA", "DB"], "additionalProperties": False,
           "properties": {k: _POS for k in ("kA", "kB", "DA", "DB")}}

GRAPH_SCHEMA = {
    "type": "object",
    "required": ["classes", "vertices", "edges"],
    "additionalProperties": False,
    "properties": {
        "params": _PARAMS,
        "classes": {"type": "array", "items": {
            "type": "object", "required": ["id", "side"], "additionalProperties": False,
            "properties": {"id": _INT, "side": _SIDE}}},
        "vertices": {"type": "array", "items": {
            "type": "object", "required": ["id", "side", "class"], "additionalProperties": False,
            "properties": {"id": _INT, "side": _SIDE, "class": _INT}}},
        "edges": {"type": "array", "items": {"type": "array", "items": _INT, "minItems": 2, "maxItems": 2}},
        "pairs": {"type": "array", "items": {"type": "array", "items": _INT, "minItems": 2, "maxItems": 2}},
        "blocks": {"type": "array", "items": {"type": "array", "items": _INT}},
    },
}

_VALIDATOR = jsonschema.Draft202012Validator(GRAPH_SCHEMA)


def _schema_check(doc) -> None:
    errors = sorted(_VALIDATOR.iter_errors(doc), key=lambda e: [str(p) for p in e.absolute_path])
    if not errors:
        return
    e = errors[0]
    where = "".join(f"[{p}]" if isinstance(p, int) else (f".{p}" if i else p)
                    for i, p in enumerate(e.absolute_path))
    if e.validator == "required":
        missing = [k for k in e.validator_value if k not in e.instance]
        where = f"{where}.{missing[0]}" if where else missing[0]
    raise DocumentError(f"{where or '<root>'}: {e.message}")


@dataclass(frozen=True)
class GraphDocument:
    graph: CoverGraph
    params: Params | None = None
    pairs: tuple[tuple[int, int], ...] | None = None
    blocks: tuple[tuple[int, ...], ...] | None = None


def graph_to_doc(d: GraphDocument) -> dict:
    g = d.graph
    doc = {}
    if d.params is not None:
        doc["params"] = {"kA": d.params.kA, "kB": d.params.kB, "DA": d.params.DA, "DB": d.params.DB}
    doc["classes"] = [{"id": c, "side": s.value} for c, s in g.classes]
    doc["vertices"] = [{"id": v, "side": s.value, "class": c} for v, s, c in g.vertices]
    doc["edges"] = [list(e) for e in sorted(g.edges)]
    if d.pairs is not None:
        doc["pairs"] = [list(p) for p in d.pairs]
    if d.blocks is not None:
        doc["blocks"] = [list(b) for b in d.blocks]
    return doc


def doc_to_graph(doc) -> GraphDocument:
    _schema_check(doc)
    g = CoverGraph.from_parts(((v["id"], v["side"], v["class"]) for v in doc["vertices"]),
                              ((c["id"], c["side"]) for c in doc["classes"]),
                              (tuple(e) for e in doc["edges"]))
    if len(g.vertices) != len(doc["vertices"]) or len(g.classes) != len(doc["classes"]):
        raise StructureError("duplicate vertex or class ids")
    for a, b in doc["edges"]:
        if g.side_of[a] is not Side.A:
            raise StructureError(f"edge [{a}, {b}] must list its A-endpoint first")
    params = Params(**doc["params"]) if "params" in doc else None
    pairs = tuple(tuple(p) for p in doc["pairs"]) if "pairs" in doc else None
    blocks = tuple(tuple(b) for b in doc["blocks"]) if "blocks" in doc else None
    return GraphDocument(g, params, pairs, blocks)


def dumps(doc: dict) -> str:
    """One top-level key per line and one list item per line."""
    lines = ["{"]
    keys = list(doc)
    for n, k in enumerate(keys):
        v = doc[k]
        tail = "," if n < len(keys) - 1 else ""
        if isinstance(v, list) and v:
            lines.append(f"{json.dumps(k)}:[")
            lines.extend(_compact(x) + ("," if i < len(v) - 1 else "") for i, x in enumerate(v))
            lines.append("]" + tail)
        else:
            lines.append(f"{json.dumps(k)}:{_compact(v)}{tail}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _compact(x) -> str:
    return json.dumps(x, separators=(",", ":"), ensure_ascii=False)


def _write(text: str, path) -> None:
    if not str(path):
        raise ValueError("empty output path")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _load(path):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DocumentError(f"<root>: not valid JSON ({exc})") from exc


def write_graph(d: GraphDocument | CoverGraph, path, **extras) -> None:
    if isinstance(d, CoverGraph):
        d = GraphDocument(d, **extras)
    _write(dumps(graph_to_doc(d)), path)


def read_graph(path) -> GraphDocument:
    return doc_to_graph(_load(path))


# Traces

def _params_doc(p: Params | None):
    return None if p is None else {"kA": p.kA, "kB": p.kB, "DA": p.DA, "DB": p.DB}


def step_to_doc(s) -> dict:
    if isinstance(s, Base):
        return {"op": "base", "p": s.p, "q": s.q, "classes": [[c, side.value] for c, side in s.classes]}
    if isinstance(s, JoinGadget):
        return {"op": "join_gadget", "p": s.p, "q": s.q, "donor": s.donor.value, "assignment": list(s.assignment)}
    if isinstance(s, JoinSubsystem):
        src = {"prefix": s.source} if isinstance(s.source, int) else {"trace": trace_to_doc(s.source)}
        return {"op": "join_subsystem", **src, "donor": s.donor, "assignment": list(s.assignment)}
    if isinstance(s, Delete):
        return {"op": "delete", "vertices": list(s.vertices)}
    if isinstance(s, Swap):
        return {"op": "swap"}
    raise TypeError(f"unknown step {s!r}")


def trace_to_doc(t: BuildTrace) -> dict:
    nt = t.normalization
    return {
        "params": _params_doc(t.params),
        "normalized": _params_doc(t.normalized),
        "normalization": {"swapped": nt.swapped, "DA_clamped_from": nt.DA_clamped_from,
                          "DB_clamped_from": nt.DB_clamped_from, "kA_raised_from": nt.kA_raised_from},
        "steps": [step_to_doc(s) for s in t.steps],
    }


def _int(x, where):
    if not isinstance(x, int) or isinstance(x, bool):
        raise DocumentError(f"{where}: expected an integer, got {x!r}")
    return x


def _ints(xs, where):
    if not isinstance(xs, list):
        raise DocumentError(f"{where}: expected a list of integers")
    return tuple(_int(x, where) for x in xs)


def _side(x, where):
    if x not in ("A", "B"):
        raise DocumentError(f"{where}: expected 'A' or 'B', got {x!r}")
    return Side(x)


def _keys(d, want, where):
    if not isinstance(d, dict):
        raise DocumentError(f"{where}: expected an object")
    if set(d) != set(want):
        bad = sorted(set(d) ^ set(want))
        raise DocumentError(f"{where}.{bad[0]}: unexpected or missing field")


def doc_to_step(d, where="steps") -> object:
    op = d.get("op") if isinstance(d, dict) else None
    if op == "base":
        _keys(d, {"op", "p", "q", "classes"}, where)
        if not isinstance(d["classes"], list) or not all(isinstance(c, list) and len(c) == 2 for c in d["classes"]):
            raise DocumentError(f"{where}.classes: expected [id, side] pairs")
        return Base(_int(d["p"], where + ".p"), _int(d["q"], where + ".q"),
                    tuple((_int(c, where + ".classes"), _side(s, where + ".classes")) for c, s in d["classes"]))
    if op == "join_gadget":
        _keys(d, {"op", "p", "q", "donor", "assignment"}, where)
        return JoinGadget(_int(d["p"], where + ".p"), _int(d["q"], where + ".q"),
                          _side(d["donor"], where + ".donor"), _ints(d["assignment"], where + ".assignment"))
    if op == "join_subsystem":
        src_key = "prefix" if "prefix" in d else "trace"
        _keys(d, {"op", src_key, "donor", "assignment"}, where)
        src = _int(d["prefix"], where + ".prefix") if src_key == "prefix" else doc_to_trace(d["trace"])
        return JoinSubsystem(src, _int(d["donor"], where + ".donor"), _ints(d["assignment"], where + ".assignment"))
    if op == "delete":
        _keys(d, {"op", "vertices"}, where)
        return Delete(_ints(d["vertices"], where + ".vertices"))
    if op == "swap":
        _keys(d, {"op"}, where)
        return Swap()
    raise DocumentError(f"{where}.op: unknown step kind {op!r}")


def doc_to_trace(d) -> BuildTrace:
    _keys(d, {"params", "normalized", "normalization", "steps"}, "<root>")
    nd = d["normalization"]
    _keys(nd, {"swapped", "DA_clamped_from", "DB_clamped_from", "kA_raised_from"}, "normalization")
    if not isinstance(nd["swapped"], bool):
        raise DocumentError("normalization.swapped: expected a boolean")
    opt = {k: (None if nd[k] is None else _int(nd[k], "normalization." + k))
           for k in ("DA_clamped_from", "DB_clamped_from", "kA_raised_from")}
    nt = NormalizationTrace(nd["swapped"], **opt)

    def params(x, where):
        if x is None:
            return None
        _keys(x, {"kA", "kB", "DA", "DB"}, where)
        try:
            return Params(**{k: _int(v, f"{where}.{k}") for k, v in x.items()})
        except ValueError as exc:
            raise DocumentError(f"{where}: {exc}") from exc

    if not isinstance(d["steps"], list):
        raise DocumentError("steps: expected a list")
    steps = tuple(doc_to_step(s, f"steps[{i}]") for i, s in enumerate(d["steps"]))
    return BuildTrace(steps, params(d["params"], "params"), params(d["normalized"], "normalized"), nt)


def write_trace(t: BuildTrace, path) -> None:
    _write(dumps(trace_to_doc(t)), path)


def read_trace(path) -> BuildTrace:
    return doc_to_trace(_load(path))


# Cluster-graph export

def dot_source(g: CoverGraph, name: str = "cover") -> str:
    """DOT text with one cluster per class; A-clusters come first and sit on top."""
    out = [f"graph {name} {{", "  newrank=true;", "  node [shape=point, width=0.08];"]
    for side in (Side.A, Side.B):
        for c in g.classes_on(side):
            members = " ".join(f"v{v};" for v in g.members[c])
            out.append(f'  subgraph cluster_{side.value}{c} {{ label="{side.value}{c}"; rank=same; {members} }}')
    out.extend(f"  v{a} -- v{b};" for a, b in sorted(g.edges))
    out.append("}")
    return "\n".join(out) + "\n"


def export_dot(g: CoverGraph, path) -> None:
    _write(dot_source(g), path)
