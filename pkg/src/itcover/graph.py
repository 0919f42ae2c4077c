"""Vertex-partitioned bipartite graphs.

A :class:`CoverGraph` is a bipartite graph with sides A and B whose vertex
set is partitioned into classes, each class lying entirely on one side.
Graphs are frozen; every mutator returns a new graph.  Constructions that
perform many steps use :class:`GraphBuilder` and freeze at the end.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping


class StructureError(ValueError):
    """The graph itself is malformed (dangling ids, within-side edge, ...)."""


class CapacityError(ValueError):
    """A class would exceed, or already exceeds, its size cap."""


class Side(str, enum.Enum):
    A = "A"
    B = "B"

    @property
    def other(self) -> Side:
        return Side.B if self is Side.A else Side.A


@dataclass(frozen=True)
class Params:
    """Class-size floors ``kA``, ``kB`` and degree caps ``DA``, ``DB``."""

    kA: int
    kB: int
    DA: int
    DB: int

    def __post_init__(self):
        for name in ("kA", "kB", "DA", "DB"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.kA, self.kB, self.DA, self.DB)

    def cap(self, side: Side) -> int:
        return self.kA if side is Side.A else self.kB

    def degree_cap(self, side: Side) -> int:
        return self.DA if side is Side.A else self.DB


@dataclass(frozen=True)
class CoverGraph:
    """Frozen bipartite graph with a side-respecting class partition.

    ``vertices`` holds ``(vertex id, side, class id)`` triples sorted by id,
    ``classes`` holds ``(class id, side)`` sorted by id, and every edge is
    stored as ``(A-endpoint, B-endpoint)``.  Use :meth:`from_parts` to build
    one from unsorted or unoriented data.
    """

    vertices: tuple[tuple[int, Side, int], ...]
    classes: tuple[tuple[int, Side], ...]
    edges: frozenset[tuple[int, int]] = field(default=frozenset())

    def __post_init__(self):
        self.check_structure()

    @classmethod
    def from_parts(cls, vertices: Iterable, classes: Iterable, edges: Iterable = ()) -> CoverGraph:
        verts = tuple(sorted((int(v), Side(s), int(c)) for v, s, c in vertices))
        clss = tuple(sorted((int(c), Side(s)) for c, s in classes))
        side_of = {v: s for v, s, _ in verts}
        oriented = set()
        for u, w in edges:
            if u not in side_of or w not in side_of:
                raise StructureError(f"edge ({u}, {w}) references an unknown vertex")
            if side_of[u] is side_of[w]:
                raise StructureError(f"edge ({u}, {w}) joins two {side_of[u].value}-side vertices")
            e = (u, w) if side_of[u] is Side.A else (w, u)
            if e in oriented:
                raise StructureError(f"duplicate edge ({u}, {w})")
            oriented.add(e)
        return cls(verts, clss, frozenset(oriented))

    def check_structure(self) -> None:
        class_side = {}
        for c, s in self.classes:
            if c in class_side:
                raise StructureError(f"duplicate class id {c}")
            class_side[c] = s
        seen = {}
        used = set()
        for v, s, c in self.vertices:
            if v in seen:
                raise StructureError(f"duplicate vertex id {v}")
            if c not in class_side:
                raise StructureError(f"vertex {v} belongs to unknown class {c}")
            if class_side[c] is not s:
                raise StructureError(f"vertex {v} on side {s.value} sits in {class_side[c].value}-class {c}")
            seen[v] = s
            used.add(c)
        empty = sorted(set(class_side) - used)
        if empty:
            raise StructureError(f"class {empty[0]} is empty")
        for a, b in self.edges:
            if a == b:
                raise StructureError(f"self-loop at {a}")
            if seen.get(a) is not Side.A or seen.get(b) is not Side.B:
                raise StructureError(f"edge ({a}, {b}) is not an (A, B) pair of known vertices")

    # derived lookups; safe to cache because the instance is frozen

    @cached_property
    def side_of(self) -> dict[int, Side]:
        return {v: s for v, s, _ in self.vertices}

    @cached_property
    def class_of(self) -> dict[int, int]:
        return {v: c for v, _, c in self.vertices}

    @cached_property
    def class_side(self) -> dict[int, Side]:
        return dict(self.classes)

    @cached_property
    def members(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {c: [] for c, _ in self.classes}
        for v, _, c in self.vertices:
            out[c].append(v)
        return {c: tuple(vs) for c, vs in out.items()}

    @cached_property
    def adjacency(self) -> dict[int, frozenset[int]]:
        adj: dict[int, set[int]] = {v: set() for v, _, _ in self.vertices}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return {v: frozenset(ns) for v, ns in adj.items()}

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def classes_on(self, side: Side) -> list[int]:
        return [c for c, s in self.classes if s is side]

    def vertices_on(self, side: Side) -> list[int]:
        return [v for v, s, _ in self.vertices if s is side]

    def count(self, side: Side) -> tuple[int, int]:
        """``(number of classes, number of vertices)`` on ``side``."""
        return len(self.classes_on(side)), len(self.vertices_on(side))

    def max_vertex_id(self) -> int:
        return self.vertices[-1][0] if self.vertices else -1

    def max_class_id(self) -> int:
        return self.classes[-1][0] if self.classes else -1

    def swap_sides(self) -> CoverGraph:
        verts = tuple((v, s.other, c) for v, s, c in self.vertices)
        clss = tuple((c, s.other) for c, s in self.classes)
        return CoverGraph(verts, clss, frozenset((b, a) for a, b in self.edges))


@dataclass(frozen=True)
class PartitionedGraph:
    """A vertex-partitioned graph with no side structure.

    Only the solver needs this: derived graphs with block partitions mix the
    two halves of their complete bipartite pieces inside one class.
    """

    members: dict[int, tuple[int, ...]]
    adjacency: dict[int, frozenset[int]]

    @classmethod
    def from_edges(cls, classes: Mapping[int, Iterable[int]], edges: Iterable[tuple[int, int]]) -> PartitionedGraph:
        members = {int(c): tuple(sorted(vs)) for c, vs in sorted(classes.items())}
        adj: dict[int, set[int]] = {v: set() for vs in members.values() for v in vs}
        for u, w in edges:
            if u not in adj or w not in adj:
                raise StructureError(f"edge ({u}, {w}) leaves the partitioned vertex set")
            adj[u].add(w)
            adj[w].add(u)
        return cls(members, {v: frozenset(ns) for v, ns in adj.items()})


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...]
    full: bool

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class DeficitReport:
    a: int
    b: int
    dA: int
    dB: int


def validate(g: CoverGraph, p: Params, require_full: bool = False) -> ValidationReport:
    """Check ``g`` against the size and degree caps of ``p``.

    Raises :class:`StructureError` for a malformed graph; parameter
    violations are collected in the report instead.  ``full`` reports
    whether every class sits exactly at its cap, independently of
    ``require_full``.
    """
    g.check_structure()
    problems = []
    full = True
    for c, side in g.classes:
        size, cap = len(g.members[c]), p.cap(side)
        full = full and size == cap
        if size > cap:
            problems.append(f"{side.value}-class {c} has size {size} > k{side.value}={cap}")
        elif size != cap and require_full:
            problems.append(f"{side.value}-class {c} has size {size} != k{side.value}={cap}")
    for v, side, _ in g.vertices:
        d, cap = g.degree(v), p.degree_cap(side)
        if d > cap:
            problems.append(f"{side.value}-vertex {v} has degree {d} > D{side.value}={cap}")
    return ValidationReport(tuple(problems), full)


def deficits(g: CoverGraph, p: Params) -> DeficitReport:
    a, size_a = g.count(Side.A)
    b, size_b = g.count(Side.B)
    for c, side in g.classes:
        if len(g.members[c]) > p.cap(side):
            raise CapacityError(f"{side.value}-class {c} exceeds its cap; deficit undefined")
    return DeficitReport(a, b, a * p.kA - size_a, b * p.kB - size_b)


def disjoint_union(g1: CoverGraph, g2: CoverGraph) -> tuple[CoverGraph, dict[int, int], dict[int, int]]:
    """Disjoint union with ``g2`` relabeled after ``g1``.

    ``g1`` keeps its ids; the vertices and classes of ``g2`` are renumbered
    densely, in ascending order, starting just above the largest ids of
    ``g1``.  Returns the union and the vertex and class maps for ``g2``.
    """
    if not g1.classes or not g2.classes:
        raise StructureError("both graphs of a disjoint union must have at least one class")
    b = GraphBuilder.from_graph(g1)
    vmap, cmap = b.add_copy(g2)
    return b.freeze(), vmap, cmap


def merge_class_into(g: CoverGraph, donor: int, assignment: Mapping[int, int], caps: Params | None = None) -> CoverGraph:
    """Dissolve class ``donor`` by moving each of its vertices to ``assignment[v]``."""
    b = GraphBuilder.from_graph(g)
    b.dissolve(donor, [assignment.get(v) for v in g.members.get(donor, ())], caps,
               expect=set(assignment))
    return b.freeze()


def delete_vertices(g: CoverGraph, ids: Iterable[int]) -> CoverGraph:
    b = GraphBuilder.from_graph(g)
    b.delete(ids)
    return b.freeze()


class GraphBuilder:
    """Mutable, single-owner graph used while a construction runs.

    A fresh id is always one above the largest id currently present, so a
    builder resumed from a frozen graph allocates exactly like the one that
    produced it.
    """

    def __init__(self):
        self.side: dict[int, Side] = {}
        self.cls: dict[int, int] = {}
        self.class_side: dict[int, Side] = {}
        self.members: dict[int, list[int]] = {}
        self.adj: dict[int, set[int]] = {}
        self.next_vertex = 0
        self.next_class = 0

    @classmethod
    def from_graph(cls, g: CoverGraph) -> GraphBuilder:
        b = cls()
        for c, s in g.classes:
            b.class_side[c] = s
            b.members[c] = list(g.members[c])
        for v, s, c in g.vertices:
            b.side[v] = s
            b.cls[v] = c
            b.adj[v] = set(g.adjacency[v])
        b.next_vertex = g.max_vertex_id() + 1
        b.next_class = g.max_class_id() + 1
        return b

    def add_class(self, side: Side) -> int:
        c = self.next_class
        self.next_class += 1
        self.class_side[c] = side
        self.members[c] = []
        return c

    def add_vertex(self, c: int) -> int:
        v = self.next_vertex
        self.next_vertex += 1
        self.side[v] = self.class_side[c]
        self.cls[v] = c
        self.members[c].append(v)
        self.adj[v] = set()
        return v

    def add_edge(self, u: int, w: int) -> None:
        if self.side[u] is self.side[w]:
            raise StructureError(f"edge ({u}, {w}) joins two {self.side[u].value}-side vertices")
        self.adj[u].add(w)
        self.adj[w].add(u)

    def size(self, c: int) -> int:
        return len(self.members[c])

    def classes_on(self, side: Side) -> list[int]:
        return [c for c, s in self.class_side.items() if s is side]

    def count(self, side: Side) -> tuple[int, int]:
        cs = self.classes_on(side)
        return len(cs), sum(len(self.members[c]) for c in cs)

    def add_copy(self, g: CoverGraph, skip_class: int | None = None) -> tuple[dict[int, int], dict[int, int]]:
        """Copy ``g`` in with fresh ids; ``skip_class`` gets no class of its own.

        Vertices of the skipped class are created unattached (class ``-1``)
        and must be placed with :meth:`place` before freezing.
        """
        cmap = {}
        for c, s in g.classes:
            if c != skip_class:
                cmap[c] = self.add_class(s)
        vmap = {}
        for v, s, c in g.vertices:
            nv = self.next_vertex
            self.next_vertex += 1
            self.side[nv] = s
            self.adj[nv] = set()
            if c == skip_class:
                self.cls[nv] = -1
            else:
                self.cls[nv] = cmap[c]
                self.members[cmap[c]].append(nv)
            vmap[v] = nv
        for a, b in g.edges:
            self.adj[vmap[a]].add(vmap[b])
            self.adj[vmap[b]].add(vmap[a])
        return vmap, cmap

    def place(self, v: int, target: int, caps: Params | None = None) -> None:
        if target not in self.class_side:
            raise StructureError(f"target class {target} does not exist")
        if self.class_side[target] is not self.side[v]:
            raise StructureError(f"vertex {v} cannot move into {self.class_side[target].value}-class {target}")
        if caps is not None and len(self.members[target]) >= caps.cap(self.side[v]):
            raise CapacityError(f"class {target} is already at its cap")
        self.cls[v] = target
        self.members[target].append(v)

    def dissolve(self, donor: int, targets: list, caps: Params | None = None, expect=None) -> None:
        """Move the vertices of ``donor`` (ascending id) to ``targets`` and drop it."""
        if donor not in self.members:
            raise StructureError(f"donor class {donor} does not exist")
        vs = list(self.members[donor])
        if expect is not None and set(expect) != set(vs):
            raise StructureError("assignment must cover exactly the donor's vertices")
        if len(targets) != len(vs) or any(t is None for t in targets):
            raise StructureError("assignment must cover exactly the donor's vertices")
        if donor in targets:
            raise StructureError("a donor class cannot receive its own vertices")
        side = self.class_side[donor]
        for t in targets:
            if t not in self.class_side or self.class_side[t] is not side:
                raise StructureError(f"target {t} is not a {side.value}-class")
        if caps is not None:
            load = {}
            for t in targets:
                load[t] = load.get(t, 0) + 1
            for t, extra in load.items():
                if len(self.members[t]) + extra > caps.cap(side):
                    raise CapacityError(f"class {t} would exceed k{side.value}={caps.cap(side)}")
        del self.members[donor]
        del self.class_side[donor]
        for v, t in zip(vs, targets):
            self.cls[v] = t
            self.members[t].append(v)
        self._reset_counters()

    def delete(self, ids: Iterable[int]) -> None:
        ids = set(ids)
        missing = ids - set(self.side)
        if missing:
            raise StructureError(f"cannot delete unknown vertex {min(missing)}")
        for c in {self.cls[v] for v in ids}:
            if all(v in ids for v in self.members[c]):
                raise StructureError(f"deleting would empty class {c}")
        for v in ids:
            for w in self.adj.pop(v):
                self.adj[w].discard(v)
            c = self.cls.pop(v)
            self.members[c].remove(v)
            del self.side[v]
        self._reset_counters()

    def _reset_counters(self) -> None:
        self.next_vertex = max(self.side, default=-1) + 1
        self.next_class = max(self.class_side, default=-1) + 1

    def swap_sides(self) -> None:
        self.side = {v: s.other for v, s in self.side.items()}
        self.class_side = {c: s.other for c, s in self.class_side.items()}

    def freeze(self) -> CoverGraph:
        loose = [v for v, c in self.cls.items() if c == -1]
        if loose:
            raise StructureError(f"vertex {loose[0]} was never placed in a class")
        verts = tuple(sorted((v, self.side[v], self.cls[v]) for v in self.side))
        clss = tuple(sorted(self.class_side.items()))
        edges = frozenset((v, w) for v, ns in self.adj.items() if self.side[v] is Side.A for w in ns)
        return CoverGraph(verts, clss, edges)
