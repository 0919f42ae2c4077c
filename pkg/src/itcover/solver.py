"""Exact independent-transversal search and domination witnesses."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .graph import CoverGraph, Params, Side


@dataclass(frozen=True)
class ITSolution:
    choice: dict[int, int]


@dataclass(frozen=True)
class Found:
    solution: ITSolution
    nodes: int


@dataclass(frozen=True)
class NoIT:
    nodes: int


@dataclass(frozen=True)
class BudgetExceeded:
    nodes: int


SolveOutcome = Found | NoIT | BudgetExceeded


class _OutOfBudget(Exception):
    pass


def find_it(g, budget: int | None = None) -> SolveOutcome:
    """Complete backtracking search for an independent transversal.

    ``g`` is anything exposing ``members`` (class id -> vertex ids) and
    ``adjacency`` (vertex id -> neighbours), e.g. a :class:`CoverGraph` or a
    :class:`~itcover.graph.PartitionedGraph`.

    At every node the unassigned class with the fewest surviving candidates
    is expanded (ties broken by class id), candidates are tried in vertex-id
    order and the neighbours of the pick are eliminated everywhere else.
    ``nodes`` counts vertex picks.  Exhausting ``budget`` picks returns
    :class:`BudgetExceeded`, which says nothing about existence.
    """
    class_ids = sorted(g.members)
    order = sorted({v for vs in g.members.values() for v in vs})
    index = {v: i for i, v in enumerate(order)}
    nbr = [0] * len(order)
    for v in order:
        m = 0
        for w in g.adjacency[v]:
            if w in index:
                m |= 1 << index[w]
        nbr[index[v]] = m
    masks = []
    for c in class_ids:
        m = 0
        for v in g.members[c]:
            m |= 1 << index[v]
        masks.append(m)
    if any(m == 0 for m in masks):
        return NoIT(0)

    nodes = 0
    picks: list[int] = [-1] * len(class_ids)

    def search(live: list[tuple[int, int]]) -> bool:
        nonlocal nodes
        if not live:
            return True
        # live holds (candidate mask, class position), kept sorted by position
        best = min(range(len(live)), key=lambda i: (live[i][0].bit_count(), live[i][1]))
        cand, pos = live[best]
        rest = live[:best] + live[best + 1:]
        while cand:
            low = cand & -cand
            cand ^= low
            i = low.bit_length() - 1
            nodes += 1
            if budget is not None and nodes > budget:
                raise _OutOfBudget
            kill = nbr[i]
            nxt = []
            for m, p in rest:
                m &= ~kill
                if not m:
                    break
                nxt.append((m, p))
            else:
                picks[pos] = i
                if search(nxt):
                    return True
        return False

    try:
        ok = search(list(zip(masks, range(len(class_ids)))))
    except _OutOfBudget:
        return BudgetExceeded(budget)
    if not ok:
        return NoIT(nodes)
    return Found(ITSolution({c: order[picks[k]] for k, c in enumerate(class_ids)}), nodes)


def has_it(g, budget: int | None = None) -> bool:
    out = find_it(g, budget)
    if isinstance(out, BudgetExceeded):
        raise RuntimeError(f"search budget of {budget} nodes exhausted")
    return isinstance(out, Found)


@dataclass(frozen=True)
class CheckReport:
    ok: bool
    reasons: tuple[str, ...] = ()
    note: str = ""

    def __bool__(self) -> bool:
        return self.ok


def verify_it(g, s: ITSolution) -> CheckReport:
    reasons = []
    choice = s.choice
    for c in sorted(g.members):
        if c not in choice:
            reasons.append(f"uncovered class {c}")
        elif choice[c] not in g.members[c]:
            reasons.append(f"vertex {choice[c]} is not in class {c}")
    extra = sorted(set(choice) - set(g.members))
    reasons.extend(f"unknown class {c}" for c in extra)
    picked = sorted(set(choice.values()))
    chosen = set(picked)
    for v in picked:
        for w in g.adjacency.get(v, ()):
            if w in chosen and v < w:
                reasons.append(f"adjacent pair ({v}, {w})")
    return CheckReport(not reasons, tuple(reasons))


def naive_has_it(g) -> bool:
    """Full cross-product enumeration; an oracle for tiny instances only."""
    class_ids = sorted(g.members)
    for pick in itertools.product(*(g.members[c] for c in class_ids)):
        if all(w not in g.adjacency[v] for v, w in itertools.combinations(pick, 2)):
            return True
    return False


# Domination witnesses

@dataclass(frozen=True)
class DominationWitness:
    S: frozenset[int]
    Z: frozenset[tuple[int, int]]


class SearchSpaceError(ValueError):
    pass


NOT_A_CERTIFICATE = "a domination witness does not by itself certify that no independent transversal exists"


def verify_domination_witness(g: CoverGraph, w: DominationWitness) -> CheckReport:
    reasons = []
    unknown = sorted(set(w.S) - set(g.members))
    if unknown:
        reasons.append(f"unknown class {unknown[0]}")
        return CheckReport(False, tuple(reasons), NOT_A_CERTIFICATE)
    inside = {v for c in w.S for v in g.members[c]}
    endpoints = set()
    for e in sorted(w.Z):
        u, v = e
        if v not in g.adjacency.get(u, ()):
            reasons.append(f"({u}, {v}) is not an edge")
        elif u not in inside or v not in inside:
            reasons.append(f"edge ({u}, {v}) leaves the witness classes")
        endpoints.update(e)
    if len(w.Z) > len(w.S) - 1:
        reasons.append(f"|Z| = {len(w.Z)} exceeds |S| - 1 = {len(w.S) - 1}")
    for v in sorted(inside):
        if not (g.adjacency[v] & endpoints):
            reasons.append(f"undominated vertex {v}")
            break
    return CheckReport(not reasons, tuple(reasons), NOT_A_CERTIFICATE)


def find_domination_witness(g: CoverGraph, max_s: int | None = None,
                            max_classes: int = 6, max_vertices: int = 14) -> DominationWitness | None:
    """Brute-force the smallest witness: class subsets by size, then edge subsets.

    Exponential by design; refuses graphs beyond ``max_classes`` classes or
    ``max_vertices`` vertices.
    """
    classes = sorted(g.members)
    if len(classes) > max_classes or len(g.vertices) > max_vertices:
        raise SearchSpaceError(
            f"search space too large: {len(classes)} classes, {len(g.vertices)} vertices "
            f"(limits {max_classes}, {max_vertices})")
    top = len(classes) if max_s is None else min(max_s, len(classes))
    for size in range(1, top + 1):
        for S in itertools.combinations(classes, size):
            inside = {v for c in S for v in g.members[c]}
            # every dominated vertex needs a neighbour, so isolated members rule S out
            if any(not g.adjacency[v] for v in inside):
                continue
            local = sorted(e for e in g.edges if e[0] in inside and e[1] in inside)
            for nz in range(0, size):
                for Z in itertools.combinations(local, nz):
                    ends = {x for e in Z for x in e}
                    if all(g.adjacency[v] & ends for v in inside):
                        return DominationWitness(frozenset(S), frozenset(Z))
    return None


def random_cover(p: Params, a: int, b: int, edge_prob: float, seed: int) -> CoverGraph:
    """Random full cover: ``a`` A-classes of size kA, ``b`` B-classes of size kB.

    Every A-B pair is an edge with probability ``edge_prob``; then, scanning
    the accepted edges in a seeded random order, an edge is dropped whenever
    one of its endpoints is still above its degree cap.  Scanning a uniform
    permutation this way removes a uniformly random offending edge at each
    step, since an edge never becomes offending again once it is not.
    """
    if a < 1 or b < 1:
        raise ValueError("need at least one class per side")
    rng = random.Random(seed)
    verts, classes = [], []
    v = 0
    for c in range(a + b):
        side = Side.A if c < a else Side.B
        classes.append((c, side))
        for _ in range(p.cap(side)):
            verts.append((v, side, c))
            v += 1
    A = [x for x, s, _ in verts if s is Side.A]
    B = [x for x, s, _ in verts if s is Side.B]
    edges = [(x, y) for x in A for y in B if rng.random() < edge_prob]
    rng.shuffle(edges)
    deg = dict.fromkeys(A + B, 0)
    for x, y in edges:
        deg[x] += 1
        deg[y] += 1
    kept = []
    for x, y in edges:
        if deg[x] > p.DA or deg[y] > p.DB:
            deg[x] -= 1
            deg[y] -= 1
        else:
            kept.append((x, y))
    return CoverGraph.from_parts(verts, classes, kept)
