"""Covers with B-classes of size two: the derived-graph construction.

A :class:`PairedGraph` has every B-class equal to a designated pair
``(x, y)`` and no A-vertex adjacent to both members of a pair.  Its derived
graph lives on the A-side and joins every neighbour of ``x`` to every
neighbour of ``y``.  If the derived graph has no IT with respect to some
partition of the A-side into blocks, the paired graph with those blocks as
A-classes has no IT either: an IT would pick two A-vertices joined by a
derived edge, and the pair that created that edge could then only be hit
by a neighbour of one of them.

For ``2m-1`` disjoint copies of ``K_{m,m}`` the blocks come from a binary
decision tree with ``2m`` leaves whose ``2m-1`` internal nodes are the copies,
one each.  Leaf blocks draw only from the copy sides on their root path.
Given a would-be IT, walk from the root always towards the side of the
current copy that the IT avoids; the leaf reached is a block the IT cannot
meet, so no IT exists.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass

import networkx as nx

from .graph import CoverGraph, PartitionedGraph, Side, StructureError
from .solver import Found, NoIT, find_it


@dataclass(frozen=True)
class PairedGraph:
    graph: CoverGraph
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        g = self.graph
        seen = set()
        for x, y in self.pairs:
            c = g.class_of.get(x)
            if c is None or g.class_of.get(y) != c or g.class_side[c] is not Side.B or len(g.members[c]) != 2:
                raise StructureError(f"({x}, {y}) is not a B-class of size 2")
            seen.add(c)
        if seen != set(g.classes_on(Side.B)):
            raise StructureError("every B-class must be a designated pair")


@dataclass(frozen=True)
class BlockPartition:
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        flat = [v for blk in self.blocks for v in blk]
        if len(flat) != len(set(flat)):
            raise StructureError("blocks overlap")
        if len({len(blk) for blk in self.blocks}) > 1:
            raise StructureError("blocks must have equal size")


@dataclass(frozen=True)
class DerivedGraph:
    vertices: tuple[int, ...]
    edges: dict[tuple[int, int], frozenset[int]]

    def partitioned(self, blocks: BlockPartition) -> PartitionedGraph:
        return PartitionedGraph.from_edges(dict(enumerate(blocks.blocks)), self.edges)


def check_pair_condition(g: CoverGraph, pairs) -> bool:
    for x, y in pairs:
        c = g.class_of.get(x)
        if c is None or g.class_of.get(y) != c or len(g.members[c]) != 2:
            raise StructureError(f"({x}, {y}) is not a class of size 2")
        if g.adjacency[x] & g.adjacency[y]:
            return False
    return True


def multi_gadget(D: int, copies: int | None = None) -> PairedGraph:
    """Disjoint copies of the gadget whose derived graph is ``K_{D^2, D^2}``.

    Copy ``c`` owns A-vertices ``c*2m .. c*2m + 2m-1`` (``m = D^2``): first
    the groups ``A_1..A_D`` of size ``D``, then ``C_1..C_D``.  Its pair
    ``(i, j)`` joins ``x`` to all of ``A_i`` and ``y`` to all of ``C_j``.  B-vertex
    and class ids follow all A ids, copy-major.  Default ``copies = 2m-1``.
    """
    if D < 1:
        raise ValueError("D must be positive")
    m = D * D
    copies = 2 * m - 1 if copies is None else copies
    if copies < 1:
        raise ValueError("need at least one copy")
    verts, classes, edges, pairs = [], [], [], []
    for c in range(copies):
        for g in range(2 * D):
            cid = c * 2 * D + g
            classes.append((cid, Side.A))
            for r in range(D):
                verts.append((c * 2 * m + g * D + r, Side.A, cid))
    bbase, cbase = copies * 2 * m, copies * 2 * D
    for c in range(copies):
        for i in range(D):
            for j in range(D):
                k = c * m + i * D + j
                x, y = bbase + 2 * k, bbase + 2 * k + 1
                classes.append((cbase + k, Side.B))
                verts += [(x, Side.B, cbase + k), (y, Side.B, cbase + k)]
                pairs.append((x, y))
                edges += [(c * 2 * m + i * D + r, x) for r in range(D)]
                edges += [(c * 2 * m + m + j * D + r, y) for r in range(D)]
    return PairedGraph(CoverGraph.from_parts(verts, classes, edges), tuple(pairs))


def j_gadget(D: int) -> PairedGraph:
    return multi_gadget(D, 1)


def derived_graph(J: PairedGraph) -> DerivedGraph:
    g = J.graph
    edges: dict[tuple[int, int], set[int]] = {}
    for x, y in J.pairs:
        nx_, ny_ = g.adjacency[x], g.adjacency[y]
        if nx_ & ny_:
            raise StructureError(f"pair ({x}, {y}) has a common neighbour")
        label = g.class_of[x]
        for u in nx_:
            for w in ny_:
                edges.setdefault((min(u, w), max(u, w)), set()).add(label)
    return DerivedGraph(tuple(g.vertices_on(Side.A)),
                        {e: frozenset(s) for e, s in sorted(edges.items())})


# Block partitions of 2m-1 disjoint copies of K_{m,m}

def complete_union(m: int, copies: int | None = None) -> list[tuple[int, int]]:
    """Edges of disjoint ``K_{m,m}`` copies on the ids used by :func:`multi_gadget`."""
    copies = 2 * m - 1 if copies is None else copies
    return [(c * 2 * m + r, c * 2 * m + m + s) for c in range(copies) for r in range(m) for s in range(m)]


def _tree_leaves(m: int) -> list[list[tuple[int, int]]]:
    """Root paths ``[(copy, side), ...]`` of a balanced tree with ``2m`` leaves."""
    counter = itertools.count()
    frontier = [(2 * m, [])]
    leaves: list = []
    # breadth-first so copies are numbered level by level
    while frontier:
        nxt = []
        for n, path in frontier:
            if n == 1:
                leaves.append(path)
                continue
            node = next(counter)
            nxt.append(((n + 1) // 2, path + [(node, 0)]))
            nxt.append((n // 2, path + [(node, 1)]))
        frontier = nxt
    return sorted(leaves)


def construct_blocks(m: int) -> BlockPartition:
    """Decision-tree blocks for ``2m-1`` copies of ``K_{m,m}`` (see module docstring)."""
    if m < 1:
        raise ValueError("m must be positive")
    leaves = _tree_leaves(m)
    flow = nx.DiGraph()
    for c in range(2 * m - 1):
        for s in (0, 1):
            flow.add_edge("src", ("side", c, s), capacity=m)
    for k, path in enumerate(leaves):
        for c, s in path:
            flow.add_edge(("side", c, s), ("leaf", k), capacity=m)
        flow.add_edge(("leaf", k), "sink", capacity=2 * m - 1)
    value, plan = nx.maximum_flow(flow, "src", "sink")
    if value != 2 * m * (2 * m - 1):
        raise RuntimeError(f"decision-tree layout is infeasible for m={m}")
    pools = {(c, s): iter(range(c * 2 * m + s * m, c * 2 * m + s * m + m)) for c in range(2 * m - 1) for s in (0, 1)}
    blocks = []
    for k, path in enumerate(leaves):
        blk = []
        for c, s in sorted(path):
            blk.extend(next(pools[c, s]) for _ in range(plan[("side", c, s)][("leaf", k)]))
        blocks.append(tuple(sorted(blk)))
    return BlockPartition(tuple(sorted(blocks)))


def naive_blocks(m: int) -> BlockPartition:
    """Consecutive windows of the canonical vertex order; a negative control."""
    n = 2 * m - 1
    return BlockPartition(tuple(tuple(range(k * n, k * n + n)) for k in range(2 * m)))


def uncovered_sign_vectors(m: int, blocks: BlockPartition) -> int:
    """Number of side choices that leave every block hit; 0 iff there is no IT.

    For disjoint complete bipartite graphs an independent set meets each
    copy inside one side.  Choosing the side avoided in each copy, an IT
    exists iff some choice leaves a vertex outside the avoided sides in
    every block.
    """
    n = 2 * m - 1
    patterns = []
    for blk in blocks.blocks:
        need: dict[int, int] = {}
        ok = True
        for v in blk:
            c, s = divmod(v, 2 * m)
            s = 0 if s < m else 1
            if need.setdefault(c, s) != s:
                ok = False
                break
        if ok:
            patterns.append(need)
    count = 0
    for sigma in itertools.product((0, 1), repeat=n):
        if not any(all(sigma[c] == s for c, s in need.items()) for need in patterns):
            count += 1
    return count


def blocks_have_no_it(m: int, blocks: BlockPartition, budget: int | None = None) -> bool:
    pg = PartitionedGraph.from_edges(dict(enumerate(blocks.blocks)), complete_union(m))
    out = find_it(pg, budget)
    if not isinstance(out, (Found, NoIT)):
        raise RuntimeError("solver budget exhausted while checking blocks")
    return isinstance(out, NoIT)


def _canonical_partitions(items: list[int], size: int):
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for others in itertools.combinations(rest, size - 1):
        left = [v for v in rest if v not in others]
        for tail in _canonical_partitions(left, size):
            yield [(head,) + others] + tail


class SearchBudgetError(RuntimeError):
    pass


def search_blocks(m: int, seed: int = 0, time_budget: float = 30.0) -> BlockPartition:
    """Find no-IT blocks by search; exhaustive for ``m <= 2``, randomized above.

    The exhaustive mode returns the first partition, in canonical order,
    that the solver proves IT-free.  The randomized mode hill-climbs on
    :func:`uncovered_sign_vectors` with swaps between blocks and confirms its
    answer with the solver.
    """
    n = 2 * m - 1
    verts = list(range(2 * m * n))
    if m <= 2:
        for cand in _canonical_partitions(verts, n):
            bp = BlockPartition(tuple(cand))
            if blocks_have_no_it(m, bp):
                return bp
        raise SearchBudgetError("no partition found")
    rng = random.Random(seed)
    deadline = time.monotonic() + time_budget
    while time.monotonic() < deadline:
        rng.shuffle(verts)
        blocks = [verts[k * n:(k + 1) * n] for k in range(2 * m)]
        score = uncovered_sign_vectors(m, BlockPartition(tuple(map(tuple, blocks))))
        stale = 0
        while score and stale < 2000 and time.monotonic() < deadline:
            i, j = rng.sample(range(2 * m), 2)
            a, b = rng.randrange(n), rng.randrange(n)
            blocks[i][a], blocks[j][b] = blocks[j][b], blocks[i][a]
            new = uncovered_sign_vectors(m, BlockPartition(tuple(map(tuple, blocks))))
            if new <= score:
                stale = stale + 1 if new == score else 0
                score = new
            else:
                blocks[i][a], blocks[j][b] = blocks[j][b], blocks[i][a]
                stale += 1
        if score == 0:
            bp = BlockPartition(tuple(sorted(tuple(sorted(b)) for b in blocks)))
            if blocks_have_no_it(m, bp):
                return bp
    raise SearchBudgetError("no partition found within budget")


def no_it_block_partition(m: int, strategy: str = "construction", seed: int = 0,
                          time_budget: float = 30.0) -> BlockPartition:
    if strategy == "construction":
        return construct_blocks(m)
    if strategy == "search":
        return search_blocks(m, seed, time_budget)
    raise ValueError(f"unknown strategy {strategy!r}")


def assemble_sharp_asymmetric(D: int, blocks: BlockPartition | None = None,
                              strategy: str = "construction", **search_kw) -> tuple[PairedGraph, BlockPartition]:
    """Max-degree-``D`` paired cover with A-classes of size ``2D^2-1`` and no IT.

    The A-classes of :func:`multi_gadget` are replaced by ``blocks`` (class
    ids ``0..2m-1``, in the order given); pair classes follow.
    """
    m = D * D
    if blocks is None:
        blocks = no_it_block_partition(m, strategy, **search_kw)
    base = multi_gadget(D)
    g = base.graph
    a_side = set(g.vertices_on(Side.A))
    flat = [v for blk in blocks.blocks for v in blk]
    if set(flat) != a_side or len(flat) != len(a_side):
        raise StructureError("blocks must partition the A-side")
    if len(blocks.blocks) != 2 * m or any(len(blk) != 2 * m - 1 for blk in blocks.blocks):
        raise StructureError(f"need {2 * m} blocks of size {2 * m - 1}")
    block_of = {v: k for k, blk in enumerate(blocks.blocks) for v in blk}
    pair_ids = {}
    for x, y in base.pairs:
        pair_ids[g.class_of[x]] = len(blocks.blocks) + len(pair_ids)
    verts = [(v, s, block_of[v] if s is Side.A else pair_ids[c]) for v, s, c in g.vertices]
    classes = [(k, Side.A) for k in range(len(blocks.blocks))] + [(k, Side.B) for k in sorted(pair_ids.values())]
    h = CoverGraph.from_parts(verts, classes, g.edges)
    return PairedGraph(h, base.pairs), blocks


def random_paired_cover(D: int, a: int, b: int, edge_prob: float, seed: int) -> PairedGraph:
    """Random cover with A-classes of size ``2D^2``, pairs, max degree ``D`` and the pair condition."""
    from .graph import Params
    from .solver import random_cover

    g = random_cover(Params(2 * D * D, 2, D, D), a, b, edge_prob, seed)
    rng = random.Random(seed + 7919)
    edges = set(g.edges)
    pairs = tuple(tuple(g.members[c]) for c in g.classes_on(Side.B))
    for x, y in pairs:
        for u in sorted(g.adjacency[x] & g.adjacency[y]):
            edges.discard((u, rng.choice((x, y))))
    h = CoverGraph(g.vertices, g.classes, frozenset(edges))
    return PairedGraph(h, pairs)
