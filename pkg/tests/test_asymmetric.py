import itertools

import pytest

from itcover.asymmetric import (BlockPartition, PairedGraph, assemble_sharp_asymmetric, blocks_have_no_it,
                                check_pair_condition, complete_union, construct_blocks, derived_graph, j_gadget,
                                multi_gadget, naive_blocks, no_it_block_partition, random_paired_cover,
                                search_blocks, uncovered_sign_vectors)
from itcover.graph import PartitionedGraph, Side, StructureError
from itcover.solver import Found, NoIT, find_it

from conftest import brute_force_has_it, make_graph


def kmm_edges(m, offset=0):
    return {(offset + r, offset + m + s) for r in range(m) for s in range(m)}


@pytest.mark.parametrize("D", [1, 2, 3, 4])
def test_derived_graph_is_complete_bipartite(D):
    J = j_gadget(D)
    H = derived_graph(J)
    m = D * D
    assert set(H.vertices) == set(range(2 * m))
    assert set(H.edges) == kmm_edges(m)
    assert all(len(lbl) == 1 for lbl in H.edges.values())
    assert {J.graph.degree(v) for v, _, _ in J.graph.vertices} == {D}
    assert check_pair_condition(J.graph, J.pairs)


def test_j_gadget_counts():
    J = j_gadget(1)
    assert J.graph.count(Side.A) == (2, 2) and len(J.pairs) == 1 and len(J.graph.edges) == 2
    assert derived_graph(J).edges == {(0, 1): frozenset({2})}
    J = j_gadget(2)
    assert J.graph.count(Side.A)[1] == 8 and len(J.pairs) == 4
    J = j_gadget(3)
    assert J.graph.count(Side.A)[1] == 18 and len(J.pairs) == 9


def test_multi_gadget_counts():
    assert multi_gadget(1, 1) == j_gadget(1)
    M = multi_gadget(2)
    assert M.graph.count(Side.A)[1] == 56
    assert len(M.pairs) == 28 and M.graph.count(Side.B)[1] == 56
    H = derived_graph(M)
    assert set(H.edges) == set().union(*(kmm_edges(4, 8 * c) for c in range(7)))
    H = derived_graph(multi_gadget(1, 3))
    assert set(H.edges) == {(0, 1), (2, 3), (4, 5)}


def test_shared_neighbourhood_labels_merge():
    # two pairs whose x and y sides see the same A-vertices
    g = make_graph([(Side.A, 1), (Side.A, 1), (Side.B, 2), (Side.B, 2)], [(0, 2), (1, 3), (0, 4), (1, 5)])
    H = derived_graph(PairedGraph(g, ((2, 3), (4, 5))))
    assert H.edges == {(0, 1): frozenset({2, 3})}


def test_pair_condition():
    g = make_graph([(Side.A, 1), (Side.B, 2)], [(0, 1), (0, 2)])
    assert not check_pair_condition(g, [(1, 2)])
    assert check_pair_condition(g, [])
    with pytest.raises(StructureError):
        derived_graph(PairedGraph(g, ((1, 2),)))
    h = make_graph([(Side.A, 1), (Side.B, 3)], [])
    with pytest.raises(StructureError):
        check_pair_condition(h, [(1, 2)])


def test_block_partition_m1():
    bp = no_it_block_partition(1)
    assert bp.blocks == ((0,), (1,))
    assert search_blocks(1) == bp


def brute_blocks_no_it(m, bp):
    edges = set(complete_union(m))
    leaves = 0
    for pick in itertools.product(*bp.blocks):
        leaves += 1
        if all((min(u, w), max(u, w)) not in edges for u, w in itertools.combinations(pick, 2)):
            return False, leaves
    return True, leaves


def test_block_partition_m2_search_is_exhaustively_no_it():
    bp = no_it_block_partition(2, strategy="search")
    assert len(bp.blocks) == 4 and {len(b) for b in bp.blocks} == {3}
    ok, leaves = brute_blocks_no_it(2, bp)
    assert ok and leaves == 81
    assert uncovered_sign_vectors(2, bp) == 0


def test_naive_layout_is_rejected():
    bp = naive_blocks(2)
    assert not blocks_have_no_it(2, bp)
    assert not brute_blocks_no_it(2, bp)[0]
    assert uncovered_sign_vectors(2, bp) > 0


@pytest.mark.parametrize("m", [1, 2, 3, 4, 9])
def test_construction_blocks(m):
    bp = construct_blocks(m)
    assert len(bp.blocks) == 2 * m and {len(b) for b in bp.blocks} == {2 * m - 1}
    assert sorted(v for b in bp.blocks for v in b) == list(range(2 * m * (2 * m - 1)))
    assert uncovered_sign_vectors(m, bp) == 0
    if m <= 4:
        assert blocks_have_no_it(m, bp)


def test_sign_vector_oracle_matches_solver():
    import random
    rng = random.Random(3)
    for _ in range(30):
        verts = list(range(12))
        rng.shuffle(verts)
        bp = BlockPartition(tuple(tuple(sorted(verts[3 * k:3 * k + 3])) for k in range(4)))
        assert (uncovered_sign_vectors(2, bp) == 0) == blocks_have_no_it(2, bp) == brute_blocks_no_it(2, bp)[0]


def test_assemble_d1():
    h, bp = assemble_sharp_asymmetric(1)
    g = h.graph
    assert bp.blocks == ((0,), (1,))
    assert [len(g.members[c]) for c in g.classes_on(Side.A)] == [1, 1]
    out = find_it(g)
    assert isinstance(out, NoIT) and not brute_force_has_it(g)
    assert isinstance(find_it(derived_graph(multi_gadget(1)).partitioned(bp)), NoIT)


def test_assemble_d2_audit():
    h, bp = assemble_sharp_asymmetric(2)
    g = h.graph
    assert [len(g.members[c]) for c in g.classes_on(Side.A)] == [7] * 8
    assert len(h.pairs) == 28
    assert max(g.degree(v) for v, _, _ in g.vertices) <= 2
    assert check_pair_condition(g, h.pairs)
    assert isinstance(find_it(derived_graph(multi_gadget(2)).partitioned(bp)), NoIT)


def test_assemble_rejects_bad_blocks():
    with pytest.raises(StructureError):
        assemble_sharp_asymmetric(1, BlockPartition(((0, 1),)))
    with pytest.raises(StructureError):
        BlockPartition(((0, 1), (1, 2)))


def test_prop_random_paired_covers_have_it():
    import random
    rng = random.Random(17)
    for seed in range(120):
        D = 1 + seed % 2
        h = random_paired_cover(D, rng.randint(1, 3), rng.randint(1, 6), rng.uniform(0.2, 1.0), seed)
        g = h.graph
        assert {len(g.members[c]) for c in g.classes_on(Side.A)} == {2 * D * D}
        assert max((g.degree(v) for v, _, _ in g.vertices), default=0) <= D
        assert check_pair_condition(g, h.pairs)
        out = find_it(g)
        assert isinstance(out, Found), seed
