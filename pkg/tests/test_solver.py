import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from itcover.construct import build_sharp, complete_bipartite
from itcover.criteria import sufficient
from itcover.graph import CoverGraph, Params, Side, validate
from itcover.solver import (BudgetExceeded, DominationWitness, Found, ITSolution, NoIT, SearchSpaceError,
                            find_domination_witness, find_it, random_cover, verify_domination_witness,
                            verify_it)

from conftest import brute_force_has_it, make_graph, random_small_cover, small_covers

# one A-class {0, 1}, B-classes {2} and {3}; edges 0-2 and 1-3
FULL_2111 = make_graph([(Side.A, 2), (Side.B, 1), (Side.B, 1)], [(0, 2), (1, 3)])


def test_single_edge_has_no_it():
    assert isinstance(find_it(complete_bipartite(1, 1)), NoIT)


def test_edgeless_picks_first_vertices():
    g = make_graph([(Side.A, 3), (Side.B, 2), (Side.A, 1)], [])
    out = find_it(g)
    assert isinstance(out, Found)
    assert out.solution.choice == {0: 0, 1: 3, 2: 5}


def test_full_2111_has_no_it():
    out = find_it(FULL_2111)
    assert isinstance(out, NoIT) and out.nodes == 2


def test_verify_it_reasons():
    g = complete_bipartite(2, 2)
    bad = verify_it(g, ITSolution({0: 0, 1: 2}))
    assert not bad and bad.reasons == ("adjacent pair (0, 2)",)
    miss = verify_it(g, ITSolution({0: 0}))
    assert not miss and "uncovered class 1" in miss.reasons
    wrong = verify_it(g, ITSolution({0: 2, 1: 3}))
    assert not wrong and "vertex 2 is not in class 0" in wrong.reasons


@given(small_covers(max_classes=5, max_size=3))
@settings(max_examples=400)
def test_agrees_with_cross_product(g):
    out = find_it(g)
    assert isinstance(out, (Found, NoIT))
    assert isinstance(out, Found) == brute_force_has_it(g)
    if isinstance(out, Found):
        assert verify_it(g, out.solution)


@given(small_covers())
def test_deterministic(g):
    assert find_it(g) == find_it(g)


def test_budget_is_a_third_outcome():
    g, _ = build_sharp(Params(5, 3, 2, 2))
    full = find_it(g)
    assert isinstance(full, NoIT) and full.nodes > 5
    out = find_it(g, budget=5)
    assert isinstance(out, BudgetExceeded) and out.nodes == 5
    assert find_it(g, budget=full.nodes) == full


def test_sufficient_random_covers_have_it():
    rng = random.Random(20261014)
    count = 0
    while count < 300:
        D = rng.randint(1, 3)
        kA, kB = rng.randint(1, 6), rng.randint(1, 6)
        p = Params(kA, kB, rng.randint(1, D), rng.randint(1, D))
        if not sufficient(p):
            continue
        a = rng.randint(1, 6)
        b = rng.randint(1, 12 - a)
        g = random_cover(p, a, b, rng.uniform(0.2, 1.0), rng.randrange(10**6))
        assert validate(g, p).ok
        assert isinstance(find_it(g), Found), (p, a, b)
        count += 1


def test_random_cover_contract():
    p = Params(6, 6, 3, 3)
    g = random_cover(p, 5, 5, 0.7, 1)
    assert validate(g, p, require_full=True).full
    assert random_cover(p, 5, 5, 0.7, 1) == g
    assert not random_cover(p, 2, 2, 0.0, 3).edges
    with pytest.raises(ValueError):
        random_cover(p, 0, 2, 0.5, 0)


@given(st.integers(0, 10**6), st.floats(0, 1))
@settings(max_examples=50)
def test_random_cover_respects_degree_caps(seed, prob):
    p = Params(4, 3, 2, 3)
    assert validate(random_cover(p, 3, 2, prob, seed), p).ok


# witnesses

def test_witness_examples():
    w = find_domination_witness(complete_bipartite(1, 1))
    assert w == DominationWitness(frozenset({0, 1}), frozenset({(0, 1)}))
    w = find_domination_witness(FULL_2111)
    assert w.S == frozenset({0, 1, 2}) and w.Z == frozenset({(0, 2), (1, 3)})
    assert verify_domination_witness(FULL_2111, w)
    assert find_domination_witness(make_graph([(Side.A, 2), (Side.B, 2)], [])) is None


def test_witness_rejections():
    k22 = complete_bipartite(2, 2)
    big = verify_domination_witness(k22, DominationWitness(frozenset({0, 1}), frozenset({(0, 2), (1, 3)})))
    assert not big and any("exceeds" in r for r in big.reasons)
    iso = make_graph([(Side.A, 2), (Side.B, 1)], [(0, 2)])
    rep = verify_domination_witness(iso, DominationWitness(frozenset({0, 1}), frozenset({(0, 2)})))
    assert not rep and "undominated vertex 1" in rep.reasons
    assert rep.note


def test_witness_search_is_capped():
    with pytest.raises(SearchSpaceError):
        find_domination_witness(build_sharp(Params(5, 6, 3, 3))[0])


def test_witness_exists_for_every_random_no_it_instance():
    rng = random.Random(7)
    seen = 0
    while seen < 60:
        g = random_small_cover(rng)
        if brute_force_has_it(g):
            continue
        w = find_domination_witness(g)
        assert w is not None
        assert verify_domination_witness(g, w)
        seen += 1


def test_no_witness_when_observed_parameters_are_sufficient():
    rng = random.Random(11)
    checked = 0
    while checked < 100:
        g = random_small_cover(rng, max_classes=3)
        sizes = {s: min((len(g.members[c]) for c, t in g.classes if t is s), default=0) for s in Side}
        if not sizes[Side.A] or not sizes[Side.B]:
            continue
        degs = {s: max((g.degree(v) for v in g.vertices_on(s)), default=0) for s in Side}
        p = Params(sizes[Side.A], sizes[Side.B], max(1, degs[Side.A]), max(1, degs[Side.B]))
        if not sufficient(p):
            continue
        assert find_domination_witness(g) is None
        assert isinstance(find_it(g), Found)
        checked += 1
