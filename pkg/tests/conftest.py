import itertools
import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from itcover.graph import CoverGraph, Side

settings.register_profile("repo", derandomize=True, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


def brute_force_has_it(g) -> bool:
    """Cross-product enumeration, kept separate from the package's own helpers."""
    cs = sorted(g.members)
    for pick in itertools.product(*(g.members[c] for c in cs)):
        if all(w not in g.adjacency[v] for v, w in itertools.combinations(pick, 2)):
            return True
    return False


def make_graph(class_sizes, edges):
    """``class_sizes``: list of (side, size); vertex ids are assigned class by class."""
    verts, classes, v = [], [], 0
    for c, (side, size) in enumerate(class_sizes):
        classes.append((c, side))
        for _ in range(size):
            verts.append((v, side, c))
            v += 1
    return CoverGraph.from_parts(verts, classes, edges)


@st.composite
def small_covers(draw, max_classes=5, max_size=3):
    n = draw(st.integers(1, max_classes))
    shape = [(draw(st.sampled_from([Side.A, Side.B])), draw(st.integers(1, max_size))) for _ in range(n)]
    g0 = make_graph(shape, [])
    A, B = g0.vertices_on(Side.A), g0.vertices_on(Side.B)
    pairs = [(a, b) for a in A for b in B]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return make_graph(shape, chosen)


def random_small_cover(rng: random.Random, max_classes=5, max_size=3, max_vertices=14):
    while True:
        n = rng.randint(2, max_classes)
        shape = [(rng.choice([Side.A, Side.B]), rng.randint(1, max_size)) for _ in range(n)]
        if sum(s for _, s in shape) <= max_vertices:
            break
    g0 = make_graph(shape, [])
    A, B = g0.vertices_on(Side.A), g0.vertices_on(Side.B)
    p = rng.uniform(0.3, 0.9)
    return make_graph(shape, [(a, b) for a in A for b in B if rng.random() < p])


@pytest.fixture
def k11_pair():
    from itcover.construct import gadget
    return gadget(1, 1), gadget(1, 1)
