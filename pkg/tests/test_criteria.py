import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from itcover.criteria import (ConditionError, NormalizationTrace, normalize, satisfies_normal_form, sufficient,
                              surplus)
from itcover.graph import Params

ints = st.integers(1, 40)
params = st.builds(Params, ints, ints, ints, ints)


def rational_sufficient(p):
    return Fraction(p.DB, p.kA) + Fraction(p.DA, p.kB) <= 1


def test_sufficient_examples():
    assert sufficient(Params(6, 6, 3, 3))
    assert not sufficient(Params(5, 6, 3, 3))
    assert surplus(Params(5, 6, 3, 3)) == 3
    assert surplus(Params(7, 5, 3, 3)) == 1
    assert not sufficient(Params(1, 1, 1, 1))
    assert sufficient(Params(4, 6, 2, 2))
    with pytest.raises(ConditionError):
        surplus(Params(4, 6, 2, 2))


def test_grid_agrees_with_rationals():
    for t in itertools.product(range(1, 9), repeat=4):
        p = Params(*t)
        assert sufficient(p) == rational_sufficient(p), t


@given(params)
def test_sufficient_xor_surplus(p):
    if sufficient(p):
        with pytest.raises(ConditionError):
            surplus(p)
    else:
        assert surplus(p) >= 1


@pytest.mark.parametrize("before, after, trace", [
    ((5, 6, 3, 3), (7, 5, 3, 3), NormalizationTrace(swapped=True, kA_raised_from=6)),
    ((3, 3, 2, 2), (5, 3, 2, 2), NormalizationTrace(kA_raised_from=3)),
    ((5, 5, 3, 3), (7, 5, 3, 3), NormalizationTrace(kA_raised_from=5)),
    ((7, 5, 3, 3), (7, 5, 3, 3), NormalizationTrace()),
    ((4, 3, 2, 2), (5, 3, 2, 2), NormalizationTrace(kA_raised_from=4)),
    ((2, 1, 1, 1), (2, 1, 1, 1), NormalizationTrace()),
    ((1, 3, 2, 2), (2, 3, 2, 1), NormalizationTrace(DB_clamped_from=2, kA_raised_from=1)),
    ((1, 1, 1, 1), (2, 1, 1, 1), NormalizationTrace(kA_raised_from=1)),
])
def test_normalize_examples(before, after, trace):
    q, t = normalize(Params(*before))
    assert q.as_tuple() == after
    assert t == trace


def test_normalize_rejects_sufficient():
    with pytest.raises(ConditionError):
        normalize(Params(6, 6, 3, 3))


@given(params)
def test_normalize_properties(p):
    if sufficient(p):
        return
    q, t = normalize(p)
    assert satisfies_normal_form(q)
    assert q.DA <= q.kB <= 2 * q.DA - 1 and q.kA >= 2 * q.DB
    # idempotent
    q2, t2 = normalize(q)
    assert q2 == q and t2.identity
    # undoing: the A-side cap after the swap never shrinks
    orig = (p.kB, p.kA) if t.swapped else (p.kA, p.kB)
    assert q.kB == orig[1]
    assert q.kA >= orig[0]
    # clamps never raise degrees
    DA, DB = (p.DB, p.DA) if t.swapped else (p.DA, p.DB)
    assert q.DA <= DA and q.DB <= DB


@given(params)
def test_normal_form_kA_is_maximal_when_defined(p):
    if sufficient(p):
        return
    q, _ = normalize(p)
    if q.kB > q.DA:
        assert not sufficient(q)
        assert sufficient(Params(q.kA + 1, q.kB, q.DA, q.DB))
