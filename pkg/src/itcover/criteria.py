"""Exact arithmetic for the independent-transversal threshold.

Everything is done with cross-multiplied integers so the sharp boundary
``DB*kB + DA*kA == kA*kB`` is decided exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import CoverGraph, Params, Side


class ConditionError(ValueError):
    """Raised when an operation needs the threshold condition violated, but it holds."""


def sufficient(p: Params) -> bool:
    """True iff ``DB/kA + DA/kB <= 1``, i.e. every such cover has an IT."""
    return p.DB * p.kB + p.DA * p.kA <= p.kA * p.kB


def surplus(p: Params) -> int:
    t = p.kA * p.DA + p.kB * p.DB - p.kA * p.kB
    if t < 1:
        raise ConditionError(f"condition not violated for {p.as_tuple()}: surplus {t} < 1")
    return t


@dataclass(frozen=True)
class NormalizationTrace:
    swapped: bool = False
    DA_clamped_from: int | None = None
    DB_clamped_from: int | None = None
    kA_raised_from: int | None = None

    @property
    def identity(self) -> bool:
        return self == NormalizationTrace()


def normalize(p: Params) -> tuple[Params, NormalizationTrace]:
    """Reduce ``p`` to parameters with ``DA <= kB <= 2DA-1`` and ``kA >= 2DB``.

    A full no-IT graph for the returned parameters turns into one for ``p``
    by deleting ``kA' - kA`` vertices from every A-class (``kA`` taken after
    the swap) and then exchanging the side labels if ``swapped`` is set.
    Degree clamps need no undoing.

    When ``kB == DA`` after clamping, the violated condition holds for every
    ``kA``; we then take the smallest admissible value ``max(kA, 2DB)``.
    """
    if sufficient(p):
        raise ConditionError(f"condition not violated for {p.as_tuple()}")
    kA, kB, DA, DB = p.as_tuple()
    da_from = db_from = None
    if DA > kB:
        da_from, DA = DA, kB
    if DB > kA:
        db_from, DB = DB, kA
    swapped = kB >= 2 * DA
    if swapped:
        kA, kB, DA, DB = kB, kA, DB, DA
        da_from, db_from = db_from, da_from
    if kB > DA:
        # largest kA with DB*kB > kA*(kB - DA)
        new_kA = -(-DB * kB // (kB - DA)) - 1
    else:
        new_kA = max(kA, 2 * DB)
    trace = NormalizationTrace(swapped, da_from, db_from, kA if new_kA != kA else None)
    return Params(new_kA, kB, DA, DB), trace


def satisfies_normal_form(p: Params) -> bool:
    return (not sufficient(p)) and p.DA <= p.kB <= 2 * p.DA - 1 and p.kA >= 2 * p.DB


def domination_counts(g: CoverGraph, w) -> tuple[int, int, int, int, int, int]:
    """``(a, b, min A-class size, min B-class size, max A-degree, max B-degree)``.

    Class sizes are taken over the classes of the witness, degrees over the
    whole graph; empty sides report ``0``.
    """
    a_sizes = [len(g.members[c]) for c in w.S if g.class_side[c] is Side.A]
    b_sizes = [len(g.members[c]) for c in w.S if g.class_side[c] is Side.B]
    deg_a = max((g.degree(v) for v in g.vertices_on(Side.A)), default=0)
    deg_b = max((g.degree(v) for v in g.vertices_on(Side.B)), default=0)
    return len(a_sizes), len(b_sizes), min(a_sizes, default=0), min(b_sizes, default=0), deg_a, deg_b


def witness_counting_check(g: CoverGraph, w, p: Params | None = None) -> bool:
    """Audit a domination witness against the two counting inequalities.

    With ``a``/``b`` the numbers of A-/B-classes in the witness, checks
    ``a*kA <= (a+b-1)*DB`` and ``b*kB <= (a+b-1)*DA`` where ``kA``, ``kB`` are
    the smallest class sizes in the witness and ``DA``, ``DB`` the largest
    degrees of ``g``.  Both hold for every valid witness; together they force
    ``DA/kB + DB/kA > 1`` for these observed values.  ``p`` is accepted for
    symmetry with the other checks and is not consulted.
    """
    from .solver import verify_domination_witness

    report = verify_domination_witness(g, w)
    if not report.ok:
        raise ValueError(f"invalid witness: {report.reasons[0]}")
    a, b, kA, kB, DA, DB = domination_counts(g, w)
    return a * kA <= (a + b - 1) * DB and b * kB <= (a + b - 1) * DA
