"""Sharp no-IT constructions and their replayable certificates.

Every construction here is a sequence of steps, each of which keeps the
"no independent transversal" property:

* ``Base``: a complete bipartite graph whose two sides are whole classes;
  any transversal takes one vertex per side, and those are adjacent.
* ``JoinGadget`` / ``JoinSubsystem``: add a disjoint no-IT system and spread
  one of its classes over existing classes.  An IT of the result would have
  to contain an IT of one of the two parts.
* ``Delete``: remove vertices without emptying a class.
* ``Swap``: exchange the A/B labels.

A :class:`BuildTrace` records these steps, so :func:`verify_trace` can
re-derive the graph from scratch and thereby prove it has no IT.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Sequence, Union

from .criteria import NormalizationTrace, normalize, sufficient, surplus, ConditionError
from .graph import CapacityError, CoverGraph, GraphBuilder, Params, Side, StructureError
from .solver import CheckReport

MAX_STEPS = 10**6


class TraceError(ValueError):
    def __init__(self, index: int, message: str):
        super().__init__(f"step {index}: {message}")
        self.index = index


# Trace steps

@dataclass(frozen=True)
class Base:
    p: int
    q: int
    classes: tuple[tuple[int, Side], ...] = ((0, Side.A), (1, Side.B))


@dataclass(frozen=True)
class JoinGadget:
    """Attach a fresh ``K_{p,q}`` and spread its ``donor`` side over existing classes."""

    p: int
    q: int
    donor: Side
    assignment: tuple[int, ...]


@dataclass(frozen=True)
class JoinSubsystem:
    """Attach a copy of a certified system and spread its class ``donor``.

    ``source`` is either an ``int`` k, meaning the graph after the first k
    steps of the enclosing trace, or an embedded :class:`BuildTrace`.
    """

    source: Union[int, "BuildTrace"]
    donor: int
    assignment: tuple[int, ...]


@dataclass(frozen=True)
class Delete:
    vertices: tuple[int, ...]


@dataclass(frozen=True)
class Swap:
    pass


Step = Union[Base, JoinGadget, JoinSubsystem, Delete, Swap]


@dataclass(frozen=True)
class BuildTrace:
    steps: tuple[Step, ...]
    params: Params | None = None
    normalized: Params | None = None
    normalization: NormalizationTrace = field(default_factory=NormalizationTrace)


def complete_bipartite(p: int, q: int) -> CoverGraph:
    """``K_{p,q}``: A-vertices ``0..p-1`` in class 0, B-vertices in class 1."""
    if p < 1 or q < 1:
        raise ValueError("both sides of a gadget need at least one vertex")
    verts = [(v, Side.A, 0) for v in range(p)] + [(p + w, Side.B, 1) for w in range(q)]
    edges = frozenset((v, p + w) for v in range(p) for w in range(q))
    return CoverGraph(tuple(verts), ((0, Side.A), (1, Side.B)), edges)


# Replay

def _join(b: GraphBuilder, guest: CoverGraph, donor: int, targets: Sequence[int], i: int) -> None:
    if donor not in guest.class_side:
        raise TraceError(i, f"donor class {donor} is not a class of the subsystem")
    side = guest.class_side[donor]
    size = len(guest.members[donor])
    if len(targets) != size:
        raise TraceError(i, f"assignment places {len(targets)} of the donor's {size} vertices")
    for t in targets:
        if b.class_side.get(t) is not side:
            raise TraceError(i, f"target {t} is not an existing {side.value}-class of the host")
    vmap, _ = b.add_copy(guest, skip_class=donor)
    for v, t in zip(guest.members[donor], targets):
        b.place(vmap[v], t)


def _apply(b: GraphBuilder, step: Step, i: int, prefix: Callable[[int], CoverGraph]) -> None:
    if isinstance(step, Base):
        if i != 0:
            raise TraceError(i, "a base gadget may only open a trace")
        sides = sorted(s.value for _, s in step.classes)
        if sides != ["A", "B"]:
            raise TraceError(i, f"base gadget must have exactly one A-class and one B-class, got {sides}")
        if step.p < 1 or step.q < 1:
            raise TraceError(i, "base gadget sides must be nonempty")
        ids = dict((s, c) for c, s in step.classes)
        ca, cb = b.add_class(Side.A), b.add_class(Side.B)
        if (ca, cb) != (ids[Side.A], ids[Side.B]):
            raise TraceError(i, f"base classes must be numbered {ca}, {cb}")
        av = [b.add_vertex(ca) for _ in range(step.p)]
        bv = [b.add_vertex(cb) for _ in range(step.q)]
        for x in av:
            for y in bv:
                b.add_edge(x, y)
        return
    if i == 0:
        raise TraceError(i, "a trace must open with a base gadget")
    if isinstance(step, JoinGadget):
        if step.p < 1 or step.q < 1:
            raise TraceError(i, "gadget sides must be nonempty")
        guest = complete_bipartite(step.p, step.q)
        _join(b, guest, 0 if step.donor is Side.A else 1, step.assignment, i)
    elif isinstance(step, JoinSubsystem):
        if isinstance(step.source, BuildTrace):
            try:
                guest = replay(step.source)
            except TraceError as exc:
                raise TraceError(i, f"embedded subsystem rejected ({exc})") from exc
        elif isinstance(step.source, int) and not isinstance(step.source, bool) and 1 <= step.source <= i:
            guest = prefix(step.source)
        else:
            raise TraceError(i, f"subsystem reference {step.source!r} is not an earlier prefix")
        _join(b, guest, step.donor, step.assignment, i)
    elif isinstance(step, Delete):
        try:
            b.delete(step.vertices)
        except StructureError as exc:
            raise TraceError(i, str(exc)) from exc
    elif isinstance(step, Swap):
        b.swap_sides()
    else:
        raise TraceError(i, f"unknown step {step!r}")


def replay(trace: BuildTrace) -> CoverGraph:
    """Rebuild the graph a trace describes, checking every step."""
    wanted = {s.source for s in trace.steps if isinstance(s, JoinSubsystem) and isinstance(s.source, int)}
    snaps: dict[int, CoverGraph] = {}
    b = GraphBuilder()
    if not trace.steps:
        raise TraceError(0, "empty trace")
    for i, step in enumerate(trace.steps):
        if i in wanted:
            snaps[i] = b.freeze()
        try:
            _apply(b, step, i, snaps.__getitem__)
        except (StructureError, CapacityError) as exc:
            raise TraceError(i, str(exc)) from exc
    return b.freeze()


def verify_trace(g: CoverGraph, trace: BuildTrace) -> CheckReport:
    """Accept iff ``trace`` replays to exactly ``g``; acceptance proves ``g`` has no IT."""
    try:
        h = replay(trace)
    except TraceError as exc:
        return CheckReport(False, (str(exc),))
    if h != g:
        return CheckReport(False, (_first_difference(h, g),))
    return CheckReport(True, (), "replayed graph matches; no independent transversal exists")


def _first_difference(h: CoverGraph, g: CoverGraph) -> str:
    if h.classes != g.classes:
        return "class list differs from the replayed graph"
    if h.vertices != g.vertices:
        return "vertex list differs from the replayed graph"
    return "edge set differs from the replayed graph"


# Incremental construction

class _Run:
    """A builder plus the trace that produced it."""

    def __init__(self, graph: CoverGraph | None = None, steps: Sequence[Step] = (),
                 snaps: dict[int, CoverGraph] | None = None):
        self.b = GraphBuilder.from_graph(graph) if graph is not None else GraphBuilder()
        self.steps = list(steps)
        self.snaps = dict(snaps or {})
        if graph is not None:
            self.snaps[len(self.steps)] = graph

    def prefix(self, k: int) -> CoverGraph:
        if k not in self.snaps:
            self.snaps[k] = replay(BuildTrace(tuple(self.steps[:k])))
        return self.snaps[k]

    def apply(self, step: Step) -> None:
        _apply(self.b, step, len(self.steps), self.prefix)
        self.steps.append(step)

    def snapshot(self) -> int:
        k = len(self.steps)
        self.snaps[k] = self.b.freeze()
        return k

    def trace(self, **kw) -> BuildTrace:
        return BuildTrace(tuple(self.steps), **kw)


def first_fit(b: GraphBuilder, side: Side, count: int, caps: Params | None) -> list[int]:
    """Targets for ``count`` vertices: lowest class id with spare room first."""
    targets = []
    for c in sorted(b.classes_on(side)):
        room = count - len(targets) if caps is None else caps.cap(side) - b.size(c)
        targets.extend([c] * max(0, min(room, count - len(targets))))
        if len(targets) == count:
            return targets
    raise CapacityError(f"only {len(targets)} of {count} vertices fit into the {side.value}-classes")


def gadget(p: int, q: int) -> tuple[CoverGraph, BuildTrace]:
    run = _Run()
    run.apply(Base(p, q))
    return run.b.freeze(), run.trace()


def join(host: tuple[CoverGraph, BuildTrace], guest: tuple[CoverGraph, BuildTrace], donor: int,
         policy: Sequence[int] | None = None, caps: Params | None = None) -> tuple[CoverGraph, BuildTrace]:
    """Join two certified no-IT systems by spreading class ``donor`` of ``guest``.

    ``policy`` may give the target class of each donor vertex (ascending
    vertex id); by default targets are chosen first-fit under ``caps``.
    """
    hg, ht = host
    gg, gt = guest
    if donor not in gg.class_side:
        raise StructureError(f"donor class {donor} is not a class of the guest")
    run = _Run(hg, ht.steps)
    side = gg.class_side[donor]
    size = len(gg.members[donor])
    targets = list(policy) if policy is not None else first_fit(run.b, side, size, caps)
    if caps is not None:
        load: dict[int, int] = {}
        for t in targets:
            load[t] = load.get(t, 0) + 1
        for t, n in load.items():
            if t in run.b.members and run.b.size(t) + n > caps.cap(side):
                raise CapacityError(f"class {t} would exceed its cap")
    if len(gt.steps) == 1 and isinstance(gt.steps[0], Base) and gg == replay(gt):
        base = gt.steps[0]
        step = JoinGadget(base.p, base.q, side, tuple(targets))
    else:
        step = JoinSubsystem(gt, donor, tuple(targets))
    run.apply(step)
    return run.b.freeze(), replace(ht, steps=tuple(run.steps))


# The three phases

@dataclass(frozen=True)
class StepRecord:
    label: str
    a: int
    b: int
    dA: int
    dB: int
    copies: int


@dataclass(frozen=True)
class PhaseState:
    a: int
    b: int
    dA: int
    dB: int
    last_class: int
    log: tuple[StepRecord, ...] = ()
    iterations: int = 0
    run: _Run | None = field(default=None, repr=False, compare=False)


def _state(run: _Run, p: Params, last: int, log=(), iterations=0) -> PhaseState:
    a, na = run.b.count(Side.A)
    b, nb = run.b.count(Side.B)
    return PhaseState(a, b, a * p.kA - na, b * p.kB - nb, last, tuple(log), iterations, run)


def predicted_b_deficit(a: int, dA: int, p: Params) -> Fraction:
    """B-deficit forced during the first phase, before its final short gadget."""
    t = surplus(p)
    return p.kB - Fraction(dA * (p.kB - p.DA), p.DB) - Fraction(a * t, p.DB)


def phase1(p: Params, max_steps: int = MAX_STEPS) -> tuple[CoverGraph, BuildTrace, PhaseState]:
    """Grow a no-IT graph from copies of ``K_{DB,DA}`` until the A-deficit is 0.

    Requires normalized parameters.  The last class added is a B-class of
    size ``DA`` and the B-deficit ends below ``kB``.
    """
    surplus(p)
    run = _Run()
    run.apply(Base(p.DB, p.DA))
    copies = 1
    last = 1
    log = []
    st = _state(run, p, last)
    log.append(StepRecord("1", st.a, st.b, st.dA, st.dB, copies))
    for _ in range(max_steps):
        if st.dA >= p.DB:
            label = "2"
            step = JoinGadget(p.DB, p.DA, Side.A, tuple(first_fit(run.b, Side.A, p.DB, p)))
        elif st.dA > 0 and st.dB >= p.DA:
            label = "3.1"
            step = JoinGadget(p.DB, p.DA, Side.B, tuple(first_fit(run.b, Side.B, p.DA, p)))
        elif st.dA > 0:
            label = "3.2"
            step = JoinGadget(st.dA, p.DA, Side.A, tuple(first_fit(run.b, Side.A, st.dA, p)))
        else:
            break
        last = run.b.next_class
        run.apply(step)
        copies += 1
        st = _state(run, p, last)
        log.append(StepRecord(label, st.a, st.b, st.dA, st.dB, copies))
        if label == "3.2":
            break
    else:
        raise RuntimeError("non-termination suspected in phase 1")
    g = run.b.freeze()
    run.snaps[len(run.steps)] = g
    return g, run.trace(normalized=p), _state(run, p, last, log)


def phase2_bound(h0: tuple[CoverGraph, BuildTrace, PhaseState], p: Params) -> int:
    g = h0[0]
    b0, nb0 = g.count(Side.B)
    gain = nb0 - (b0 - 1) * p.kB
    return -(-(b0 * p.kB - nb0) // gain)


def phase2(h0: tuple[CoverGraph, BuildTrace, PhaseState], p: Params) -> tuple[CoverGraph, BuildTrace, PhaseState]:
    """Chain copies of ``h0`` until the B-deficit is at most ``DA``."""
    g0, t0, s0 = h0
    if s0.dA != 0 or s0.dB >= p.kB or len(g0.members[s0.last_class]) != p.DA:
        raise ValueError("phase 2 needs the output of phase 1")
    run = _Run(g0, t0.steps, s0.run.snaps if s0.run else None)
    k0 = len(t0.steps)
    bound = phase2_bound(h0, p)
    st = _state(run, p, s0.last_class)
    log = [StepRecord("1", st.a, st.b, st.dA, st.dB, 0)]
    n = 0
    while st.dB > p.DA:
        if n >= bound:
            raise RuntimeError("phase 2 exceeded its iteration bound")
        targets = first_fit(run.b, Side.B, p.DA, p)
        run.apply(JoinSubsystem(k0, s0.last_class, tuple(targets)))
        n += 1
        st = _state(run, p, s0.last_class)
        log.append(StepRecord("2", st.a, st.b, st.dA, st.dB, n))
    g = run.b.freeze()
    run.snaps[len(run.steps)] = g
    return g, replace(t0, steps=tuple(run.steps)), _state(run, p, s0.last_class, log, n)


def phase3(h1: tuple[CoverGraph, BuildTrace, PhaseState], p: Params) -> tuple[CoverGraph, BuildTrace]:
    """Close the remaining B-deficit with ``K_{DB,dB}`` and grow its A-class to ``kA``."""
    g1, t1, s1 = h1
    if s1.dA != 0 or s1.dB > p.DA:
        raise ValueError("phase 3 needs A-deficit 0 and B-deficit at most DA")
    if s1.dB == 0:
        return g1, t1
    run = _Run(g1, t1.steps, s1.run.snaps if s1.run else None)
    a0 = run.b.next_class
    run.apply(JoinGadget(p.DB, s1.dB, Side.B, tuple(first_fit(run.b, Side.B, s1.dB, p))))
    k1 = run.snapshot()
    while run.b.size(a0) < p.kA:
        run.apply(JoinSubsystem(k1, a0, (a0,) * p.DB))
    extra = run.b.size(a0) - p.kA
    if extra:
        run.apply(Delete(tuple(sorted(run.b.members[a0])[-extra:])))
    return run.b.freeze(), replace(t1, steps=tuple(run.steps))


@dataclass(frozen=True)
class PipelineRun:
    """Everything :func:`build_sharp` computes, kept for auditing."""

    params: Params
    normalized: Params
    normalization: NormalizationTrace
    graph: CoverGraph
    trace: BuildTrace
    phase1: PhaseState
    phase2: PhaseState
    phase2_bound: int
    b0: int
    B0: int


def run_pipeline(p: Params) -> PipelineRun:
    if sufficient(p):
        raise ConditionError(f"every cover with parameters {p.as_tuple()} has an independent transversal")
    q, nt = normalize(p)
    h0 = phase1(q)
    bound = phase2_bound(h0, q)
    h1 = phase2(h0, q)
    g, trace = phase3(h1, q)
    run = _Run(g, trace.steps)
    drop = q.kA - (nt.kA_raised_from or q.kA)
    if drop:
        doomed = []
        for c in sorted(run.b.classes_on(Side.A)):
            doomed.extend(sorted(run.b.members[c])[-drop:])
        run.apply(Delete(tuple(sorted(doomed))))
    if nt.swapped:
        run.apply(Swap())
    b0, nb0 = h0[0].count(Side.B)
    final = run.b.freeze()
    return PipelineRun(p, q, nt, final, run.trace(params=p, normalized=q, normalization=nt),
                       h0[2], h1[2], bound, b0, nb0)


def build_sharp(p: Params) -> tuple[CoverGraph, BuildTrace]:
    """A full ``(kA, kB, DA, DB)``-graph with no IT, with its certificate."""
    r = run_pipeline(p)
    return r.graph, r.trace
