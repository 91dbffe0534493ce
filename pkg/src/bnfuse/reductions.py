"""Constructive instance transformations between the optimization problems,
with forward/backward solution mapping and an oracle-based verification
harness for the correspondence each transformation promises.

Gadget vertices carry structured identifiers derived from the originating
arc or vertex (e.g. ``"b@a>b"`` for the head copy of arc a->b), which keeps
them disjoint from the source vertices; constructions validate that
disjointness and fail loudly on collision.
"""

from __future__ import annotations

from dataclasses import dataclass

from .digraph import Arc, Digraph, enumerate_simple_cycles
from .errors import DomainError
from .optimize import (
    ArcSetSolution,
    replay_steps,
    solve_2dmrs_exact,
    solve_2mnas_exact,
    solve_dmrs_exact,
    solve_mnas_exact,
    solve_mrs_exact,
    _acyclic,
    _flip,
)

REDUCTION_KINDS = (
    "mrs-to-dmrs",
    "dmrs-to-2dmrs",
    "mrs-to-mnas",
    "mnas-to-2mnas",
)


def _tail_copy(u: str, v: str) -> str:
    return f"{u}@{u}>{v}"


def _head_copy(u: str, v: str) -> str:
    return f"{v}@{u}>{v}"


def _witness(u: str, v: str) -> str:
    return f"w@{u}>{v}"


def _path_vertex(i: int, u: str, v: str) -> str:
    return f"p{i}@{u}>{v}"


def _feeder_vertex(u: str, i: int) -> str:
    return f"{u}@s{i}"


def _check_fresh(fresh: list[str], base: frozenset[str]) -> None:
    if len(set(fresh)) != len(fresh) or set(fresh) & base:
        raise DomainError("gadget vertex identifiers collide; rename the source vertices")


@dataclass(frozen=True)
class ReductionArtifact:
    """A source instance, its transformed target instance, and the
    provenance of every gadget vertex."""

    kind: str
    source: tuple[Digraph, ...]
    target: tuple[Digraph, ...]
    provenance: tuple[tuple[str, tuple], ...]

    def __post_init__(self) -> None:
        if self.kind not in REDUCTION_KINDS:
            raise DomainError(f"unknown reduction kind: {self.kind!r}")
        object.__setattr__(self, "source", tuple(self.source))
        object.__setattr__(self, "target", tuple(self.target))
        object.__setattr__(
            self, "provenance", tuple(sorted((v, tuple(o)) for v, o in self.provenance))
        )

    @property
    def provenance_map(self) -> dict[str, tuple]:
        return dict(self.provenance)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "source": [d.to_dict() for d in self.source],
            "target": [d.to_dict() for d in self.target],
            "provenance": {v: list(origin) for v, origin in self.provenance},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ReductionArtifact":
        if not isinstance(data, dict):
            raise DomainError("an artifact file is a JSON object")
        try:
            kind = data["kind"]
            source = tuple(Digraph.from_dict(d) for d in data["source"])
            target = tuple(Digraph.from_dict(d) for d in data["target"])
            provenance = tuple(sorted((v, tuple(o)) for v, o in data["provenance"].items()))
        except (KeyError, TypeError, AttributeError) as exc:
            raise DomainError(f"malformed artifact object: {exc}") from exc
        return cls(kind, source, target, provenance)


# --- constructions ----------------------------------------------------------

def reduce_mrs_to_dmrs(d: Digraph) -> ReductionArtifact:
    """Break each source arc into three parts: the middle lands in the
    first target digraph, the entry and exit stubs in the second.  Flipping
    a middle arc corresponds exactly to flipping its source arc."""
    arcs = sorted(d.arcs)
    fresh: list[str] = []
    provenance: list[tuple[str, tuple]] = []
    e1: set[Arc] = set()
    e2: set[Arc] = set()
    for u, v in arcs:
        tc, hc = _tail_copy(u, v), _head_copy(u, v)
        fresh += [tc, hc]
        provenance += [(tc, ("arc", u, v, "tail-copy")), (hc, ("arc", u, v, "head-copy"))]
        e1.add((tc, hc))
        e2.add((u, tc))
        e2.add((hc, v))
    _check_fresh(fresh, d.vertices)
    vertices = d.vertices | frozenset(fresh)
    return ReductionArtifact(
        "mrs-to-dmrs",
        (d,),
        (Digraph(vertices, frozenset(e1)), Digraph(vertices, frozenset(e2))),
        tuple(provenance),
    )


def reduce_dmrs_to_2dmrs(d1: Digraph, d2: Digraph) -> ReductionArtifact:
    """Replace each arc of the second digraph by squared-many parallel
    two-arc paths through fresh vertices, so flipping any of them is never
    worth it and an optimum touches only the first digraph's arcs."""
    if d1.vertices != d2.vertices:
        raise DomainError("paired instances must share one vertex set")
    n = len(d1.vertices)
    fresh: list[str] = []
    provenance: list[tuple[str, tuple]] = []
    e2: set[Arc] = set()
    for u, v in sorted(d2.arcs):
        for i in range(n * n):
            pv = _path_vertex(i, u, v)
            fresh.append(pv)
            provenance.append((pv, ("arc", u, v, f"path-{i}")))
            e2.add((u, pv))
            e2.add((pv, v))
    _check_fresh(fresh, d1.vertices)
    vertices = d1.vertices | frozenset(fresh)
    return ReductionArtifact(
        "dmrs-to-2dmrs",
        (d1, d2),
        (Digraph(vertices, d1.arcs), Digraph(vertices, frozenset(e2))),
        tuple(provenance),
    )


def reduce_mrs_to_mnas(d: Digraph) -> ReductionArtifact:
    """Per source arc, a three-vertex gadget whose middle arc sits in the
    first target digraph next to a witness arc sharing its head.  Reversing
    within the gadget to break the chain necessarily generates one arc
    between the tail copy and the witness, so the new-arc count of an
    optimal sequence equals the source flip count."""
    arcs = sorted(d.arcs)
    fresh: list[str] = []
    provenance: list[tuple[str, tuple]] = []
    e1: set[Arc] = set()
    e2: set[Arc] = set()
    for u, v in arcs:
        tc, hc, wt = _tail_copy(u, v), _head_copy(u, v), _witness(u, v)
        fresh += [tc, hc, wt]
        provenance += [
            (tc, ("arc", u, v, "tail-copy")),
            (hc, ("arc", u, v, "head-copy")),
            (wt, ("arc", u, v, "witness")),
        ]
        e1.add((tc, hc))
        e1.add((wt, hc))
        e2.add((u, tc))
        e2.add((hc, v))
    _check_fresh(fresh, d.vertices)
    vertices = d.vertices | frozenset(fresh)
    return ReductionArtifact(
        "mrs-to-mnas",
        (d,),
        (Digraph(vertices, frozenset(e1)), Digraph(vertices, frozenset(e2))),
        tuple(provenance),
    )


def reduce_mnas_to_2mnas(d1: Digraph, d2: Digraph) -> ReductionArtifact:
    """Give every original vertex squared-many fresh parents in the second
    digraph, making any reversal there generate far more arcs than an
    optimal sequence confined to the first digraph ever would."""
    if d1.vertices != d2.vertices:
        raise DomainError("paired instances must share one vertex set")
    n = len(d1.vertices)
    fresh: list[str] = []
    provenance: list[tuple[str, tuple]] = []
    e2 = set(d2.arcs)
    for u in sorted(d1.vertices):
        for i in range(n * n):
            fv = _feeder_vertex(u, i)
            fresh.append(fv)
            provenance.append((fv, ("vertex", u, f"feeder-{i}")))
            e2.add((fv, u))
    _check_fresh(fresh, d1.vertices)
    vertices = d1.vertices | frozenset(fresh)
    return ReductionArtifact(
        "mnas-to-2mnas",
        (d1, d2),
        (Digraph(vertices, d1.arcs), Digraph(vertices, frozenset(e2))),
        tuple(provenance),
    )


# --- solution mapping -------------------------------------------------------

def forward_solution(artifact: ReductionArtifact, arcs_or_steps):
    """Map a feasible source solution into the target instance."""
    kind = artifact.kind
    if kind == "mrs-to-dmrs":
        return frozenset((_tail_copy(u, v), _head_copy(u, v)) for u, v in arcs_or_steps)
    if kind == "dmrs-to-2dmrs":
        return frozenset((u, v) for u, v in arcs_or_steps)
    if kind == "mrs-to-mnas":
        return tuple(
            (0, (_tail_copy(u, v), _head_copy(u, v))) for u, v in sorted(arcs_or_steps)
        )
    return tuple((g, tuple(a)) for g, a in arcs_or_steps)


def backward_solution(artifact: ReductionArtifact, target_solution):
    """Map a target solution back onto the source instance.

    For the sequence targets this consumes the target's new-arc set
    (``mrs-to-mnas``) or its steps (``mnas-to-2mnas``).
    """
    kind = artifact.kind
    if kind == "mrs-to-dmrs":
        origin = {
            (_tail_copy(u, v), _head_copy(u, v)): (u, v) for u, v in artifact.source[0].arcs
        }
        try:
            return frozenset(origin[a] for a in target_solution)
        except KeyError as exc:
            raise DomainError(f"target solution contains a non-middle arc: {exc}") from exc
    if kind == "dmrs-to-2dmrs":
        e1 = artifact.source[0].arcs
        arcs = frozenset(target_solution)
        if not arcs <= e1:
            raise DomainError("target solution uses arcs outside the first digraph")
        return arcs
    if kind == "mrs-to-mnas":
        picked = set()
        for _, (a, b) in target_solution:
            for u, v in artifact.source[0].arcs:
                pair = {_tail_copy(u, v), _witness(u, v)}
                if {a, b} == pair:
                    picked.add((u, v))
        return frozenset(picked)
    steps = tuple(target_solution)
    if any(g != 0 for g, _ in steps):
        raise DomainError("target sequence reverses arcs outside the first digraph")
    return tuple((0, tuple(a)) for _, a in steps)


# --- verification -----------------------------------------------------------

@dataclass(frozen=True)
class ReductionReport:
    """Oracle comparison of a transformation's two instances."""

    kind: str
    source_objective: int
    target_objective: int
    checks: tuple[tuple[str, bool], ...]
    witnesses: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.checks)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "source_objective": self.source_objective,
            "target_objective": self.target_objective,
            "checks": {name: ok for name, ok in self.checks},
            "witnesses": list(self.witnesses),
            "passed": self.passed,
        }


def _mrs_feasible(d: Digraph, arcs: frozenset[Arc]) -> bool:
    return arcs <= d.arcs and _acyclic(d.vertices, _flip(d.arcs, arcs))


def _dmrs_feasible(d1: Digraph, d2: Digraph, arcs: frozenset[Arc]) -> bool:
    return arcs <= d1.arcs and _acyclic(d1.vertices, _flip(d1.arcs, arcs) | d2.arcs)


def _2dmrs_feasible(d1: Digraph, d2: Digraph, arcs: frozenset[Arc]) -> bool:
    combined = d1.arcs | d2.arcs
    return arcs <= combined and _acyclic(d1.vertices, _flip(combined, arcs))


def _sequence_feasible(d1: Digraph, d2: Digraph, steps) -> tuple[bool, int]:
    try:
        (f1, f2), new = replay_steps(d1, d2, steps)
    except DomainError:
        return False, -1
    return _acyclic(d1.vertices, f1.arcs | f2.arcs), len(new)


def verify_reduction(
    artifact: ReductionArtifact,
    *,
    frontier_cap: int = 200_000,
    subset_budget: int = 2_000_000,
) -> ReductionReport:
    """Solve both instances exactly, map the solutions across, and check
    objective correspondence and round-trip mapping.

    Target instances are solved with arc caps widened to their gadget
    size; the enumeration stays tractable because target optima are
    bounded by the source instance's arc count.
    """
    kind = artifact.kind
    checks: list[tuple[str, bool]] = []
    witnesses: list[str] = []

    def note(name: str, ok: bool, detail: str = "") -> None:
        checks.append((name, ok))
        if not ok and detail:
            witnesses.append(f"{name}: {detail}")

    if kind == "mrs-to-dmrs":
        (src_d,) = artifact.source
        t1, t2 = artifact.target
        src = solve_mrs_exact(src_d, arc_cap=max(16, len(src_d.arcs)))
        tgt = solve_dmrs_exact(t1, t2, arc_cap=max(16, len(t1.arcs)), subset_budget=subset_budget)
        fwd = forward_solution(artifact, src.arcs)
        bwd = backward_solution(artifact, tgt.arcs)
        note("objectives_match", src.objective == tgt.objective,
             f"source {src.objective} vs target {tgt.objective}")
        note("forward_feasible", _dmrs_feasible(t1, t2, fwd))
        note("forward_objective_matches", len(fwd) == src.objective)
        note("backward_feasible", _mrs_feasible(src_d, bwd))
        note("backward_objective_matches", len(bwd) == tgt.objective)
        note("roundtrip", backward_solution(artifact, fwd) == src.arcs)
    elif kind == "dmrs-to-2dmrs":
        s1, s2 = artifact.source
        t1, t2 = artifact.target
        src = solve_dmrs_exact(s1, s2, arc_cap=max(16, len(s1.arcs)), subset_budget=subset_budget)
        combined = len(t1.arcs) + len(t2.arcs)
        tgt = solve_2dmrs_exact(t1, t2, arc_cap=max(16, combined), subset_budget=subset_budget)
        note("objectives_match", src.objective == tgt.objective,
             f"source {src.objective} vs target {tgt.objective}")
        within = tgt.arcs <= s1.arcs
        note("target_solution_within_first_digraph", within, f"{sorted(tgt.arcs)}")
        note("forward_feasible", _2dmrs_feasible(t1, t2, forward_solution(artifact, src.arcs)))
        note("forward_objective_matches", True)
        if within:
            bwd = backward_solution(artifact, tgt.arcs)
            note("backward_feasible", _dmrs_feasible(s1, s2, bwd))
            note("backward_objective_matches", len(bwd) == tgt.objective)
            note("roundtrip", backward_solution(artifact, forward_solution(artifact, src.arcs)) == src.arcs)
    elif kind == "mrs-to-mnas":
        (src_d,) = artifact.source
        t1, t2 = artifact.target
        src = solve_mrs_exact(src_d, arc_cap=max(16, len(src_d.arcs)))
        tgt = solve_mnas_exact(t1, t2, frontier_cap=frontier_cap)
        fwd = forward_solution(artifact, src.arcs)
        ok_fwd, fwd_new = _sequence_feasible(t1, t2, fwd)
        bwd = backward_solution(artifact, tgt.new_arcs)
        note("objectives_match", src.objective == tgt.objective,
             f"source {src.objective} vs target {tgt.objective}")
        note("forward_feasible", ok_fwd)
        note("forward_objective_matches", fwd_new == src.objective,
             f"forward sequence generates {fwd_new} arcs")
        note("backward_feasible", _mrs_feasible(src_d, bwd))
        note("backward_objective_matches", len(bwd) == tgt.objective,
             f"backward set {sorted(bwd)}")
        _, fwd_tagged = replay_steps(t1, t2, fwd)
        note("roundtrip", backward_solution(artifact, fwd_tagged) == src.arcs)
    else:
        s1, s2 = artifact.source
        t1, t2 = artifact.target
        src = solve_mnas_exact(s1, s2, frontier_cap=frontier_cap)
        tgt = solve_2mnas_exact(t1, t2, frontier_cap=frontier_cap)
        note("objectives_match", src.objective == tgt.objective,
             f"source {src.objective} vs target {tgt.objective}")
        first_only = all(g == 0 for g, _ in tgt.steps)
        note("target_sequence_within_first_digraph", first_only, f"{tgt.steps}")
        ok_fwd, fwd_new = _sequence_feasible(t1, t2, forward_solution(artifact, src.steps))
        note("forward_feasible", ok_fwd)
        note("forward_objective_matches", fwd_new == src.objective)
        if first_only:
            bwd = backward_solution(artifact, tgt.steps)
            ok_bwd, bwd_new = _sequence_feasible(s1, s2, bwd)
            note("backward_feasible", ok_bwd)
            note("backward_objective_matches", bwd_new == tgt.objective)
            note("roundtrip", backward_solution(artifact, forward_solution(artifact, src.steps)) == src.steps)
    return ReductionReport(kind, src.objective, tgt.objective, tuple(checks), tuple(witnesses))


@dataclass(frozen=True)
class Claim1Report:
    """Exclusive-cycle witnesses for a minimum flip set: per solution arc,
    a directed cycle of the input meeting the solution in that arc alone."""

    arcs: tuple[Arc, ...]
    witnesses: tuple[tuple[Arc, tuple[Arc, ...] | None], ...]

    @property
    def passed(self) -> bool:
        return all(c is not None for _, c in self.witnesses)

    def to_dict(self) -> dict:
        return {
            "arcs": [list(a) for a in self.arcs],
            "witnesses": {
                f"{a[0]}>{a[1]}": ([list(x) for x in cyc] if cyc is not None else None)
                for a, cyc in self.witnesses
            },
            "passed": self.passed,
        }


def verify_claim1(
    d: Digraph, solution: ArcSetSolution, *, cycle_cap: int = 12
) -> Claim1Report:
    """Check that every arc of a minimum flip set has an exclusive cycle:
    some directed cycle of the input whose solution intersection is exactly
    that arc.  Vacuously passes on an empty solution."""
    if not solution.arcs <= d.arcs:
        raise DomainError("solution arcs must belong to the digraph")
    cycles = sorted(enumerate_simple_cycles(d, cycle_cap), key=lambda c: (len(c), c.arcs))
    witnesses: list[tuple[Arc, tuple[Arc, ...] | None]] = []
    for arc in sorted(solution.arcs):
        found = None
        for cycle in cycles:
            if set(cycle.arcs) & solution.arcs == {arc}:
                found = cycle.arcs
                break
        witnesses.append((arc, found))
    return Claim1Report(tuple(sorted(solution.arcs)), tuple(witnesses))
