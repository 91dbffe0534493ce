"""Arc reversal with compensating parent arcs, and reordering a DAG to
match a target total ordering.

Reversing (u, v) is legal only when (u, v) is the only directed path from
u to v; the operation then flips the arc and adds an arc into v from each
parent u has and v lacks, and an arc into u from each parent v has and u
lacks.  Legal reversal preserves acyclicity.
"""

from __future__ import annotations

from dataclasses import dataclass

from .digraph import Arc, Digraph, Ordering, is_acyclic, parents
from .errors import DomainError, IllegalReversalError

POLICIES = ("latest-tail", "fewest-new-arcs")

DEFAULT_POLICY = "latest-tail"


@dataclass(frozen=True)
class ReversalStep:
    """One executed reversal: the arc flipped and the arcs it created."""

    arc: Arc
    added_arcs: frozenset[Arc]

    def to_dict(self) -> dict:
        return {"arc": list(self.arc), "added_arcs": [list(a) for a in sorted(self.added_arcs)]}


@dataclass(frozen=True)
class ReorderResult:
    """Outcome of rearranging a DAG to be consistent with an ordering."""

    digraph: Digraph
    steps: tuple[ReversalStep, ...]
    new_arcs: frozenset[Arc]

    def to_dict(self) -> dict:
        return {
            "digraph": self.digraph.to_dict(),
            "steps": [s.to_dict() for s in self.steps],
            "new_arcs": [list(a) for a in sorted(self.new_arcs)],
        }


def _path_avoiding_arc(d: Digraph, src: str, dst: str, skip: Arc) -> bool:
    """True iff src reaches dst without using the arc ``skip``."""
    succ: dict[str, list[str]] = {v: [] for v in d.vertices}
    for a in d.arcs:
        if a != skip:
            succ[a[0]].append(a[1])
    seen = {src}
    stack = [src]
    while stack:
        u = stack.pop()
        for w in succ[u]:
            if w == dst:
                return True
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return False


def _compensating_arcs(d: Digraph, arc: Arc) -> frozenset[Arc]:
    u, v = arc
    pu = parents(d, u)
    pv = parents(d, v) - {u}
    added = {(w, v) for w in pu - pv} | {(w, u) for w in pv - pu}
    return frozenset(added) - d.arcs


def reverse_arc(d: Digraph, arc: Arc) -> tuple[Digraph, ReversalStep]:
    """Reverse one arc of an acyclic digraph, adding compensating arcs.

    Arcs that the compensation rule would duplicate are not created and
    are not reported in the step's ``added_arcs``.
    """
    if not is_acyclic(d):
        raise DomainError("arc reversal is defined on acyclic digraphs only")
    arc = (arc[0], arc[1])
    if arc not in d.arcs:
        raise DomainError(f"arc {arc!r} is not in the digraph")
    u, v = arc
    if _path_avoiding_arc(d, u, v, arc):
        raise IllegalReversalError(
            f"reversing {arc!r} is illegal: another directed path leads from {u!r} to {v!r}"
        )
    added = _compensating_arcs(d, arc)
    result = Digraph(d.vertices, (d.arcs - {arc}) | {(v, u)} | added)
    return result, ReversalStep(arc, added)


def reorder(d: Digraph, alpha: Ordering, policy: str = DEFAULT_POLICY) -> ReorderResult:
    """Reverse arcs of a DAG until it is consistent with ``alpha``.

    Each step reverses a legal ordering-violating arc chosen by policy:

    - ``"latest-tail"`` (default): the violating arc whose tail sits
      latest in the ordering, ties broken by arc identifier;
    - ``"fewest-new-arcs"``: the violating arc whose reversal creates the
      fewest arcs right now, same tie-break.

    A legal violating arc always exists while the graph is inconsistent,
    and once an arc between a vertex pair points forward it never flips
    back, so at most one reversal per vertex pair occurs.
    """
    if policy not in POLICIES:
        raise DomainError(f"unknown reversal policy: {policy!r}")
    if not is_acyclic(d):
        raise DomainError("reordering is defined on acyclic digraphs only")
    if set(alpha.sequence) != set(d.vertices):
        raise DomainError("ordering must cover exactly the digraph's vertices")
    pos = alpha.position
    cur = d
    steps: list[ReversalStep] = []
    limit = len(d.vertices) * (len(d.vertices) - 1) // 2 + 1
    while True:
        violating = sorted(a for a in cur.arcs if pos[a[0]] > pos[a[1]])
        if not violating:
            break
        legal = [a for a in violating if not _path_avoiding_arc(cur, a[0], a[1], a)]
        if policy == "latest-tail":
            pick = min(legal, key=lambda a: (-pos[a[0]], a))
        else:
            pick = min(legal, key=lambda a: (len(_compensating_arcs(cur, a)), a))
        cur, step = reverse_arc(cur, pick)
        steps.append(step)
        if len(steps) > limit:
            raise AssertionError("reordering exceeded its reversal bound")
    reversed_originals = frozenset((v, u) for u, v in d.arcs)
    new_arcs = cur.arcs - d.arcs - reversed_originals
    return ReorderResult(cur, tuple(steps), new_arcs)
