"""Exact brute-force solvers and greedy heuristics for the acyclicity
restoration problems on digraphs and digraph pairs.

Arc-set problems (deletion or plain flips): ``mfas`` deletes a minimum arc
set from one digraph, ``mrs`` flips one, ``dmrs`` flips arcs of the first
digraph only so the union with the second becomes acyclic, ``2dmrs`` flips
arcs of either.  Sequence problems use full reversal semantics with
compensating arcs: ``mnas`` reverses arcs of the first digraph, ``2mnas``
of both, minimizing the count of arcs present at the end that were in
neither the original arc set nor its reversal.

Exact solvers are deterministic enumeration oracles; the greedy solver
never reports infeasibility on instances the exact solver can handle.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass

from .digraph import (
    Arc,
    Digraph,
    enumerate_simple_cycles,
    is_acyclic,
    topological_ordering,
    union_digraph,
)
from .errors import DomainError, InfeasibleError, ScaleError
from .reversal import reorder, reverse_arc

PROBLEM_KINDS = ("mfas", "mrs", "dmrs", "2dmrs", "mnas", "2mnas")

DEFAULT_ARC_CAP = 16
DEFAULT_VERTEX_CAP = 9
DEFAULT_FRONTIER_CAP = 200_000
DEFAULT_SUBSET_BUDGET = 2_000_000

TaggedArc = tuple[int, Arc]


@dataclass(frozen=True)
class ArcSetSolution:
    """A minimum arc subset plus the acyclic digraph witnessing feasibility."""

    kind: str
    arcs: frozenset[Arc]
    objective: int
    certificate: Digraph

    def __post_init__(self) -> None:
        if self.objective != len(self.arcs):
            raise DomainError("objective must equal the solution cardinality")
        if not is_acyclic(self.certificate):
            raise DomainError("certificate digraph must be acyclic")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "arcs": [list(a) for a in sorted(self.arcs)],
            "objective": self.objective,
            "certificate": self.certificate.to_dict(),
        }


@dataclass(frozen=True)
class SequenceSolution:
    """A reversal sequence, its generated arcs (tagged by graph), and the
    acyclic union digraph it produces."""

    kind: str
    steps: tuple[TaggedArc, ...]
    new_arcs: frozenset[TaggedArc]
    objective: int
    certificate: Digraph

    def __post_init__(self) -> None:
        if self.objective != len(self.new_arcs):
            raise DomainError("objective must equal the new-arc count")
        if not is_acyclic(self.certificate):
            raise DomainError("certificate digraph must be acyclic")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "steps": [[g, list(a)] for g, a in self.steps],
            "new_arcs": [[g, list(a)] for g, a in sorted(self.new_arcs)],
            "objective": self.objective,
            "certificate": self.certificate.to_dict(),
        }


# --- shared internals -------------------------------------------------------

def _acyclic(vertices: frozenset[str], arcs) -> bool:
    indegree = dict.fromkeys(vertices, 0)
    succ: dict[str, list[str]] = {v: [] for v in vertices}
    for u, v in arcs:
        indegree[v] += 1
        succ[u].append(v)
    queue = deque(v for v, k in indegree.items() if k == 0)
    removed = 0
    while queue:
        u = queue.popleft()
        removed += 1
        for w in succ[u]:
            indegree[w] -= 1
            if indegree[w] == 0:
                queue.append(w)
    return removed == len(vertices)


def _flip(arcs: frozenset[Arc], chosen) -> frozenset[Arc]:
    chosen = set(chosen)
    return (arcs - chosen) | {(v, u) for u, v in chosen}


def _require_pair(d1: Digraph, d2: Digraph, *, acyclic: bool = True) -> None:
    if d1.vertices != d2.vertices:
        raise DomainError("paired instances must share one vertex set")
    if acyclic and (not is_acyclic(d1) or not is_acyclic(d2)):
        raise DomainError("paired instances must both be acyclic")


# --- exact arc-set solvers --------------------------------------------------

def solve_mfas_exact(
    d: Digraph,
    *,
    vertex_cap: int = DEFAULT_VERTEX_CAP,
    arc_cap: int = DEFAULT_ARC_CAP,
) -> ArcSetSolution:
    """Minimum arc set whose deletion leaves the digraph acyclic.

    Solved by scanning all vertex orderings for the smallest backward-arc
    set (deleting the backward arcs of any ordering is feasible, and every
    minimum deletion set arises that way); falls back to subset
    enumeration when the vertex count rules the scan out.  Ties go to the
    lexicographically least sorted arc list.
    """
    if len(d.vertices) <= vertex_cap:
        arcs = sorted(d.arcs)
        best: tuple[int, tuple[Arc, ...]] | None = None
        for perm in itertools.permutations(sorted(d.vertices)):
            pos = {v: i for i, v in enumerate(perm)}
            back = tuple(a for a in arcs if pos[a[0]] > pos[a[1]])
            key = (len(back), back)
            if best is None or key < best:
                best = key
        assert best is not None
        solution = frozenset(best[1])
        return ArcSetSolution(
            "mfas", solution, len(solution), Digraph(d.vertices, d.arcs - solution)
        )
    if len(d.arcs) <= arc_cap:
        arcs = sorted(d.arcs)
        for size in range(len(arcs) + 1):
            for combo in itertools.combinations(arcs, size):
                if _acyclic(d.vertices, d.arcs - set(combo)):
                    solution = frozenset(combo)
                    return ArcSetSolution(
                        "mfas", solution, size, Digraph(d.vertices, d.arcs - solution)
                    )
    raise ScaleError(
        f"deletion solver capped at {vertex_cap} vertices or {arc_cap} arcs"
    )


def solve_mrs_exact(d: Digraph, *, arc_cap: int = DEFAULT_ARC_CAP) -> ArcSetSolution:
    """Minimum arc set whose plain flip leaves the digraph acyclic,
    by subset enumeration in increasing size."""
    if len(d.arcs) > arc_cap:
        raise ScaleError(f"flip solver capped at {arc_cap} arcs, got {len(d.arcs)}")
    arcs = sorted(d.arcs)
    for size in range(len(arcs) + 1):
        for combo in itertools.combinations(arcs, size):
            flipped = _flip(d.arcs, combo)
            if _acyclic(d.vertices, flipped):
                return ArcSetSolution(
                    "mrs", frozenset(combo), size, Digraph(d.vertices, flipped)
                )
    raise AssertionError("flipping every arc always yields an acyclic digraph")


def solve_dmrs_exact(
    d1: Digraph,
    d2: Digraph,
    *,
    arc_cap: int = DEFAULT_ARC_CAP,
    subset_budget: int = DEFAULT_SUBSET_BUDGET,
) -> ArcSetSolution:
    """Minimum subset of the first digraph's arcs to flip so the union with
    the second becomes acyclic."""
    _require_pair(d1, d2)
    if len(d1.arcs) > arc_cap:
        raise ScaleError(f"flip solver capped at {arc_cap} arcs, got {len(d1.arcs)}")
    arcs = sorted(d1.arcs)
    checked = 0
    for size in range(len(arcs) + 1):
        for combo in itertools.combinations(arcs, size):
            checked += 1
            if checked > subset_budget:
                raise ScaleError(f"subset enumeration exceeded its budget of {subset_budget}")
            union = _flip(d1.arcs, combo) | d2.arcs
            if _acyclic(d1.vertices, union):
                return ArcSetSolution(
                    "dmrs", frozenset(combo), size, Digraph(d1.vertices, union)
                )
    raise InfeasibleError("no flip subset of the first digraph makes the union acyclic")


def solve_2dmrs_exact(
    d1: Digraph,
    d2: Digraph,
    *,
    arc_cap: int = DEFAULT_ARC_CAP,
    subset_budget: int = DEFAULT_SUBSET_BUDGET,
) -> ArcSetSolution:
    """Minimum subset of the combined arc set to flip so the modified union
    is acyclic.  A feasible subset always exists."""
    _require_pair(d1, d2)
    combined = d1.arcs | d2.arcs
    if len(combined) > arc_cap:
        raise ScaleError(f"flip solver capped at {arc_cap} arcs, got {len(combined)}")
    arcs = sorted(combined)
    checked = 0
    for size in range(len(arcs) + 1):
        for combo in itertools.combinations(arcs, size):
            checked += 1
            if checked > subset_budget:
                raise ScaleError(f"subset enumeration exceeded its budget of {subset_budget}")
            flipped = _flip(combined, combo)
            if _acyclic(d1.vertices, flipped):
                return ArcSetSolution(
                    "2dmrs", frozenset(combo), size, Digraph(d1.vertices, flipped)
                )
    raise AssertionError("flipping every arc always yields an acyclic digraph")


# --- sequence solvers -------------------------------------------------------

def _parent_map(arcs) -> dict[str, set[str]]:
    pred: dict[str, set[str]] = {}
    for u, v in arcs:
        pred.setdefault(v, set()).add(u)
    return pred


def _reversal_added(arcs: frozenset[Arc], pred: dict[str, set[str]], arc: Arc) -> frozenset[Arc]:
    u, v = arc
    pu = pred.get(u, set())
    pv = pred.get(v, set()) - {u}
    added = {(w, v) for w in pu - pv} | {(w, u) for w in pv - pu}
    return frozenset(added) - arcs


def _legal_in(arcs, vertices, arc: Arc) -> bool:
    u, v = arc
    succ: dict[str, list[str]] = {w: [] for w in vertices}
    for a in arcs:
        if a != arc:
            succ[a[0]].append(a[1])
    seen = {u}
    stack = [u]
    while stack:
        w = stack.pop()
        for nxt in succ[w]:
            if nxt == v:
                return False
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return True


def _symmetric(arcs: frozenset[Arc]) -> frozenset[Arc]:
    return arcs | frozenset((v, u) for u, v in arcs)


def _sequence_search(
    kind: str,
    d1: Digraph,
    d2: Digraph,
    movable: tuple[int, ...],
    frontier_cap: int,
) -> SequenceSolution:
    """Bounded-cost breadth-first search over reversal states.

    The new-arc tally never decreases along a sequence (a flip exchanges
    an arc for its reverse, and the baseline is closed under reversal), so
    scanning cost bounds upward and, within a bound, sequence lengths in
    breadth-first order finds an optimum first.  Expansion order is
    deterministic: graph index, then arc identifier.
    """
    vertices = d1.vertices
    bases = (_symmetric(d1.arcs), _symmetric(d2.arcs))
    start = (d1.arcs, d2.arcs)
    length_cap = (len(d1.arcs) + len(d2.arcs)) * max(1, len(vertices))

    def new_tagged(state: tuple[frozenset[Arc], frozenset[Arc]]) -> frozenset[TaggedArc]:
        return frozenset(
            (g, a) for g in (0, 1) for a in state[g] - bases[g]
        )

    def finish(state, steps) -> SequenceSolution:
        new = new_tagged(state)
        cert = Digraph(vertices, state[0] | state[1])
        return SequenceSolution(kind, tuple(steps), new, len(new), cert)

    if _acyclic(vertices, start[0] | start[1]):
        return finish(start, [])

    max_bound = 2 * len(vertices) * max(0, len(vertices) - 1)
    for bound in range(0, max_bound + 1):
        visited = {start}
        parent: dict = {start: None}
        queue = deque([(start, 0)])
        while queue:
            state, depth = queue.popleft()
            if depth >= length_cap:
                raise ScaleError(f"sequence length exceeded its cap of {length_cap}")
            for g in movable:
                arcs_g = state[g]
                pred = _parent_map(arcs_g)
                for arc in sorted(arcs_g):
                    added = _reversal_added(arcs_g, pred, arc)
                    flipped = (arcs_g - {arc}) | {(arc[1], arc[0])} | added
                    nxt_g = frozenset(flipped)
                    nxt = (nxt_g, state[1]) if g == 0 else (state[0], nxt_g)
                    if len(new_tagged(nxt)) > bound:
                        continue
                    if nxt in visited:
                        continue
                    if not _legal_in(arcs_g, vertices, arc):
                        continue
                    visited.add(nxt)
                    if len(visited) > frontier_cap:
                        raise ScaleError(
                            f"search frontier exceeded its cap of {frontier_cap}"
                        )
                    parent[nxt] = (state, (g, arc))
                    if _acyclic(vertices, nxt[0] | nxt[1]):
                        steps: list[TaggedArc] = []
                        cur = nxt
                        while parent[cur] is not None:
                            cur, step = parent[cur]
                            steps.append(step)
                        steps.reverse()
                        return finish(nxt, steps)
                    queue.append((nxt, depth + 1))
    raise AssertionError("every instance admits a rearrangement with finitely many new arcs")


def solve_mnas_exact(
    d1: Digraph, d2: Digraph, *, frontier_cap: int = DEFAULT_FRONTIER_CAP
) -> SequenceSolution:
    """Reversal sequence on the first digraph minimizing the arcs generated,
    subject to the union with the second being acyclic."""
    _require_pair(d1, d2)
    return _sequence_search("mnas", d1, d2, (0,), frontier_cap)


def solve_2mnas_exact(
    d1: Digraph, d2: Digraph, *, frontier_cap: int = DEFAULT_FRONTIER_CAP
) -> SequenceSolution:
    """Same objective with reversals allowed on either digraph.  Arcs
    generated in each digraph count separately."""
    _require_pair(d1, d2)
    return _sequence_search("2mnas", d1, d2, (0, 1), frontier_cap)


def replay_steps(
    d1: Digraph, d2: Digraph, steps
) -> tuple[tuple[Digraph, Digraph], frozenset[TaggedArc]]:
    """Re-execute a tagged reversal sequence, returning the final digraphs
    and the tagged new-arc set.  Raises if any step is illegal."""
    _require_pair(d1, d2)
    graphs = [d1, d2]
    for g, arc in steps:
        if g not in (0, 1):
            raise DomainError(f"step graph index must be 0 or 1, got {g!r}")
        graphs[g], _ = reverse_arc(graphs[g], tuple(arc))
    new = frozenset(
        (g, a)
        for g, (orig, final) in enumerate(zip((d1, d2), graphs))
        for a in final.arcs - _symmetric(orig.arcs)
    )
    return (graphs[0], graphs[1]), new


# --- greedy heuristics ------------------------------------------------------

def _cycle_arc_counts(d: Digraph, cycle_cap: int) -> dict[Arc, int]:
    counts: dict[Arc, int] = {}
    for cycle in enumerate_simple_cycles(d, cycle_cap):
        for a in cycle.arcs:
            counts[a] = counts.get(a, 0) + 1
    return counts


def _greedy_delete(d: Digraph, cycle_cap: int) -> ArcSetSolution:
    cur = d.arcs
    removed: set[Arc] = set()
    while not _acyclic(d.vertices, cur):
        counts = _cycle_arc_counts(Digraph(d.vertices, cur), cycle_cap)
        pick = min(counts, key=lambda a: (-counts[a], a))
        removed.add(pick)
        cur = cur - {pick}
    return ArcSetSolution("mfas", frozenset(removed), len(removed), Digraph(d.vertices, cur))


def _greedy_flip(kind: str, d: Digraph, cycle_cap: int) -> ArcSetSolution:
    cur = d.arcs
    flipped: set[Arc] = set()
    while not _acyclic(d.vertices, cur):
        counts = _cycle_arc_counts(Digraph(d.vertices, cur), cycle_cap)
        eligible = [a for a in counts if (a[1], a[0]) not in flipped]
        if not eligible:
            # dead end: fall back to flipping the backward arcs of the
            # identifier order, which is always feasible
            order = {v: i for i, v in enumerate(sorted(d.vertices))}
            back = {a for a in d.arcs if order[a[0]] > order[a[1]]}
            return ArcSetSolution(
                kind, frozenset(back), len(back), Digraph(d.vertices, _flip(d.arcs, back))
            )
        pick = min(eligible, key=lambda a: (-counts[a], a))
        flipped.add(pick)
        cur = (cur - {pick}) | {(pick[1], pick[0])}
    return ArcSetSolution(kind, frozenset(flipped), len(flipped), Digraph(d.vertices, cur))


def _greedy_flip_first_only(d1: Digraph, d2: Digraph, cycle_cap: int) -> ArcSetSolution:
    vertices = d1.vertices
    cur1 = d1.arcs
    flipped: set[Arc] = set()
    while not _acyclic(vertices, cur1 | d2.arcs):
        union = Digraph(vertices, cur1 | d2.arcs)
        cycles = enumerate_simple_cycles(union, cycle_cap)
        if any(not (set(c.arcs) & cur1) for c in cycles):
            raise InfeasibleError(
                "a cycle uses only arcs of the second digraph; no flip subset can break it"
            )
        counts: dict[Arc, int] = {}
        for c in cycles:
            for a in c.arcs:
                if a in cur1:
                    counts[a] = counts.get(a, 0) + 1
        eligible = [a for a in counts if (a[1], a[0]) not in flipped]
        if not eligible:
            # fall back to flipping the first digraph's backward arcs under
            # an ordering consistent with the second digraph
            alpha = topological_ordering(d2)
            pos = alpha.position
            back = {a for a in d1.arcs if pos[a[0]] > pos[a[1]]}
            return ArcSetSolution(
                "dmrs",
                frozenset(back),
                len(back),
                Digraph(vertices, _flip(d1.arcs, back) | d2.arcs),
            )
        pick = min(eligible, key=lambda a: (-counts[a], a))
        flipped.add(pick)
        cur1 = (cur1 - {pick}) | {(pick[1], pick[0])}
    return ArcSetSolution(
        "dmrs", frozenset(flipped), len(flipped), Digraph(vertices, cur1 | d2.arcs)
    )


def _greedy_sequence(
    kind: str, d1: Digraph, d2: Digraph, movable: tuple[int, ...], cycle_cap: int
) -> SequenceSolution:
    vertices = d1.vertices
    graphs = [d1, d2]
    bases = (_symmetric(d1.arcs), _symmetric(d2.arcs))
    steps: list[TaggedArc] = []
    iteration_cap = (len(d1.arcs) + len(d2.arcs)) * max(1, len(vertices)) + 1

    def finish() -> SequenceSolution:
        new = frozenset(
            (g, a) for g in (0, 1) for a in graphs[g].arcs - bases[g]
        )
        cert = Digraph(vertices, graphs[0].arcs | graphs[1].arcs)
        return SequenceSolution(kind, tuple(steps), new, len(new), cert)

    while not _acyclic(vertices, graphs[0].arcs | graphs[1].arcs):
        fallback = len(steps) >= iteration_cap
        candidates: list[tuple[int, int, Arc]] = []
        if not fallback:
            union = Digraph(vertices, graphs[0].arcs | graphs[1].arcs)
            on_cycles = {a for c in enumerate_simple_cycles(union, cycle_cap) for a in c.arcs}
            for g in movable:
                arcs_g = graphs[g].arcs
                pred = _parent_map(arcs_g)
                for arc in sorted(arcs_g):
                    if arc not in on_cycles:
                        continue
                    if not _legal_in(arcs_g, vertices, arc):
                        continue
                    cost = len(_reversal_added(arcs_g, pred, arc))
                    candidates.append((cost, g, arc))
        if fallback or not candidates:
            # rearrange the first digraph toward an ordering consistent
            # with the second; always terminates and is always feasible
            rr = reorder(graphs[0], topological_ordering(d2))
            steps.extend((0, s.arc) for s in rr.steps)
            graphs[0] = rr.digraph
            break
        _, g, arc = min(candidates)
        graphs[g], _ = reverse_arc(graphs[g], arc)
        steps.append((g, arc))
    return finish()


def solve_greedy(
    kind: str,
    digraphs: tuple[Digraph, ...],
    *,
    cycle_cap: int = 12,
) -> ArcSetSolution | SequenceSolution:
    """Greedy heuristic for any of the six problems.

    Arc-set problems repeatedly remove or flip the arc lying on the most
    currently enumerable cycles (ties by identifier); sequence problems
    repeatedly apply the legal reversal that breaks a union cycle with the
    fewest immediately added arcs.  Deterministic, always terminates, and
    feasible whenever the exact problem is feasible.
    """
    if kind not in PROBLEM_KINDS:
        raise DomainError(f"unknown problem kind: {kind!r}")
    if kind in ("mfas", "mrs"):
        if len(digraphs) != 1:
            raise DomainError(f"{kind} takes exactly one digraph")
        d = digraphs[0]
        return _greedy_delete(d, cycle_cap) if kind == "mfas" else _greedy_flip("mrs", d, cycle_cap)
    if len(digraphs) != 2:
        raise DomainError(f"{kind} takes exactly two digraphs")
    d1, d2 = digraphs
    if kind == "dmrs":
        _require_pair(d1, d2)
        return _greedy_flip_first_only(d1, d2, cycle_cap)
    if kind == "2dmrs":
        _require_pair(d1, d2)
        merged = _greedy_flip("2dmrs", union_digraph([d1, d2]), cycle_cap)
        return merged
    _require_pair(d1, d2)
    movable = (0,) if kind == "mnas" else (0, 1)
    return _greedy_sequence(kind, d1, d2, movable, cycle_cap)
