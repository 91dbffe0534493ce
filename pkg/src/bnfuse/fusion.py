"""Fusing the structures of independently built networks: basis extraction
relative to arbitrary orderings, combination across expert subsets,
union-DAG consensus construction, and ordering search.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

from .digraph import Digraph, Ordering, is_acyclic
from .errors import DomainError, ScaleError
from .independence import (
    DEFAULT_UNIVERSE_CAP,
    BasisEntry,
    DependencyModel,
    IStatement,
    RecursiveBasis,
    _bits,
    _dsep_masks,
    _parent_masks,
    _set_of,
    graphoid_closure,
)
from .reversal import reorder

OBJECTIVES = ("retained-independencies", "min-new-arcs", "min-union-arcs")

DEFAULT_ORDERING_CAP = 7
DEFAULT_SUBSET_CAP = 1000


@dataclass(frozen=True)
class ExpertSet:
    """The acyclic digraphs contributed by m experts over one vertex set."""

    dags: tuple[Digraph, ...]
    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "dags", tuple(self.dags))
        object.__setattr__(self, "labels", tuple(self.labels))
        if not self.dags:
            raise DomainError("an expert set needs at least one digraph")
        if len(self.dags) != len(self.labels):
            raise DomainError("one label per digraph is required")
        if len(set(self.labels)) != len(self.labels):
            raise DomainError("expert labels must be unique")
        universe = self.dags[0].vertices
        for d in self.dags:
            if d.vertices != universe:
                raise DomainError("expert digraphs must share one vertex set")
            if not is_acyclic(d):
                raise DomainError("expert digraphs must be acyclic")

    @property
    def universe(self) -> frozenset[str]:
        return self.dags[0].vertices

    def dag(self, label: str) -> Digraph:
        try:
            return self.dags[self.labels.index(label)]
        except ValueError:
            raise DomainError(f"unknown expert label: {label!r}") from None

    def to_dict(self) -> dict:
        return {
            "experts": [
                {"label": label, **dag.to_dict()}
                for label, dag in zip(self.labels, self.dags)
            ]
        }

    @classmethod
    def from_dict(cls, data) -> "ExpertSet":
        if isinstance(data, dict):
            data = data.get("experts")
        if not isinstance(data, list) or not data:
            raise DomainError("an expert file is a nonempty JSON list of labelled digraphs")
        labels = []
        dags = []
        for entry in data:
            if not isinstance(entry, dict) or "label" not in entry:
                raise DomainError("each expert entry needs a 'label'")
            labels.append(entry["label"])
            dags.append(Digraph.from_dict(entry))
        return cls(tuple(dags), tuple(labels))


@dataclass(frozen=True)
class ConsensusRequest:
    """Agreement threshold plus the ordering and expert subset to fuse under."""

    k: int
    ordering: Ordering | None = None
    subset: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if self.k < 1:
            raise DomainError("agreement threshold k must be at least 1")
        if self.subset is not None:
            object.__setattr__(self, "subset", tuple(self.subset))
            if len(self.subset) != self.k:
                raise DomainError("an explicit subset must contain exactly k labels")


def recursive_basis(d: Digraph, alpha: Ordering) -> RecursiveBasis:
    """Draw the unique basis of an acyclic digraph relative to any ordering.

    For each vertex, the boundary B(v) is the minimal subset of its
    ordering predecessors that separates it from the rest of them; a
    predecessor belongs to the boundary exactly when removing it from the
    conditioning set reconnects it to v.  When the ordering is consistent
    with the digraph this yields precisely the parent sets.
    """
    if not is_acyclic(d):
        raise DomainError("bases are drawn from acyclic digraphs only")
    if set(alpha.sequence) != set(d.vertices):
        raise DomainError("ordering must cover exactly the digraph's vertices")
    names = sorted(d.vertices)
    pos = {v: i for i, v in enumerate(names)}
    par = _parent_masks(d, pos)
    entries: list[BasisEntry] = []
    preds_mask = 0
    for i, v in enumerate(alpha.sequence):
        vbit = 1 << pos[v]
        if i > 0:
            boundary = 0
            for u in _bits(preds_mask):
                ubit = 1 << u
                if not _dsep_masks(par, vbit, preds_mask & ~ubit, ubit):
                    boundary |= ubit
            entries.append(
                BasisEntry(v, _set_of(names, boundary), _set_of(names, preds_mask & ~boundary))
            )
        preds_mask |= vbit
    return RecursiveBasis(alpha, tuple(entries))


def recursive_basis_from_model(model: DependencyModel, alpha: Ordering) -> RecursiveBasis:
    """Draw a basis directly from an explicit model by membership queries.

    The model must behave like an intersectional closure on the queried
    statements, otherwise the boundary produced is not a separator and a
    domain error is raised.
    """
    if set(alpha.sequence) != set(model.universe):
        raise DomainError("ordering must cover exactly the model's universe")
    entries: list[BasisEntry] = []
    for i, v in enumerate(alpha.sequence):
        if i == 0:
            continue
        preds = alpha.predecessors(v)
        boundary = frozenset(
            u
            for u in preds
            if IStatement(frozenset({v}), preds - {u}, frozenset({u})) not in model.statements
        )
        remainder = preds - boundary
        if remainder:
            stmt = IStatement(frozenset({v}), boundary, remainder)
            if stmt not in model.statements:
                raise DomainError(
                    "model is not closed enough for a unique basis "
                    f"(boundary of {v!r} fails to separate)"
                )
        entries.append(BasisEntry(v, boundary, remainder))
    return RecursiveBasis(alpha, tuple(entries))


def dag_from_basis(basis: RecursiveBasis) -> Digraph:
    """The digraph a basis generates: one arc into each vertex per boundary
    member.  Acyclic by construction, since every arc points forward."""
    arcs = {
        (u, e.vertex) for e in basis.entries for u in e.boundary
    }
    return Digraph(frozenset(basis.ordering.sequence), frozenset(arcs))


def unified_recursive_basis(bases: list[RecursiveBasis]) -> RecursiveBasis:
    """Combine bases drawn relative to one ordering: per vertex, the union
    of the boundaries and the intersection of the remainders."""
    if not bases:
        raise DomainError("at least one basis is required")
    first = bases[0]
    for b in bases[1:]:
        if b.ordering != first.ordering:
            raise DomainError("all bases must be drawn relative to the same ordering")
    entries: list[BasisEntry] = []
    for position, entry in enumerate(first.entries):
        boundary = frozenset().union(*(b.entries[position].boundary for b in bases))
        preds = entry.boundary | entry.remainder
        entries.append(BasisEntry(entry.vertex, boundary, preds - boundary))
    return RecursiveBasis(first.ordering, tuple(entries))


def _resolve_subset(experts: ExpertSet, request: ConsensusRequest) -> tuple[str, ...]:
    if request.subset is not None:
        for label in request.subset:
            experts.dag(label)
        return request.subset
    if request.k == len(experts.labels):
        return experts.labels
    raise DomainError("an explicit subset is required when k is less than the expert count")


def consensus_dag(experts: ExpertSet, request: ConsensusRequest) -> Digraph:
    """The union-DAG consensus for one expert subset under one ordering:
    the digraph generated by the unified basis of the subset's bases."""
    if request.ordering is None:
        raise DomainError("a consensus request needs an explicit ordering")
    subset = _resolve_subset(experts, request)
    bases = [recursive_basis(experts.dag(label), request.ordering) for label in subset]
    return dag_from_basis(unified_recursive_basis(bases))


def consensus_all_subsets(
    experts: ExpertSet,
    k: int,
    alpha: Ordering,
    max_subsets: int = DEFAULT_SUBSET_CAP,
) -> list[tuple[tuple[str, ...], Digraph]]:
    """One consensus digraph per size-k expert subset, subsets in
    lexicographic label order."""
    m = len(experts.labels)
    if not 1 <= k <= m:
        raise DomainError(f"k must be between 1 and {m}")
    if comb(m, k) > max_subsets:
        raise ScaleError(f"{comb(m, k)} subsets exceed the cap of {max_subsets}")
    out = []
    for subset in itertools.combinations(sorted(experts.labels), k):
        dag = consensus_dag(experts, ConsensusRequest(k, alpha, subset))
        out.append((subset, dag))
    return out


def retained_independencies(
    experts: ExpertSet,
    subset: tuple[str, ...],
    alpha: Ordering,
    *,
    max_universe: int = DEFAULT_UNIVERSE_CAP,
) -> int:
    """How many canonical non-trivial statements the fused structure keeps:
    the closure size of the unified basis drawn under ``alpha``."""
    bases = [recursive_basis(experts.dag(label), alpha) for label in subset]
    unified = unified_recursive_basis(bases)
    closure = graphoid_closure(
        unified.statements(),
        experts.universe,
        intersectional=True,
        max_universe=max_universe,
    )
    return len(closure)


def _new_arc_total(experts: ExpertSet, subset: tuple[str, ...], alpha: Ordering) -> int:
    return sum(len(reorder(experts.dag(label), alpha).new_arcs) for label in subset)


def search_ordering_exhaustive(
    experts: ExpertSet,
    subset: tuple[str, ...],
    objective: str,
    *,
    max_vertices: int = DEFAULT_ORDERING_CAP,
    max_universe: int = DEFAULT_UNIVERSE_CAP,
) -> tuple[Ordering, int]:
    """Best ordering over all permutations under one of three objectives:
    maximal retained independencies, minimal new arcs across the subset's
    rearranged digraphs, or minimal consensus arc count.  Ties go to the
    lexicographically least permutation."""
    if objective not in OBJECTIVES:
        raise DomainError(f"unknown objective: {objective!r}")
    universe = experts.universe
    if len(universe) > max_vertices:
        raise ScaleError(
            f"exhaustive ordering search capped at {max_vertices} vertices, got {len(universe)}"
        )
    for label in subset:
        experts.dag(label)
    maximize = objective == "retained-independencies"
    best: tuple[Ordering, int] | None = None
    for perm in itertools.permutations(sorted(universe)):
        alpha = Ordering(perm)
        if objective == "retained-independencies":
            score = retained_independencies(experts, subset, alpha, max_universe=max_universe)
        elif objective == "min-new-arcs":
            score = _new_arc_total(experts, subset, alpha)
        else:
            request = ConsensusRequest(len(subset), alpha, subset)
            score = len(consensus_dag(experts, request).arcs)
        if best is None or (score > best[1] if maximize else score < best[1]):
            best = (alpha, score)
    assert best is not None
    return best


def search_ordering_greedy(
    experts: ExpertSet, subset: tuple[str, ...] | None = None
) -> Ordering:
    """Deterministic greedy ordering: repeatedly append the vertex whose
    placement forces the fewest arc reversals across the remaining graphs
    (arcs into it from vertices not yet placed), ties by identifier."""
    labels = experts.labels if subset is None else subset
    dags = [experts.dag(label) for label in labels]
    remaining = set(experts.universe)
    sequence: list[str] = []
    while remaining:
        def forced(x: str) -> int:
            return sum(
                1
                for d in dags
                for (y, w) in d.arcs
                if w == x and y != x and y in remaining
            )

        pick = min(sorted(remaining), key=lambda x: (forced(x), x))
        sequence.append(pick)
        remaining.remove(pick)
    return Ordering(tuple(sequence))
