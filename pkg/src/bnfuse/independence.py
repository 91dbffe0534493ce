"""Independence statements, separation in DAGs, and closure under the
compositional axioms those models obey.

A statement I(X, Z, Y) reads "X is independent of Y given Z".  Statements
are stored canonically, with the lexicographically smaller side set first,
which makes membership queries symmetric for free.  Exhaustive operations
(full model extraction, closure) are capped by universe size and raise
:class:`~bnfuse.errors.ScaleError` beyond the cap.

Internally, vertex sets are mapped to bitmasks over the sorted universe;
separation queries run on the moralized ancestral subgraph.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .digraph import Digraph, Ordering, is_acyclic
from .errors import DomainError, ScaleError

DEFAULT_UNIVERSE_CAP = 6


@dataclass(frozen=True)
class IStatement:
    """One canonical independence triple over disjoint vertex sets."""

    X: frozenset[str]
    Z: frozenset[str]
    Y: frozenset[str]

    def __post_init__(self) -> None:
        x = frozenset(self.X)
        z = frozenset(self.Z)
        y = frozenset(self.Y)
        if not x or not y:
            raise DomainError("side sets of a statement must be nonempty")
        if x & y or x & z or y & z:
            raise DomainError("statement sets must be pairwise disjoint")
        if tuple(sorted(y)) < tuple(sorted(x)):
            x, y = y, x
        object.__setattr__(self, "X", x)
        object.__setattr__(self, "Z", z)
        object.__setattr__(self, "Y", y)

    def support(self) -> frozenset[str]:
        return self.X | self.Z | self.Y

    def sort_key(self) -> tuple:
        return (tuple(sorted(self.X)), tuple(sorted(self.Z)), tuple(sorted(self.Y)))

    def to_dict(self) -> dict:
        return {"X": sorted(self.X), "Z": sorted(self.Z), "Y": sorted(self.Y)}

    @classmethod
    def from_dict(cls, data: dict) -> "IStatement":
        try:
            return cls(frozenset(data["X"]), frozenset(data["Z"]), frozenset(data["Y"]))
        except (TypeError, KeyError) as exc:
            raise DomainError(f"malformed statement object: {exc}") from exc


@dataclass(frozen=True)
class DependencyModel:
    """A set of canonical independence statements over a fixed universe."""

    universe: frozenset[str]
    statements: frozenset[IStatement] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "universe", frozenset(self.universe))
        object.__setattr__(self, "statements", frozenset(self.statements))
        for s in self.statements:
            if not s.support() <= self.universe:
                raise DomainError("statement mentions vertices outside the universe")

    def __len__(self) -> int:
        return len(self.statements)

    def __contains__(self, item) -> bool:
        if isinstance(item, IStatement):
            return item in self.statements
        x, z, y = item
        return IStatement(frozenset(x), frozenset(z), frozenset(y)) in self.statements

    def to_dict(self) -> dict:
        return {
            "universe": sorted(self.universe),
            "statements": [s.to_dict() for s in sorted(self.statements, key=IStatement.sort_key)],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DependencyModel":
        if not isinstance(data, dict) or "universe" not in data or "statements" not in data:
            raise DomainError("a model object needs 'universe' and 'statements' keys")
        stmts = frozenset(IStatement.from_dict(s) for s in data["statements"])
        return cls(frozenset(data["universe"]), stmts)


@dataclass(frozen=True)
class BasisEntry:
    """Per-vertex boundary/remainder split of its ordering predecessors."""

    vertex: str
    boundary: frozenset[str]
    remainder: frozenset[str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "boundary", frozenset(self.boundary))
        object.__setattr__(self, "remainder", frozenset(self.remainder))
        if self.boundary & self.remainder:
            raise DomainError("boundary and remainder must be disjoint")


@dataclass(frozen=True)
class RecursiveBasis:
    """Per-vertex statements I(v, B(v), R(v)) drawn relative to one ordering.

    Entries cover every vertex except the first in the ordering.  Entries
    with an empty remainder are trivial: they still generate arcs but
    contribute no statement.
    """

    ordering: Ordering
    entries: tuple[BasisEntry, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(self.entries))
        expected = self.ordering.sequence[1:]
        if tuple(e.vertex for e in self.entries) != expected:
            raise DomainError("basis entries must follow the ordering, skipping its first vertex")
        for e in self.entries:
            if e.boundary | e.remainder != self.ordering.predecessors(e.vertex):
                raise DomainError(
                    f"entry for {e.vertex!r} must split exactly its ordering predecessors"
                )

    def statements(self) -> tuple[IStatement, ...]:
        """The non-trivial statements of the basis (empty remainders dropped)."""
        return tuple(
            IStatement(frozenset({e.vertex}), e.boundary, e.remainder)
            for e in self.entries
            if e.remainder
        )

    def to_dict(self) -> dict:
        return {
            "ordering": list(self.ordering.sequence),
            "entries": [
                {
                    "vertex": e.vertex,
                    "boundary": sorted(e.boundary),
                    "remainder": sorted(e.remainder),
                }
                for e in self.entries
            ],
        }


# --- bitmask engine -------------------------------------------------------

def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _submasks(mask: int) -> Iterator[int]:
    """All nonempty submasks of ``mask``, largest first."""
    sub = mask
    while sub:
        yield sub
        sub = (sub - 1) & mask


def _mask_of(names_pos: dict[str, int], vs: Iterable[str]) -> int:
    mask = 0
    for v in vs:
        mask |= 1 << names_pos[v]
    return mask


def _set_of(names: Sequence[str], mask: int) -> frozenset[str]:
    return frozenset(names[i] for i in _bits(mask))


def _parent_masks(d: Digraph, names_pos: dict[str, int]) -> list[int]:
    par = [0] * len(names_pos)
    for u, v in d.arcs:
        par[names_pos[v]] |= 1 << names_pos[u]
    return par


def _dsep_masks(par: list[int], x: int, z: int, y: int) -> bool:
    """Separation test on the moralized ancestral subgraph, all in bitmasks."""
    anc = x | y | z
    while True:
        grown = anc
        for i in _bits(anc):
            grown |= par[i]
        if grown == anc:
            break
        anc = grown
    # moral adjacency within the ancestral set: arcs undirected, parents married
    adj = [0] * len(par)
    for v in _bits(anc):
        ps = par[v] & anc
        for p in _bits(ps):
            adj[p] |= 1 << v
            adj[v] |= 1 << p
            adj[p] |= ps & ~(1 << p)
    reach = x
    frontier = x
    blocked = z
    while frontier:
        grown = 0
        for v in _bits(frontier):
            grown |= adj[v]
        frontier = grown & anc & ~blocked & ~reach
        reach |= frontier
    return not (reach & y)


# --- public operations ----------------------------------------------------

def d_separated(d: Digraph, X: Iterable[str], Z: Iterable[str], Y: Iterable[str]) -> bool:
    """Return whether ``Z`` separates ``X`` from ``Y`` in an acyclic digraph.

    ``X`` and ``Y`` must be nonempty and the three sets pairwise disjoint;
    every mentioned vertex must belong to the digraph.
    """
    xs, zs, ys = frozenset(X), frozenset(Z), frozenset(Y)
    if not xs or not ys:
        raise DomainError("separation queries need nonempty side sets")
    if xs & ys or xs & zs or ys & zs:
        raise DomainError("separation queries need pairwise disjoint sets")
    if not (xs | ys | zs) <= d.vertices:
        raise DomainError("separation query mentions unknown vertices")
    if not is_acyclic(d):
        raise DomainError("separation is defined on acyclic digraphs only")
    names = sorted(d.vertices)
    pos = {v: i for i, v in enumerate(names)}
    par = _parent_masks(d, pos)
    return _dsep_masks(par, _mask_of(pos, xs), _mask_of(pos, zs), _mask_of(pos, ys))


def dsep_model(d: Digraph, max_universe: int = DEFAULT_UNIVERSE_CAP) -> DependencyModel:
    """Every canonical statement over the digraph's vertices that its
    structure verifies, by exhaustive enumeration."""
    if not is_acyclic(d):
        raise DomainError("separation models are defined on acyclic digraphs only")
    n = len(d.vertices)
    if n > max_universe:
        raise ScaleError(f"full model extraction capped at {max_universe} vertices, got {n}")
    names = sorted(d.vertices)
    pos = {v: i for i, v in enumerate(names)}
    par = _parent_masks(d, pos)
    full = (1 << n) - 1
    statements = []
    for x in range(1, full + 1):
        rest = full & ~x
        for y in _submasks(rest):
            if y < x:
                continue
            for z in _submasks(rest & ~y):
                if _dsep_masks(par, x, z, y):
                    statements.append(
                        IStatement(_set_of(names, x), _set_of(names, z), _set_of(names, y))
                    )
            if _dsep_masks(par, x, 0, y):
                statements.append(
                    IStatement(_set_of(names, x), frozenset(), _set_of(names, y))
                )
    return DependencyModel(frozenset(d.vertices), frozenset(statements))


def graphoid_closure(
    statements: Iterable[IStatement] | DependencyModel,
    universe: Iterable[str] | None = None,
    *,
    intersectional: bool = True,
    max_universe: int = DEFAULT_UNIVERSE_CAP,
) -> DependencyModel:
    """Least fixpoint of the closure axioms over a statement set.

    The rules applied are symmetry (implicit in canonical storage),
    decomposition, weak union, contraction, and — when ``intersectional``
    is true — intersection.  Decomposition and weak union enumerate every
    split of the second set; the two binary rules join statement pairs
    sharing a first set with compatible conditioning sets.  The fixpoint
    is exponential in the universe size and therefore capped.
    """
    if isinstance(statements, DependencyModel):
        if universe is None:
            universe = statements.universe
        statements = statements.statements
    stmts = list(statements)
    if universe is None:
        uni: frozenset[str] = frozenset().union(*(s.support() for s in stmts)) if stmts else frozenset()
    else:
        uni = frozenset(universe)
    for s in stmts:
        if not s.support() <= uni:
            raise DomainError("statement mentions vertices outside the universe")
    n = len(uni)
    if n > max_universe:
        raise ScaleError(f"closure capped at {max_universe} vertices, got {n}")
    names = sorted(uni)
    pos = {v: i for i, v in enumerate(names)}

    seen: set[tuple[int, int, int]] = set()
    by_xz: dict[tuple[int, int], list[int]] = {}
    queue: deque[tuple[int, int, int]] = deque()

    def push(x: int, z: int, y: int) -> None:
        if (x, z, y) in seen:
            return
        for a, b in ((x, y), (y, x)):
            seen.add((a, z, b))
            by_xz.setdefault((a, z), []).append(b)
            queue.append((a, z, b))

    for s in stmts:
        push(_mask_of(pos, s.X), _mask_of(pos, s.Z), _mask_of(pos, s.Y))

    while queue:
        x, z, t = queue.popleft()
        # decomposition and weak union over every split of the second set
        for sub in _submasks(t):
            if sub == t:
                continue
            push(x, z, sub)
            push(x, z | (t ^ sub), sub)
        # contraction, this statement as the first premise
        for w in by_xz.get((x, z | t), ()):
            push(x, z, t | w)
        # contraction, this statement as the second premise
        for y1 in _submasks(z):
            if (x, z ^ y1, y1) in seen:
                push(x, z ^ y1, y1 | t)
        if intersectional:
            for yy in _submasks(z):
                if (x, (z ^ yy) | t, yy) in seen:
                    push(x, z ^ yy, yy | t)

    out = {
        IStatement(_set_of(names, x), _set_of(names, z), _set_of(names, y))
        for x, z, y in seen
    }
    return DependencyModel(uni, frozenset(out))


def count_nontrivial_istatements(n: int, *, canonical: bool = True) -> int:
    """Number of non-trivial statements over ``n`` variables.

    A triple (X, Z, Y) is non-trivial when X and Y are both nonempty; Z may
    be empty.  Assigning each variable to one of X, Y, Z, or none and
    excluding the assignments that empty X or Y gives the ordered count;
    halving collapses each symmetric pair.
    """
    if n < 1:
        raise DomainError("variable count must be positive")
    ordered = 4**n - 2 * 3**n + 2**n
    return ordered // 2 if canonical else ordered


def _require_shared_universe(ms: Sequence[DependencyModel]) -> frozenset[str]:
    if not ms:
        raise DomainError("at least one model is required")
    universe = ms[0].universe
    for m in ms[1:]:
        if m.universe != universe:
            raise DomainError("models must share one universe")
    return universe


def is_imap(m_sub: DependencyModel, m: DependencyModel) -> bool:
    """True iff every statement of ``m_sub`` also holds in ``m``."""
    _require_shared_universe((m_sub, m))
    return m_sub.statements <= m.statements


def is_perfect_map(m1: DependencyModel, m2: DependencyModel) -> bool:
    """True iff the two models assert exactly the same statements."""
    _require_shared_universe((m1, m2))
    return m1.statements == m2.statements


def model_intersection(ms: Sequence[DependencyModel]) -> DependencyModel:
    universe = _require_shared_universe(ms)
    stmts = frozenset.intersection(*(m.statements for m in ms))
    return DependencyModel(universe, stmts)


def model_union(ms: Sequence[DependencyModel]) -> DependencyModel:
    universe = _require_shared_universe(ms)
    stmts = frozenset.union(*(m.statements for m in ms))
    return DependencyModel(universe, stmts)
