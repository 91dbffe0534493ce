"""Directed graphs, total orderings, and the structural queries built on them.

Vertices are opaque string identifiers; everything labelled "deterministic"
breaks ties by sorting identifiers.  Arc sets may contain antiparallel pairs
(u, v) and (v, u) — operations that need a DAG assert acyclicity instead of
the type forbidding 2-cycles.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import DomainError, ScaleError

Arc = tuple[str, str]

DEFAULT_CYCLE_VERTEX_CAP = 12


@dataclass(frozen=True)
class Digraph:
    """A finite digraph: vertex set plus a set of ordered arcs, no self-loops."""

    vertices: frozenset[str]
    arcs: frozenset[Arc] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", frozenset(self.vertices))
        arcs = frozenset((u, v) for u, v in self.arcs)
        object.__setattr__(self, "arcs", arcs)
        for u, v in arcs:
            if u == v:
                raise DomainError(f"self-loop on vertex {u!r}")
            if u not in self.vertices or v not in self.vertices:
                raise DomainError(f"arc ({u!r}, {v!r}) has an endpoint outside the vertex set")

    @classmethod
    def from_arcs(cls, arcs: Iterable[Arc], vertices: Iterable[str] = ()) -> "Digraph":
        """Build a digraph from arcs, with the vertex set inferred from endpoints."""
        arc_set = frozenset((u, v) for u, v in arcs)
        verts = set(vertices)
        for u, v in arc_set:
            verts.add(u)
            verts.add(v)
        return cls(frozenset(verts), arc_set)

    def to_dict(self) -> dict:
        return {
            "vertices": sorted(self.vertices),
            "arcs": [list(a) for a in sorted(self.arcs)],
        }

    @classmethod
    def from_dict(cls, data) -> "Digraph":
        if not isinstance(data, dict) or "vertices" not in data or "arcs" not in data:
            raise DomainError("a digraph object needs 'vertices' and 'arcs' keys")
        vertices = data["vertices"]
        if not isinstance(vertices, list) or not all(isinstance(v, str) for v in vertices):
            raise DomainError("vertex identifiers must be a list of strings")
        try:
            arcs = frozenset((u, v) for u, v in data["arcs"])
        except (TypeError, ValueError) as exc:
            raise DomainError(f"arcs must be [tail, head] pairs: {exc}") from exc
        return cls(frozenset(vertices), arcs)


@dataclass(frozen=True)
class Ordering:
    """A total order on a vertex set, as a permutation plus its inverse map."""

    sequence: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "sequence", tuple(self.sequence))
        if len(set(self.sequence)) != len(self.sequence):
            raise DomainError("ordering repeats a vertex")

    @cached_property
    def position(self) -> Mapping[str, int]:
        return {v: i for i, v in enumerate(self.sequence)}

    def rank(self, v: str) -> int:
        try:
            return self.position[v]
        except KeyError:
            raise DomainError(f"vertex {v!r} is not in the ordering") from None

    def predecessors(self, v: str) -> frozenset[str]:
        """Vertices strictly before ``v`` in the order."""
        return frozenset(self.sequence[: self.rank(v)])


@dataclass(frozen=True)
class Cycle:
    """A directed simple cycle, stored in canonical rotation.

    The arc sequence chains head-to-tail, closes on itself, repeats no
    vertex, and is rotated so it starts at the lexicographically least
    vertex on the cycle.
    """

    arcs: tuple[Arc, ...]

    def __post_init__(self) -> None:
        arcs = tuple((u, v) for u, v in self.arcs)
        if len(arcs) < 2:
            raise DomainError("a directed simple cycle has at least two arcs")
        tails = [u for u, _ in arcs]
        if len(set(tails)) != len(tails):
            raise DomainError("cycle repeats a vertex")
        for (_, head), (tail, _) in zip(arcs, arcs[1:] + arcs[:1]):
            if head != tail:
                raise DomainError("cycle arcs do not chain head-to-tail")
        start = tails.index(min(tails))
        object.__setattr__(self, "arcs", arcs[start:] + arcs[:start])

    @property
    def vertices(self) -> frozenset[str]:
        return frozenset(u for u, _ in self.arcs)

    def __len__(self) -> int:
        return len(self.arcs)


def parents(d: Digraph, v: str) -> frozenset[str]:
    """Immediate predecessors of ``v``: every u with an arc u -> v."""
    if v not in d.vertices:
        raise DomainError(f"vertex {v!r} is not in the digraph")
    return frozenset(u for u, w in d.arcs if w == v)


def children(d: Digraph, v: str) -> frozenset[str]:
    """Immediate successors of ``v``."""
    if v not in d.vertices:
        raise DomainError(f"vertex {v!r} is not in the digraph")
    return frozenset(w for u, w in d.arcs if u == v)


def is_acyclic(d: Digraph) -> bool:
    """True iff the digraph contains no directed cycle (source elimination)."""
    indegree = {v: 0 for v in d.vertices}
    succ: dict[str, list[str]] = {v: [] for v in d.vertices}
    for u, v in d.arcs:
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
    return removed == len(d.vertices)


def has_directed_path(d: Digraph, src: str, dst: str) -> bool:
    """True iff a (possibly empty) directed path leads from ``src`` to ``dst``."""
    if src not in d.vertices or dst not in d.vertices:
        raise DomainError("path endpoints must be vertices of the digraph")
    if src == dst:
        return True
    succ: dict[str, list[str]] = {v: [] for v in d.vertices}
    for u, v in d.arcs:
        succ[u].append(v)
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


def union_digraph(ds: Sequence[Digraph]) -> Digraph:
    """Arc-set union of digraphs over one shared vertex set."""
    if not ds:
        raise DomainError("union of zero digraphs is undefined")
    vertices = ds[0].vertices
    arcs: set[Arc] = set()
    for d in ds:
        if d.vertices != vertices:
            raise DomainError("union requires a shared vertex set")
        arcs |= d.arcs
    return Digraph(vertices, frozenset(arcs))


def consistent(alpha: Ordering, d: Digraph) -> bool:
    """True iff every arc points forward under the ordering."""
    if set(alpha.sequence) != set(d.vertices):
        raise DomainError("ordering must cover exactly the digraph's vertices")
    pos = alpha.position
    return all(pos[u] < pos[v] for u, v in d.arcs)


def topological_ordering(d: Digraph) -> Ordering:
    """A deterministic ordering consistent with an acyclic digraph.

    Ties are broken by vertex identifier, so equal inputs always produce
    the same ordering.
    """
    indegree = {v: 0 for v in d.vertices}
    succ: dict[str, list[str]] = {v: [] for v in d.vertices}
    for u, v in d.arcs:
        indegree[v] += 1
        succ[u].append(v)
    heap = [v for v, k in indegree.items() if k == 0]
    heapq.heapify(heap)
    out: list[str] = []
    while heap:
        u = heapq.heappop(heap)
        out.append(u)
        for w in succ[u]:
            indegree[w] -= 1
            if indegree[w] == 0:
                heapq.heappush(heap, w)
    if len(out) != len(d.vertices):
        raise DomainError("cyclic digraphs admit no topological ordering")
    return Ordering(tuple(out))


def enumerate_simple_cycles(
    d: Digraph, max_vertices: int = DEFAULT_CYCLE_VERTEX_CAP
) -> frozenset[Cycle]:
    """All directed simple cycles of the digraph.

    Each cycle is reported once, in canonical rotation.  The search grows
    paths only through vertices ranked above the start vertex, so the
    start of every reported cycle is its least vertex.
    """
    if len(d.vertices) > max_vertices:
        raise ScaleError(
            f"cycle enumeration capped at {max_vertices} vertices, got {len(d.vertices)}"
        )
    order = sorted(d.vertices)
    rank = {v: i for i, v in enumerate(order)}
    succ = {v: sorted(w for u, w in d.arcs if u == v) for v in order}
    found: list[Cycle] = []
    for start in order:
        base = rank[start]
        path = [start]
        on_path = {start}
        iters = [iter(succ[start])]
        while iters:
            descended = False
            for w in iters[-1]:
                if w == start:
                    arcs = tuple(zip(path, path[1:] + [start]))
                    found.append(Cycle(arcs))
                elif rank[w] > base and w not in on_path:
                    path.append(w)
                    on_path.add(w)
                    iters.append(iter(succ[w]))
                    descended = True
                    break
            if not descended:
                iters.pop()
                on_path.discard(path.pop())
    return frozenset(found)
