"""Seeded random instance generation for the verification harnesses.

All generators take an explicit :class:`random.Random` so a fixed seed
reproduces the exact corpus.
"""

from __future__ import annotations

import random
import string

from .digraph import Digraph, Ordering
from .errors import DomainError


def vertex_names(n: int) -> tuple[str, ...]:
    if not 1 <= n <= 26:
        raise DomainError("generated instances use single-letter vertex names (n <= 26)")
    return tuple(string.ascii_lowercase[:n])


def random_dag(rng: random.Random, n: int, arc_prob: float = 0.5) -> Digraph:
    """A random DAG: a hidden vertex order with each forward pair arced
    independently."""
    names = list(vertex_names(n))
    rng.shuffle(names)
    arcs = {
        (names[i], names[j])
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < arc_prob
    }
    return Digraph(frozenset(vertex_names(n)), frozenset(arcs))


def random_digraph(rng: random.Random, n: int, max_arcs: int) -> Digraph:
    """A random digraph (cycles allowed): a uniform sample of ordered pairs."""
    names = vertex_names(n)
    pairs = [(u, v) for u in names for v in names if u != v]
    count = rng.randint(0, min(max_arcs, len(pairs)))
    arcs = frozenset(rng.sample(pairs, count))
    return Digraph(frozenset(names), arcs)


def random_dag_pair(
    rng: random.Random, n: int, arc_prob: float = 0.5
) -> tuple[Digraph, Digraph]:
    return random_dag(rng, n, arc_prob), random_dag(rng, n, arc_prob)


def random_ordering(rng: random.Random, vertices) -> Ordering:
    seq = sorted(vertices)
    rng.shuffle(seq)
    return Ordering(tuple(seq))
