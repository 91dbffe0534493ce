#!/usr/bin/env python3
"""Regenerate the shipped fixture instances.

Run from the repository root:

    python3 scripts/make_fixtures.py

Writes ``src/bnfuse/fixtures/*.json`` deterministically.

The divergence fixture is an expert pair for which no ordering both
minimizes the generated-arc count and maximizes the retained-independency
count.  The search first sweeps every DAG pair on three vertices (none
diverge), then walks seeded random four-vertex pairs and keeps the first
pair whose two argument sets are disjoint.
"""

from __future__ import annotations

import itertools
import json
import random
from pathlib import Path

from bnfuse.corpus import random_dag
from bnfuse.digraph import Digraph, Ordering, is_acyclic
from bnfuse.fusion import ExpertSet, retained_independencies
from bnfuse.reversal import reorder

SEED = 20240
FIXTURE_DIR = Path(__file__).resolve().parent.parent / "src" / "bnfuse" / "fixtures"


def ordering_scores(d1: Digraph, d2: Digraph):
    experts = ExpertSet((d1, d2), ("e1", "e2"))
    scores = []
    for perm in itertools.permutations(sorted(d1.vertices)):
        alpha = Ordering(perm)
        retained = retained_independencies(experts, ("e1", "e2"), alpha)
        new_arcs = sum(len(reorder(d, alpha).new_arcs) for d in (d1, d2))
        scores.append((perm, retained, new_arcs))
    return scores


def divergence(d1: Digraph, d2: Digraph):
    scores = ordering_scores(d1, d2)
    best_ret = max(s[1] for s in scores)
    best_new = min(s[2] for s in scores)
    argmax_ret = {s[0] for s in scores if s[1] == best_ret}
    argmin_new = {s[0] for s in scores if s[2] == best_new}
    if argmax_ret & argmin_new:
        return None
    return {
        "max_retained": best_ret,
        "min_new_arcs": best_new,
        "best_retained_ordering": list(min(argmax_ret)),
        "best_new_arcs_ordering": list(min(argmin_new)),
    }


def all_dags(names):
    pairs = [(u, v) for u in names for v in names if u != v]
    for r in range(len(pairs) + 1):
        for combo in itertools.combinations(pairs, r):
            d = Digraph(frozenset(names), frozenset(combo))
            if is_acyclic(d):
                yield d


def find_divergent_pair():
    three = list(all_dags(("a", "b", "c")))
    for d1 in three:
        for d2 in three:
            info = divergence(d1, d2)
            if info is not None:
                return d1, d2, info, {"scope": "exhaustive-n3"}
    rng = random.Random(SEED)
    for trial in range(1, 100_000):
        d1 = random_dag(rng, 4, rng.choice([0.4, 0.6]))
        d2 = random_dag(rng, 4, rng.choice([0.4, 0.6]))
        info = divergence(d1, d2)
        if info is not None:
            return d1, d2, info, {"scope": "random-n4", "seed": SEED, "trial": trial}
    raise AssertionError("no divergent pair found in the search budget")


def write(name: str, payload: dict) -> None:
    path = FIXTURE_DIR / name
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote {path}")


def reduction_images() -> None:
    """Fixed small instances with their gadget-built images, one per
    transformation kind, all verified before shipping."""
    from bnfuse.reductions import (
        reduce_dmrs_to_2dmrs,
        reduce_mnas_to_2mnas,
        reduce_mrs_to_dmrs,
        reduce_mrs_to_mnas,
        verify_reduction,
    )

    three_cycle = Digraph.from_arcs([("a", "b"), ("b", "c"), ("c", "a")])
    pair = (
        Digraph.from_arcs([("a", "b"), ("c", "b")]),
        Digraph.from_arcs([("b", "a")], vertices="c"),
    )
    write("instance_three_cycle.json", {"kind": "mrs", "digraphs": [three_cycle.to_dict()]})
    write(
        "instance_pair.json",
        {"digraphs": [pair[0].to_dict(), pair[1].to_dict()]},
    )
    artifacts = {
        "reduction_image_mrs_to_dmrs.json": reduce_mrs_to_dmrs(three_cycle),
        "reduction_image_mrs_to_mnas.json": reduce_mrs_to_mnas(three_cycle),
        "reduction_image_dmrs_to_2dmrs.json": reduce_dmrs_to_2dmrs(*pair),
        "reduction_image_mnas_to_2mnas.json": reduce_mnas_to_2mnas(*pair),
    }
    for name, artifact in artifacts.items():
        report = verify_reduction(artifact)
        assert report.passed, f"{name} failed verification: {report.to_dict()}"
        write(name, artifact.to_dict())


def main() -> None:
    FIXTURE_DIR.mkdir(parents=True, exist_ok=True)
    d1, d2, info, how = find_divergent_pair()
    fixture = {
        "experts": [
            {"label": "e1", **d1.to_dict()},
            {"label": "e2", **d2.to_dict()},
        ],
        "divergence": info,
        "search": how,
    }
    write("ordering_divergence.json", fixture)
    reduction_images()


if __name__ == "__main__":
    main()
