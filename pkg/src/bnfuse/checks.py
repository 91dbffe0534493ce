"""Verification harnesses behind the CLI ``verify`` command.

Each check builds (or receives) a corpus of instances, runs two
independently implemented routes to the same mathematical object, and
reports any instance where they disagree.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .config import RunConfig
from .corpus import random_dag, random_dag_pair, random_digraph, random_ordering
from .digraph import Digraph, Ordering, consistent, is_acyclic, union_digraph
from .errors import DomainError
from .fusion import (
    ConsensusRequest,
    ExpertSet,
    consensus_dag,
    recursive_basis,
    recursive_basis_from_model,
    unified_recursive_basis,
)
from .independence import (
    dsep_model,
    graphoid_closure,
    is_imap,
    is_perfect_map,
    model_intersection,
    model_union,
)
from .optimize import solve_mrs_exact
from .reductions import (
    ReductionArtifact,
    reduce_dmrs_to_2dmrs,
    reduce_mnas_to_2mnas,
    reduce_mrs_to_dmrs,
    reduce_mrs_to_mnas,
    verify_claim1,
    verify_reduction,
)

CHECK_NAMES = ("theorem1", "lemma2", "theorem3", "claim1", "reduction")


@dataclass(frozen=True)
class CheckReport:
    name: str
    params: dict
    instances: int
    failures: tuple[dict, ...] = ()
    detail: tuple[dict, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        out = {
            "check": self.name,
            "params": self.params,
            "instances": self.instances,
            "failures": [dict(f) for f in self.failures],
            "passed": self.passed,
        }
        if self.detail:
            out["detail"] = [dict(d) for d in self.detail]
        return out


def _corpus_dags(rng: random.Random, count: int, sizes: tuple[int, ...]) -> list[Digraph]:
    # five densities against three sizes, so every combination occurs
    probs = (0.2, 0.35, 0.5, 0.65, 0.8)
    return [
        random_dag(rng, sizes[i % len(sizes)], probs[i % len(probs)])
        for i in range(count)
    ]


def check_theorem1(
    count: int = 200,
    sizes: tuple[int, ...] = (3, 4, 5),
    *,
    seed: int,
    max_universe: int = 6,
    dags: list[Digraph] | None = None,
) -> CheckReport:
    """Closure of the drawn basis equals the full separation model, for
    every ordering consistent with each corpus DAG."""
    rng = random.Random(seed)
    corpus = dags if dags is not None else _corpus_dags(rng, count, sizes)
    failures = []
    checked = 0
    for d in corpus:
        model = dsep_model(d, max_universe=max_universe)
        for perm in itertools.permutations(sorted(d.vertices)):
            alpha = Ordering(perm)
            if not consistent(alpha, d):
                continue
            checked += 1
            basis = recursive_basis(d, alpha)
            closure = graphoid_closure(
                basis.statements(), d.vertices, intersectional=True, max_universe=max_universe
            )
            if not is_perfect_map(closure, model):
                failures.append(
                    {
                        "digraph": d.to_dict(),
                        "ordering": list(perm),
                        "closure_size": len(closure),
                        "model_size": len(model),
                    }
                )
    return CheckReport(
        "theorem1",
        {"count": len(corpus), "sizes": list(sizes), "seed": seed},
        checked,
        tuple(failures),
    )


def check_lemma2(
    count: int = 100,
    max_n: int = 5,
    *,
    seed: int,
    max_universe: int = 6,
    pairs: list[tuple[Digraph, Digraph]] | None = None,
) -> CheckReport:
    """Two properties of the fused basis on random DAG pairs and orderings:
    the unified basis equals the basis drawn from the intersection model,
    and the consensus digraph is an I-map of that intersection that loses
    I-mapness when any single arc is removed."""
    rng = random.Random(seed)
    if pairs is None:
        pairs = [random_dag_pair(rng, 3 + i % (max_n - 2), 0.5) for i in range(count)]
    failures = []
    for d1, d2 in pairs:
        alpha = random_ordering(rng, d1.vertices)
        b1 = recursive_basis(d1, alpha)
        b2 = recursive_basis(d2, alpha)
        unified = unified_recursive_basis([b1, b2])
        inter = model_intersection(
            [dsep_model(d1, max_universe=max_universe), dsep_model(d2, max_universe=max_universe)]
        )
        from_model = recursive_basis_from_model(inter, alpha)
        if unified != from_model:
            failures.append(
                {
                    "reason": "unified basis differs from the intersection-model basis",
                    "digraphs": [d1.to_dict(), d2.to_dict()],
                    "ordering": list(alpha.sequence),
                }
            )
            continue
        experts = ExpertSet((d1, d2), ("e1", "e2"))
        fused = consensus_dag(experts, ConsensusRequest(2, alpha))
        fused_model = dsep_model(fused, max_universe=max_universe)
        if not is_imap(fused_model, inter):
            failures.append(
                {
                    "reason": "consensus digraph is not an I-map of the intersection",
                    "digraphs": [d1.to_dict(), d2.to_dict()],
                    "ordering": list(alpha.sequence),
                }
            )
            continue
        for arc in sorted(fused.arcs):
            thinned = Digraph(fused.vertices, fused.arcs - {arc})
            if is_imap(dsep_model(thinned, max_universe=max_universe), inter):
                failures.append(
                    {
                        "reason": "removing an arc kept the I-map property",
                        "arc": list(arc),
                        "digraphs": [d1.to_dict(), d2.to_dict()],
                        "ordering": list(alpha.sequence),
                    }
                )
                break
    return CheckReport(
        "lemma2",
        {"count": len(pairs), "max_n": max_n, "seed": seed},
        len(pairs),
        tuple(failures),
    )


def check_theorem3(
    count: int = 20,
    n: int = 4,
    *,
    seed: int,
    max_universe: int = 6,
    pairs: list[tuple[Digraph, Digraph]] | None = None,
) -> CheckReport:
    """The union over all orderings of the consensus separation models
    equals the intersection of the two experts' models."""
    rng = random.Random(seed)
    if pairs is None:
        pairs = [random_dag_pair(rng, n, 0.5) for _ in range(count)]
    failures = []
    for d1, d2 in pairs:
        experts = ExpertSet((d1, d2), ("e1", "e2"))
        inter = model_intersection(
            [dsep_model(d1, max_universe=max_universe), dsep_model(d2, max_universe=max_universe)]
        )
        per_ordering = []
        for perm in itertools.permutations(sorted(d1.vertices)):
            fused = consensus_dag(experts, ConsensusRequest(2, Ordering(perm)))
            per_ordering.append(dsep_model(fused, max_universe=max_universe))
        union = model_union(per_ordering)
        if not is_perfect_map(union, inter):
            failures.append(
                {
                    "digraphs": [d1.to_dict(), d2.to_dict()],
                    "union_size": len(union),
                    "intersection_size": len(inter),
                }
            )
    return CheckReport(
        "theorem3",
        {"count": len(pairs), "n": n, "seed": seed},
        len(pairs),
        tuple(failures),
    )


def check_claim1(
    count: int = 100,
    *,
    seed: int,
    max_n: int = 6,
    max_arcs: int = 12,
    cycle_cap: int = 12,
    digraphs: list[Digraph] | None = None,
) -> CheckReport:
    """Every arc of a minimum flip set has an exclusive cycle."""
    rng = random.Random(seed)
    if digraphs is None:
        digraphs = [random_digraph(rng, 2 + i % (max_n - 1), max_arcs) for i in range(count)]
    failures = []
    for d in digraphs:
        solution = solve_mrs_exact(d)
        report = verify_claim1(d, solution, cycle_cap=cycle_cap)
        if not report.passed:
            failures.append({"digraph": d.to_dict(), "report": report.to_dict()})
    return CheckReport(
        "claim1",
        {"count": len(digraphs), "seed": seed},
        len(digraphs),
        tuple(failures),
    )


def _trim_arcs(d: Digraph, max_arcs: int) -> Digraph:
    return Digraph(d.vertices, frozenset(sorted(d.arcs)[:max_arcs]))


def _reduction_sources(rng: random.Random, kind: str, count: int):
    """Source instances sized so the gadget targets stay under oracle caps.

    Pair sources are biased toward cyclic unions (resampled a bounded
    number of times) so nontrivial optima occur regularly.
    """
    out = []
    for i in range(count):
        if kind in ("mrs-to-dmrs", "mrs-to-mnas"):
            n = 2 + i % 3
            d = random_digraph(rng, n, 4 if kind == "mrs-to-mnas" else 5)
            out.append((d,))
        elif kind == "dmrs-to-2dmrs":
            n = 2 + i % 3
            for _ in range(20):
                d1 = _trim_arcs(random_dag(rng, n, 0.6), 3)
                d2 = _trim_arcs(random_dag(rng, n, 0.5), 2)
                if not is_acyclic(union_digraph([d1, d2])):
                    break
            out.append((d1, d2))
        else:
            n = 2 + i % 3
            for _ in range(20):
                d1 = _trim_arcs(random_dag(rng, n, 0.5), 3)
                d2 = _trim_arcs(random_dag(rng, n, 0.5), 2)
                if not is_acyclic(union_digraph([d1, d2])):
                    break
            out.append((d1, d2))
    return out


def check_reduction(
    kinds: tuple[str, ...] = ("mrs-to-dmrs", "dmrs-to-2dmrs", "mrs-to-mnas", "mnas-to-2mnas"),
    count: int = 100,
    *,
    seed: int,
    frontier_cap: int = 200_000,
    artifacts: list[ReductionArtifact] | None = None,
) -> CheckReport:
    """Optimum correspondence and round-trip solution mapping for the four
    instance transformations, on random sources or supplied artifacts."""
    failures = []
    instances = 0
    if artifacts is not None:
        for artifact in artifacts:
            instances += 1
            report = verify_reduction(artifact, frontier_cap=frontier_cap)
            if not report.passed:
                failures.append({"kind": artifact.kind, "report": report.to_dict()})
        params = {"artifacts": instances, "seed": seed}
    else:
        builders = {
            "mrs-to-dmrs": lambda src: reduce_mrs_to_dmrs(*src),
            "dmrs-to-2dmrs": lambda src: reduce_dmrs_to_2dmrs(*src),
            "mrs-to-mnas": lambda src: reduce_mrs_to_mnas(*src),
            "mnas-to-2mnas": lambda src: reduce_mnas_to_2mnas(*src),
        }
        kind_offset = {
            "mrs-to-dmrs": 1,
            "dmrs-to-2dmrs": 2,
            "mrs-to-mnas": 3,
            "mnas-to-2mnas": 4,
        }
        for kind in kinds:
            if kind not in builders:
                raise DomainError(f"unknown reduction kind: {kind!r}")
            rng = random.Random(seed * 7919 + kind_offset[kind])
            for src in _reduction_sources(rng, kind, count):
                instances += 1
                artifact = builders[kind](src)
                report = verify_reduction(artifact, frontier_cap=frontier_cap)
                if not report.passed:
                    failures.append(
                        {
                            "kind": kind,
                            "source": [d.to_dict() for d in artifact.source],
                            "report": report.to_dict(),
                        }
                    )
        params = {"kinds": list(kinds), "count": count, "seed": seed}
    return CheckReport("reduction", params, instances, tuple(failures))


def run_check(name: str, config: RunConfig, files_payload=None) -> CheckReport:
    """Dispatch a named check, optionally over instances loaded from files."""
    seed = config.seed
    if name == "theorem1":
        return check_theorem1(
            seed=seed, max_universe=config.closure_universe_cap, dags=files_payload
        )
    if name == "lemma2":
        return check_lemma2(
            seed=seed, max_universe=config.closure_universe_cap, pairs=files_payload
        )
    if name == "theorem3":
        return check_theorem3(
            seed=seed, max_universe=config.closure_universe_cap, pairs=files_payload
        )
    if name == "claim1":
        return check_claim1(
            seed=seed, cycle_cap=config.cycle_vertex_cap, digraphs=files_payload
        )
    if name == "reduction":
        return check_reduction(
            seed=seed, frontier_cap=config.search_frontier_cap, artifacts=files_payload
        )
    raise DomainError(f"unknown check: {name!r}")
