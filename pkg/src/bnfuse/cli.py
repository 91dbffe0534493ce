"""Command-line front end: fuse, solve, reduce, verify, count.

All commands emit one report (JSON by default, or an indented text
rendering of the same data) that embeds the configuration and seed used,
so identical inputs produce byte-identical output.

Exit codes: 0 success/pass, 1 verification failure, 2 parse error,
3 scale cap exceeded, 4 infeasible instance.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import itertools
import json
import sys

from .checks import CHECK_NAMES, run_check
from .config import RunConfig
from .digraph import Digraph, Ordering
from .errors import BnfuseError, DomainError, InfeasibleError, ScaleError
from .fusion import (
    OBJECTIVES,
    ConsensusRequest,
    ExpertSet,
    consensus_dag,
    retained_independencies,
    search_ordering_exhaustive,
    search_ordering_greedy,
)
from .independence import count_nontrivial_istatements
from .optimize import (
    PROBLEM_KINDS,
    solve_2dmrs_exact,
    solve_2mnas_exact,
    solve_dmrs_exact,
    solve_greedy,
    solve_mfas_exact,
    solve_mnas_exact,
    solve_mrs_exact,
)
from .reductions import (
    REDUCTION_KINDS,
    ReductionArtifact,
    reduce_dmrs_to_2dmrs,
    reduce_mnas_to_2mnas,
    reduce_mrs_to_dmrs,
    reduce_mrs_to_mnas,
)
from .reversal import reorder

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_PARSE = 2
EXIT_SCALE = 3
EXIT_INFEASIBLE = 4

_CAP_FLAGS = {
    "cap_closure_universe": "closure_universe_cap",
    "cap_ordering_factorial": "ordering_factorial_cap",
    "cap_arc_subset": "arc_subset_cap",
    "cap_search_frontier": "search_frontier_cap",
    "cap_cycle_vertices": "cycle_vertex_cap",
    "cap_mfas_vertices": "mfas_vertex_cap",
}


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path} is not valid JSON: {exc}") from exc


def _render_text(data, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines: list[str] = []
    if isinstance(data, dict):
        for key in sorted(data):
            value = data[key]
            if isinstance(value, (dict, list)):
                lines.append(f"{pad}{key}:")
                lines.extend(_render_text(value, indent + 1))
            else:
                lines.append(f"{pad}{key}: {value}")
    elif isinstance(data, list):
        for value in data:
            if isinstance(value, (dict, list)):
                lines.append(f"{pad}-")
                lines.extend(_render_text(value, indent + 1))
            else:
                lines.append(f"{pad}- {value}")
    else:
        lines.append(f"{pad}{data}")
    return lines


def _emit(report: dict, config: RunConfig, output: str | None) -> None:
    report = dict(report)
    report["config"] = config.to_dict()
    if config.format == "json":
        rendered = json.dumps(report, indent=2, sort_keys=True) + "\n"
    else:
        rendered = "\n".join(_render_text(report)) + "\n"
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(rendered)
    sys.stdout.write(rendered)


def _digest(data: dict) -> str:
    return hashlib.sha256(json.dumps(data, sort_keys=True).encode("utf-8")).hexdigest()


def _config_from_args(args) -> RunConfig:
    config = RunConfig.load(args.config) if args.config else RunConfig()
    overrides = {}
    for flag, field in _CAP_FLAGS.items():
        value = getattr(args, flag, None)
        if value is not None:
            overrides[field] = value
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.format is not None:
        overrides["format"] = args.format
    if overrides:
        config = dataclasses.replace(config, **overrides)
    return config


def _resolve_ordering(spec: str, experts: ExpertSet, subset, config: RunConfig):
    """An ordering spec is an explicit comma list, ``greedy``, or
    ``exhaustive:<objective>``."""
    if spec == "greedy":
        alpha = search_ordering_greedy(experts, subset)
        return alpha, {"spec": "greedy"}
    if spec.startswith("exhaustive:"):
        objective = spec.split(":", 1)[1]
        if objective not in OBJECTIVES:
            raise DomainError(
                f"unknown objective {objective!r}; choose from {', '.join(OBJECTIVES)}"
            )
        alpha, score = search_ordering_exhaustive(
            experts,
            subset,
            objective,
            max_vertices=config.ordering_factorial_cap,
            max_universe=config.closure_universe_cap,
        )
        return alpha, {"spec": spec, "score": score}
    alpha = Ordering(tuple(x for x in spec.split(",") if x))
    if set(alpha.sequence) != set(experts.universe):
        raise DomainError("explicit ordering must cover exactly the experts' vertex set")
    return alpha, {"spec": "explicit"}


def _cmd_fuse(args, config: RunConfig) -> int:
    experts = ExpertSet.from_dict(_load_json(args.experts))
    m = len(experts.labels)
    k = args.k if args.k is not None else m
    if not 1 <= k <= m:
        raise DomainError(f"k must be between 1 and {m}")
    if args.subset:
        subsets = [tuple(args.subset.split(","))]
    else:
        subsets = list(itertools.combinations(sorted(experts.labels), k))
    results = []
    for subset in subsets:
        alpha, ordering_info = _resolve_ordering(args.ordering, experts, subset, config)
        fused = consensus_dag(experts, ConsensusRequest(k, alpha, subset))
        new_arc_total = sum(
            len(reorder(experts.dag(label), alpha).new_arcs) for label in subset
        )
        scores = {"new_arcs": new_arc_total, "union_arcs": len(fused.arcs)}
        if len(experts.universe) <= config.closure_universe_cap:
            scores["retained_independencies"] = retained_independencies(
                experts, subset, alpha, max_universe=config.closure_universe_cap
            )
        results.append(
            {
                "subset": list(subset),
                "ordering": list(alpha.sequence),
                "ordering_info": ordering_info,
                "digraph": fused.to_dict(),
                "scores": scores,
            }
        )
    _emit({"command": "fuse", "k": k, "results": results}, config, args.output)
    return EXIT_OK


def _load_instance(path: str, kind: str) -> tuple[Digraph, ...]:
    data = _load_json(path)
    if not isinstance(data, dict) or "digraphs" not in data:
        raise DomainError("an instance file is a JSON object with a 'digraphs' list")
    if "kind" in data and data["kind"] != kind:
        raise DomainError(f"instance file is for kind {data['kind']!r}, not {kind!r}")
    digraphs = tuple(Digraph.from_dict(d) for d in data["digraphs"])
    expected = 1 if kind in ("mfas", "mrs") else 2
    if len(digraphs) != expected:
        raise DomainError(f"{kind} takes exactly {expected} digraph(s)")
    return digraphs


def _cmd_solve(args, config: RunConfig) -> int:
    digraphs = _load_instance(args.instance, args.kind)
    if args.greedy:
        solution = solve_greedy(args.kind, digraphs, cycle_cap=config.cycle_vertex_cap)
        mode = "greedy"
    else:
        mode = "exact"
        if args.kind == "mfas":
            solution = solve_mfas_exact(
                digraphs[0],
                vertex_cap=config.mfas_vertex_cap,
                arc_cap=config.arc_subset_cap,
            )
        elif args.kind == "mrs":
            solution = solve_mrs_exact(digraphs[0], arc_cap=config.arc_subset_cap)
        elif args.kind == "dmrs":
            solution = solve_dmrs_exact(*digraphs, arc_cap=config.arc_subset_cap)
        elif args.kind == "2dmrs":
            solution = solve_2dmrs_exact(*digraphs, arc_cap=config.arc_subset_cap)
        elif args.kind == "mnas":
            solution = solve_mnas_exact(*digraphs, frontier_cap=config.search_frontier_cap)
        else:
            solution = solve_2mnas_exact(*digraphs, frontier_cap=config.search_frontier_cap)
    payload = solution.to_dict()
    payload["certificate_digest"] = _digest(payload.pop("certificate"))
    _emit({"command": "solve", "mode": mode, "solution": payload}, config, args.output)
    return EXIT_OK


def _cmd_reduce(args, config: RunConfig) -> int:
    builders = {
        "mrs-to-dmrs": (reduce_mrs_to_dmrs, ("mrs",)),
        "dmrs-to-2dmrs": (reduce_dmrs_to_2dmrs, ("dmrs",)),
        "mrs-to-mnas": (reduce_mrs_to_mnas, ("mrs",)),
        "mnas-to-2mnas": (reduce_mnas_to_2mnas, ("mnas",)),
    }
    builder, (source_kind,) = builders[args.kind]
    digraphs = _load_instance(args.instance, source_kind)
    artifact = builder(*digraphs)
    _emit({"command": "reduce", "artifact": artifact.to_dict()}, config, args.output)
    return EXIT_OK


def _verify_payload(what: str, files: list[str]):
    if not files:
        return None
    if what in ("theorem1", "claim1"):
        return [Digraph.from_dict(_load_json(path)) for path in files]
    if what in ("lemma2", "theorem3"):
        pairs = []
        for path in files:
            data = _load_json(path)
            if not isinstance(data, dict) or "digraphs" not in data or len(data["digraphs"]) != 2:
                raise DomainError(f"{path}: expected an object with a two-entry 'digraphs' list")
            pairs.append(tuple(Digraph.from_dict(d) for d in data["digraphs"]))
        return pairs
    return [ReductionArtifact.from_dict(_load_json(path)) for path in files]


def _cmd_verify(args, config: RunConfig) -> int:
    payload = _verify_payload(args.what, args.files)
    report = run_check(args.what, config, payload)
    _emit({"command": "verify", "report": report.to_dict()}, config, args.output)
    return EXIT_OK if report.passed else EXIT_FAIL


def _cmd_count(args, config: RunConfig) -> int:
    report = {
        "command": "count",
        "n": args.n,
        "ordered": count_nontrivial_istatements(args.n, canonical=False),
        "canonical": count_nontrivial_istatements(args.n),
    }
    _emit(report, config, args.output)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with RunConfig overrides")
    common.add_argument("--seed", type=int, help="random seed for generated corpora")
    common.add_argument("--format", choices=("json", "text"), help="report format")
    common.add_argument("--output", "-o", help="also write the report to this file")
    common.add_argument("--cap-closure-universe", dest="cap_closure_universe", type=int)
    common.add_argument("--cap-ordering-factorial", dest="cap_ordering_factorial", type=int)
    common.add_argument("--cap-arc-subset", dest="cap_arc_subset", type=int)
    common.add_argument("--cap-search-frontier", dest="cap_search_frontier", type=int)
    common.add_argument("--cap-cycle-vertices", dest="cap_cycle_vertices", type=int)
    common.add_argument("--cap-mfas-vertices", dest="cap_mfas_vertices", type=int)

    parser = argparse.ArgumentParser(
        prog="bnfuse",
        description="Fuse belief-network structures and solve the arc-reversal "
        "optimization problems that consensus construction runs into.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_fuse = sub.add_parser("fuse", parents=[common], help="build consensus digraphs")
    p_fuse.add_argument("experts", help="JSON file with labelled expert digraphs")
    p_fuse.add_argument("--k", type=int, help="agreement threshold (default: all experts)")
    p_fuse.add_argument(
        "--ordering",
        required=True,
        help="comma list of vertices, 'greedy', or 'exhaustive:<objective>'",
    )
    p_fuse.add_argument("--subset", help="comma list of expert labels (size k)")
    p_fuse.set_defaults(func=_cmd_fuse)

    p_solve = sub.add_parser("solve", parents=[common], help="solve one problem instance")
    p_solve.add_argument("kind", choices=PROBLEM_KINDS)
    p_solve.add_argument("instance", help="JSON instance file with a 'digraphs' list")
    mode = p_solve.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", default=True)
    mode.add_argument("--greedy", action="store_true")
    p_solve.set_defaults(func=_cmd_solve)

    p_reduce = sub.add_parser("reduce", parents=[common], help="transform an instance")
    p_reduce.add_argument("kind", choices=REDUCTION_KINDS)
    p_reduce.add_argument("instance", help="JSON instance file for the source problem")
    p_reduce.set_defaults(func=_cmd_reduce)

    p_verify = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p_verify.add_argument("what", choices=CHECK_NAMES)
    p_verify.add_argument("files", nargs="*", help="optional instance/artifact files")
    p_verify.set_defaults(func=_cmd_verify)

    p_count = sub.add_parser(
        "count", parents=[common], help="count non-trivial statements over n variables"
    )
    p_count.add_argument("n", type=int)
    p_count.set_defaults(func=_cmd_count)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config_from_args(args)
        return args.func(args, config)
    except ScaleError as exc:
        print(f"scale error: {exc}", file=sys.stderr)
        return EXIT_SCALE
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (DomainError, BnfuseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    raise SystemExit(main())
