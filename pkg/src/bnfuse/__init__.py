"""bnfuse: consensus-structure fusion for belief-network DAGs.

The package fuses independently built directed acyclic graph structures
into union-DAG consensus structures via recursive bases and arc reversals,
and provides exact oracles, greedy heuristics, and instance
transformations for the family of acyclicity-restoration optimization
problems that consensus construction runs into.
"""

from .config import RunConfig
from .digraph import (
    Arc,
    Cycle,
    Digraph,
    Ordering,
    children,
    consistent,
    enumerate_simple_cycles,
    has_directed_path,
    is_acyclic,
    parents,
    topological_ordering,
    union_digraph,
)
from .errors import (
    BnfuseError,
    DomainError,
    IllegalReversalError,
    InfeasibleError,
    ScaleError,
)
from .fusion import (
    ConsensusRequest,
    ExpertSet,
    consensus_all_subsets,
    consensus_dag,
    dag_from_basis,
    recursive_basis,
    recursive_basis_from_model,
    retained_independencies,
    search_ordering_exhaustive,
    search_ordering_greedy,
    unified_recursive_basis,
)
from .independence import (
    BasisEntry,
    DependencyModel,
    IStatement,
    RecursiveBasis,
    count_nontrivial_istatements,
    d_separated,
    dsep_model,
    graphoid_closure,
    is_imap,
    is_perfect_map,
    model_intersection,
    model_union,
)
from .optimize import (
    ArcSetSolution,
    SequenceSolution,
    replay_steps,
    solve_2dmrs_exact,
    solve_2mnas_exact,
    solve_dmrs_exact,
    solve_greedy,
    solve_mfas_exact,
    solve_mnas_exact,
    solve_mrs_exact,
)
from .reductions import (
    Claim1Report,
    ReductionArtifact,
    ReductionReport,
    backward_solution,
    forward_solution,
    reduce_dmrs_to_2dmrs,
    reduce_mnas_to_2mnas,
    reduce_mrs_to_dmrs,
    reduce_mrs_to_mnas,
    verify_claim1,
    verify_reduction,
)
from .reversal import ReorderResult, ReversalStep, reorder, reverse_arc

__version__ = "0.1.0"
