import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bnfuse.digraph import Digraph, Ordering, consistent, is_acyclic, union_digraph
from bnfuse.errors import DomainError, ScaleError
from bnfuse.fusion import (
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
from bnfuse.independence import dsep_model, is_imap, model_intersection, model_union
from bnfuse.reversal import reorder

from .strategies import dag_tuples, dag_with_ordering, dags

CHAIN = Digraph.from_arcs([("a", "b"), ("b", "c")])


def experts_of(*dags):
    return ExpertSet(tuple(dags), tuple(f"e{i + 1}" for i in range(len(dags))))


class TestRecursiveBasis:
    def test_consistent_ordering_gives_parents(self):
        basis = recursive_basis(CHAIN, Ordering(("a", "b", "c")))
        assert [(e.vertex, e.boundary, e.remainder) for e in basis.entries] == [
            ("b", frozenset("a"), frozenset()),
            ("c", frozenset("b"), frozenset("a")),
        ]

    def test_reversed_ordering(self):
        basis = recursive_basis(CHAIN, Ordering(("c", "b", "a")))
        assert [(e.vertex, e.boundary, e.remainder) for e in basis.entries] == [
            ("b", frozenset("c"), frozenset()),
            ("a", frozenset("b"), frozenset("c")),
        ]

    def test_arcless_graph_separates_everything(self):
        basis = recursive_basis(Digraph(frozenset("abc")), Ordering(("a", "b", "c")))
        assert [s.to_dict() for s in basis.statements()] == [
            {"X": ["a"], "Z": [], "Y": ["b"]},
            {"X": ["a", "b"], "Z": [], "Y": ["c"]},
        ]

    def test_rejects_cyclic(self):
        with pytest.raises(DomainError):
            recursive_basis(Digraph.from_arcs([("a", "b"), ("b", "a")]), Ordering(("a", "b")))

    @settings(max_examples=60, deadline=None)
    @given(dag_with_ordering(max_n=5))
    def test_consistent_case_matches_parent_sets(self, case):
        from bnfuse.digraph import parents, topological_ordering

        d, _ = case
        alpha = topological_ordering(d)
        basis = recursive_basis(d, alpha)
        for entry in basis.entries:
            assert entry.boundary == parents(d, entry.vertex)

    @settings(max_examples=50, deadline=None)
    @given(dag_with_ordering(max_n=5))
    def test_matches_model_route(self, case):
        d, alpha = case
        assert recursive_basis(d, alpha) == recursive_basis_from_model(dsep_model(d), alpha)


class TestDagFromBasis:
    def test_round_trip_under_consistent_ordering(self):
        basis = recursive_basis(CHAIN, Ordering(("a", "b", "c")))
        assert dag_from_basis(basis) == CHAIN

    def test_reversed_chain(self):
        basis = recursive_basis(CHAIN, Ordering(("c", "b", "a")))
        assert dag_from_basis(basis).arcs == {("c", "b"), ("b", "a")}

    def test_empty_basis_gives_arcless(self):
        basis = recursive_basis(Digraph(frozenset("abc")), Ordering(("a", "b", "c")))
        assert dag_from_basis(basis).arcs == frozenset()

    @settings(max_examples=50, deadline=None)
    @given(dag_with_ordering(max_n=5))
    def test_always_acyclic_and_consistent(self, case):
        d, alpha = case
        generated = dag_from_basis(recursive_basis(d, alpha))
        assert is_acyclic(generated)
        assert consistent(alpha, generated)


class TestUnifiedBasis:
    def test_single_basis_identity(self):
        basis = recursive_basis(CHAIN, Ordering(("a", "b", "c")))
        assert unified_recursive_basis([basis]) == basis

    def test_identical_bases_idempotent(self):
        basis = recursive_basis(CHAIN, Ordering(("a", "b", "c")))
        assert unified_recursive_basis([basis, basis]) == basis

    def test_two_single_parent_experts(self):
        d1 = Digraph.from_arcs([("a", "c")], vertices="b")
        d2 = Digraph.from_arcs([("b", "c")], vertices="a")
        alpha = Ordering(("a", "b", "c"))
        unified = unified_recursive_basis(
            [recursive_basis(d1, alpha), recursive_basis(d2, alpha)]
        )
        by_vertex = {e.vertex: e for e in unified.entries}
        assert by_vertex["c"].boundary == {"a", "b"}
        assert by_vertex["c"].remainder == frozenset()
        assert by_vertex["b"].boundary == frozenset()
        assert by_vertex["b"].remainder == {"a"}

    def test_ordering_mismatch_rejected(self):
        b1 = recursive_basis(CHAIN, Ordering(("a", "b", "c")))
        b2 = recursive_basis(CHAIN, Ordering(("c", "b", "a")))
        with pytest.raises(DomainError):
            unified_recursive_basis([b1, b2])

    @settings(max_examples=40, deadline=None)
    @given(dag_tuples(count=2), st.data())
    def test_matches_intersection_model_route(self, ds, data):
        d1, d2 = ds
        perm = data.draw(st.permutations(sorted(d1.vertices)))
        alpha = Ordering(tuple(perm))
        unified = unified_recursive_basis(
            [recursive_basis(d1, alpha), recursive_basis(d2, alpha)]
        )
        inter = model_intersection([dsep_model(d1), dsep_model(d2)])
        assert unified == recursive_basis_from_model(inter, alpha)


class TestConsensus:
    def test_single_expert_is_rearrangement(self):
        experts = experts_of(CHAIN)
        alpha = Ordering(("c", "b", "a"))
        fused = consensus_dag(experts, ConsensusRequest(1, alpha))
        assert fused.arcs == {("c", "b"), ("b", "a")}

    def test_self_consensus(self):
        experts = experts_of(CHAIN, CHAIN)
        fused = consensus_dag(experts, ConsensusRequest(2, Ordering(("a", "b", "c"))))
        assert fused == CHAIN

    def test_antiparallel_experts(self):
        experts = experts_of(
            Digraph.from_arcs([("a", "b")]), Digraph.from_arcs([("b", "a")])
        )
        fused = consensus_dag(experts, ConsensusRequest(2, Ordering(("a", "b"))))
        assert fused.arcs == {("a", "b")}

    def test_subset_required_below_full_agreement(self):
        experts = experts_of(CHAIN, CHAIN)
        with pytest.raises(DomainError):
            consensus_dag(experts, ConsensusRequest(1, Ordering(("a", "b", "c"))))

    def test_all_subsets(self):
        experts = experts_of(CHAIN, CHAIN, CHAIN)
        alpha = Ordering(("a", "b", "c"))
        assert len(consensus_all_subsets(experts, 2, alpha)) == 3
        assert len(consensus_all_subsets(experts, 3, alpha)) == 1
        singles = consensus_all_subsets(experts, 1, alpha)
        assert [s for s, _ in singles] == [("e1",), ("e2",), ("e3",)]

    def test_all_subsets_cap(self):
        experts = experts_of(*[CHAIN] * 8)
        with pytest.raises(ScaleError):
            consensus_all_subsets(experts, 4, Ordering(("a", "b", "c")), max_subsets=10)

    @settings(max_examples=40, deadline=None)
    @given(dag_tuples(count=2), st.data())
    def test_union_of_rearranged_covers_consensus(self, ds, data):
        d1, d2 = ds
        perm = data.draw(st.permutations(sorted(d1.vertices)))
        alpha = Ordering(tuple(perm))
        experts = experts_of(d1, d2)
        fused = consensus_dag(experts, ConsensusRequest(2, alpha))
        rearranged = union_digraph(
            [reorder(d1, alpha).digraph, reorder(d2, alpha).digraph]
        )
        assert is_acyclic(rearranged)
        assert fused.arcs <= rearranged.arcs

    @settings(max_examples=30, deadline=None)
    @given(dag_tuples(count=2), st.data())
    def test_consensus_is_minimal_imap_of_intersection(self, ds, data):
        d1, d2 = ds
        perm = data.draw(st.permutations(sorted(d1.vertices)))
        alpha = Ordering(tuple(perm))
        experts = experts_of(d1, d2)
        fused = consensus_dag(experts, ConsensusRequest(2, alpha))
        inter = model_intersection([dsep_model(d1), dsep_model(d2)])
        assert is_imap(dsep_model(fused), inter)
        for arc in fused.arcs:
            thinned = Digraph(fused.vertices, fused.arcs - {arc})
            assert not is_imap(dsep_model(thinned), inter)


class TestRetainedIndependencies:
    def test_single_expert_consistent_ordering(self):
        experts = experts_of(CHAIN)
        got = retained_independencies(experts, ("e1",), Ordering(("a", "b", "c")))
        assert got == len(dsep_model(CHAIN)) == 1

    def test_complete_dag_retains_nothing(self):
        complete = Digraph.from_arcs([("a", "b"), ("a", "c"), ("b", "c")])
        experts = experts_of(complete)
        assert retained_independencies(experts, ("e1",), Ordering(("a", "b", "c"))) == 0

    def test_identical_chains(self):
        experts = experts_of(CHAIN, CHAIN)
        assert retained_independencies(experts, ("e1", "e2"), Ordering(("a", "b", "c"))) == 1

    @settings(max_examples=25, deadline=None)
    @given(dag_tuples(count=2, max_n=4), st.data())
    def test_equals_consensus_model_size(self, ds, data):
        d1, d2 = ds
        perm = data.draw(st.permutations(sorted(d1.vertices)))
        alpha = Ordering(tuple(perm))
        experts = experts_of(d1, d2)
        fused = consensus_dag(experts, ConsensusRequest(2, alpha))
        assert retained_independencies(experts, ("e1", "e2"), alpha) == len(dsep_model(fused))


class TestOrderingUnionIdentity:
    def test_two_fixed_three_vertex_experts(self):
        d1 = Digraph.from_arcs([("a", "b"), ("b", "c")])
        d2 = Digraph.from_arcs([("a", "c"), ("b", "c")])
        experts = experts_of(d1, d2)
        inter = model_intersection([dsep_model(d1), dsep_model(d2)])
        per_alpha = []
        for perm in itertools.permutations(sorted(d1.vertices)):
            fused = consensus_dag(experts, ConsensusRequest(2, Ordering(perm)))
            per_alpha.append(dsep_model(fused))
        assert model_union(per_alpha).statements == inter.statements


class TestSearch:
    def test_single_expert_consistent_is_optimal(self):
        experts = experts_of(CHAIN)
        alpha, score = search_ordering_exhaustive(experts, ("e1",), "retained-independencies")
        assert score == len(dsep_model(CHAIN))
        assert consistent(alpha, CHAIN)

    def test_identical_experts_zero_new_arcs(self):
        experts = experts_of(CHAIN, CHAIN)
        alpha, score = search_ordering_exhaustive(experts, ("e1", "e2"), "min-new-arcs")
        assert score == 0

    def test_min_union_arcs_on_identical_chains(self):
        experts = experts_of(CHAIN, CHAIN)
        _, score = search_ordering_exhaustive(experts, ("e1", "e2"), "min-union-arcs")
        assert score == 2

    def test_unknown_objective(self):
        with pytest.raises(DomainError):
            search_ordering_exhaustive(experts_of(CHAIN), ("e1",), "fastest")

    def test_vertex_cap(self):
        d = Digraph(frozenset("abcdefgh"))
        with pytest.raises(ScaleError):
            search_ordering_exhaustive(experts_of(d), ("e1",), "min-new-arcs")

    def test_greedy_single_expert_consistent(self):
        alpha = search_ordering_greedy(experts_of(CHAIN))
        assert consistent(alpha, CHAIN)

    def test_greedy_identical_experts_consistent(self):
        alpha = search_ordering_greedy(experts_of(CHAIN, CHAIN))
        assert consistent(alpha, CHAIN)

    @settings(max_examples=15, deadline=None)
    @given(dag_tuples(count=2, max_n=4))
    def test_greedy_never_beats_exhaustive_minimum(self, ds):
        d1, d2 = ds
        experts = experts_of(d1, d2)
        subset = ("e1", "e2")
        greedy_alpha = search_ordering_greedy(experts, subset)
        greedy_score = sum(
            len(reorder(d, greedy_alpha).new_arcs) for d in (d1, d2)
        )
        _, best = search_ordering_exhaustive(experts, subset, "min-new-arcs")
        assert greedy_score >= best


class TestExpertSetType:
    def test_rejects_vertex_mismatch(self):
        with pytest.raises(DomainError):
            experts_of(CHAIN, Digraph.from_arcs([("a", "b")]))

    def test_rejects_cyclic_expert(self):
        with pytest.raises(DomainError):
            experts_of(Digraph.from_arcs([("a", "b"), ("b", "a")]))

    def test_rejects_duplicate_labels(self):
        with pytest.raises(DomainError):
            ExpertSet((CHAIN, CHAIN), ("e", "e"))

    def test_serialization_round_trip(self):
        experts = experts_of(CHAIN, Digraph(CHAIN.vertices))
        assert ExpertSet.from_dict(experts.to_dict()) == experts

    def test_from_dict_accepts_bare_list(self):
        experts = experts_of(CHAIN)
        assert ExpertSet.from_dict(experts.to_dict()["experts"]) == experts
