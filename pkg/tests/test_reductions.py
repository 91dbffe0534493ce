import dataclasses

import pytest
from hypothesis import given, settings

from bnfuse.digraph import Digraph, is_acyclic
from bnfuse.errors import DomainError
from bnfuse.optimize import solve_mrs_exact
from bnfuse.reductions import (
    ReductionArtifact,
    backward_solution,
    forward_solution,
    reduce_dmrs_to_2dmrs,
    reduce_mnas_to_2mnas,
    reduce_mrs_to_dmrs,
    reduce_mrs_to_mnas,
    verify_claim1,
    verify_reduction,
)

from .strategies import dag_tuples, digraphs

THREE_CYCLE = Digraph.from_arcs([("a", "b"), ("b", "c"), ("c", "a")])
TWO_CYCLE = Digraph.from_arcs([("a", "b"), ("b", "a")])


class TestBreakIntoThreeParts:
    def test_three_cycle_counts(self):
        art = reduce_mrs_to_dmrs(THREE_CYCLE)
        t1, t2 = art.target
        assert len(t1.vertices) == 3 + 6
        assert len(t1.arcs) == 3
        assert len(t2.arcs) == 6
        assert is_acyclic(t1) and is_acyclic(t2)

    def test_three_cycle_optimum_correspondence(self):
        report = verify_reduction(reduce_mrs_to_dmrs(THREE_CYCLE))
        assert report.passed
        assert report.source_objective == report.target_objective == 1

    def test_acyclic_source_is_free(self):
        report = verify_reduction(reduce_mrs_to_dmrs(Digraph.from_arcs([("a", "b")])))
        assert report.passed
        assert report.source_objective == 0

    def test_two_cycle(self):
        report = verify_reduction(reduce_mrs_to_dmrs(TWO_CYCLE))
        assert report.passed
        assert report.source_objective == 1

    def test_mapping_round_trip(self):
        art = reduce_mrs_to_dmrs(THREE_CYCLE)
        sol = solve_mrs_exact(THREE_CYCLE)
        assert backward_solution(art, forward_solution(art, sol.arcs)) == sol.arcs

    def test_provenance_total_and_fresh(self):
        art = reduce_mrs_to_dmrs(THREE_CYCLE)
        gadget = art.target[0].vertices - THREE_CYCLE.vertices
        assert set(art.provenance_map) == gadget
        assert not gadget & THREE_CYCLE.vertices


class TestParallelPathBlowup:
    def test_fresh_counts_are_squared(self):
        d1 = Digraph(frozenset("abc"))
        d2 = Digraph.from_arcs([("a", "b")], vertices="c")
        art = reduce_dmrs_to_2dmrs(d1, d2)
        fresh = art.target[1].vertices - d1.vertices
        assert len(fresh) == 9
        assert len(art.target[1].arcs) == 18

    def test_source_optimum_zero_maps_to_zero(self):
        d1 = Digraph.from_arcs([("a", "b")])
        d2 = Digraph.from_arcs([("a", "b")])
        report = verify_reduction(reduce_dmrs_to_2dmrs(d1, d2))
        assert report.passed and report.target_objective == 0

    def test_antiparallel_instance(self):
        d1 = Digraph.from_arcs([("a", "b")])
        d2 = Digraph.from_arcs([("b", "a")])
        report = verify_reduction(reduce_dmrs_to_2dmrs(d1, d2))
        assert report.passed
        assert report.target_objective == 1
        assert dict(report.checks)["target_solution_within_first_digraph"]


class TestWitnessGadget:
    def test_counts_match_the_formula(self):
        art = reduce_mrs_to_mnas(THREE_CYCLE)
        t1, t2 = art.target
        assert len(t1.vertices) == 3 + 3 * 3
        assert len(t1.arcs) == 2 * 3
        assert len(t2.arcs) == 2 * 3
        assert is_acyclic(t1) and is_acyclic(t2)

    def test_acyclic_source_is_free(self):
        report = verify_reduction(reduce_mrs_to_mnas(Digraph.from_arcs([("a", "b")])))
        assert report.passed and report.target_objective == 0

    def test_three_cycle_optimum_and_backward_mapping(self):
        art = reduce_mrs_to_mnas(THREE_CYCLE)
        report = verify_reduction(art)
        assert report.passed
        assert report.source_objective == report.target_objective == 1


class TestFeederGadget:
    def test_fresh_counts(self):
        d1 = Digraph.from_arcs([("a", "b")])
        d2 = Digraph.from_arcs([("b", "a")])
        art = reduce_mnas_to_2mnas(d1, d2)
        fresh = art.target[1].vertices - d1.vertices
        assert len(fresh) == 8
        assert len(art.target[1].arcs - d2.arcs) == 8

    def test_zero_cost_instance(self):
        d1 = Digraph.from_arcs([("a", "b")])
        d2 = Digraph.from_arcs([("b", "a")])
        report = verify_reduction(reduce_mnas_to_2mnas(d1, d2))
        assert report.passed
        assert report.target_objective == 0
        assert dict(report.checks)["target_sequence_within_first_digraph"]

    def test_source_objective_zero(self):
        d1 = Digraph.from_arcs([("a", "b")])
        d2 = Digraph.from_arcs([("a", "b")])
        report = verify_reduction(reduce_mnas_to_2mnas(d1, d2))
        assert report.passed and report.source_objective == 0


class TestVerifyNegativeControl:
    def test_corrupted_target_fails(self):
        art = reduce_mrs_to_dmrs(THREE_CYCLE)
        # drop one entry stub so the target union is acyclic without flips
        t1, t2 = art.target
        removed = sorted(t2.arcs)[0]
        corrupted = dataclasses.replace(
            art, target=(t1, Digraph(t2.vertices, t2.arcs - {removed}))
        )
        report = verify_reduction(corrupted)
        assert not report.passed
        assert report.witnesses


class TestArtifactSerialization:
    def test_round_trip(self):
        art = reduce_mrs_to_mnas(TWO_CYCLE)
        assert ReductionArtifact.from_dict(art.to_dict()) == art

    def test_rejects_unknown_kind(self):
        with pytest.raises(DomainError):
            ReductionArtifact("shuffle", (), (), ())


class TestExclusiveCycles:
    def test_three_cycle_witness(self):
        sol = solve_mrs_exact(THREE_CYCLE)
        report = verify_claim1(THREE_CYCLE, sol)
        assert report.passed
        ((arc, cycle),) = report.witnesses
        assert set(cycle) == THREE_CYCLE.arcs

    def test_two_disjoint_cycles(self):
        d = Digraph.from_arcs(
            [("a", "b"), ("b", "c"), ("c", "a"), ("d", "e"), ("e", "f"), ("f", "d")]
        )
        report = verify_claim1(d, solve_mrs_exact(d))
        assert report.passed
        assert len(report.witnesses) == 2

    def test_empty_solution_vacuous(self):
        dag = Digraph.from_arcs([("a", "b")])
        report = verify_claim1(dag, solve_mrs_exact(dag))
        assert report.passed and report.witnesses == ()

    def test_rejects_foreign_arcs(self):
        sol = solve_mrs_exact(THREE_CYCLE)
        with pytest.raises(DomainError):
            verify_claim1(Digraph.from_arcs([("x", "y")]), sol)

    @settings(max_examples=60, deadline=None)
    @given(digraphs(max_n=5, max_arcs=10))
    def test_every_minimum_solution_has_witnesses(self, d):
        report = verify_claim1(d, solve_mrs_exact(d))
        assert report.passed


class TestRandomizedSuites:
    @settings(max_examples=20, deadline=None)
    @given(digraphs(max_n=4, max_arcs=5))
    def test_break_into_three_parts_on_random_sources(self, d):
        assert verify_reduction(reduce_mrs_to_dmrs(d)).passed

    @settings(max_examples=12, deadline=None)
    @given(digraphs(max_n=3, max_arcs=4))
    def test_witness_gadget_on_random_sources(self, d):
        assert verify_reduction(reduce_mrs_to_mnas(d)).passed

    @settings(max_examples=12, deadline=None)
    @given(dag_tuples(count=2, max_n=3))
    def test_parallel_paths_on_random_sources(self, ds):
        assert verify_reduction(reduce_dmrs_to_2dmrs(*ds)).passed

    @settings(max_examples=10, deadline=None)
    @given(dag_tuples(count=2, max_n=3))
    def test_feeder_gadget_on_random_sources(self, ds):
        assert verify_reduction(reduce_mnas_to_2mnas(*ds)).passed


class TestShippedFixtures:
    def test_every_shipped_image_verifies(self):
        from importlib.resources import files

        fixture_dir = files("bnfuse") / "fixtures"
        names = [
            "reduction_image_mrs_to_dmrs.json",
            "reduction_image_mrs_to_mnas.json",
            "reduction_image_dmrs_to_2dmrs.json",
            "reduction_image_mnas_to_2mnas.json",
        ]
        import json

        for name in names:
            data = json.loads((fixture_dir / name).read_text(encoding="utf-8"))
            artifact = ReductionArtifact.from_dict(data)
            assert verify_reduction(artifact).passed, name
