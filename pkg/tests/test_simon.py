import numpy as np
import pytest
from scipy.stats import chisquare

from core.boolfn import classify_exact, gen_one_to_one, gen_two_to_one
from core.gf2 import parity
from core.models import BitString, FunctionKind
from quantum.simon import (
    Gf2Solver,
    SimonSampler,
    classical_baseline,
    fit_separation,
    run_simon,
    separation_experiment,
    simon_distribution,
    simon_sample,
    solve_hidden,
    solver_add,
)
from utils.query_tracker import QueryBudgetExhausted, QueryMethod, QueryTracker


class TestSimonDistribution:
    def test_collapse_support(self, collapse2):
        # s = 01: outcomes with z.s = 0 are 00 and 10
        np.testing.assert_allclose(simon_distribution(collapse2), [0.5, 0, 0.5, 0], atol=1e-12)

    def test_bijection_uniform(self, identity2):
        np.testing.assert_allclose(simon_distribution(identity2), np.full(4, 0.25), atol=1e-12)

    @pytest.mark.parametrize("seed", range(4))
    def test_fast_law_matches_circuit(self, seed):
        rng = np.random.default_rng(seed)
        f = gen_two_to_one(4, rng, "table")
        s = classify_exact(f).hidden.value
        probs = simon_distribution(f)
        support = [z for z in range(16) if (z & s).bit_count() % 2 == 0]
        np.testing.assert_allclose(probs[support], np.full(8, 1 / 8), atol=1e-12)

    def test_slow_sampler_respects_period(self, table3_two_to_one, rng):
        for z in SimonSampler(table3_two_to_one, fast=False).sample_values(rng, 500):
            assert (int(z) & 0b101).bit_count() % 2 == 0

    def test_single_sample_width(self, identity2, rng):
        assert simon_sample(identity2, rng).width == 2


class TestSimonSamplingLaw:
    def test_two_to_one_orthogonal(self, dataset6):
        rng = np.random.default_rng(0)
        for entry in dataset6.by_kind(FunctionKind.TWO_TO_ONE):
            s = entry.function_class.hidden.value
            z = SimonSampler(entry.function).sample_values(rng, 10_000)
            assert not parity(z & s).any()

    def test_one_to_one_uniform(self, dataset6):
        rng = np.random.default_rng(1)
        bijections = dataset6.by_kind(FunctionKind.ONE_TO_ONE)
        assert len(bijections) == 60
        for entry in bijections:
            z = SimonSampler(entry.function).sample_values(rng, 10_000)
            counts = np.bincount(z, minlength=64)
            # family-wise level 0.001 across the 60 functions
            assert chisquare(counts).pvalue > 0.001 / len(bijections)


class TestGf2Solver:
    def test_rank_and_hidden(self):
        solver = Gf2Solver(3)
        for z in ("010", "100", "110"):
            solver.add(BitString.parse(z))
        assert solver.rank == 2
        assert solver.solve_hidden() == BitString.parse("001")

    def test_undetermined(self):
        solver = Gf2Solver(3)
        assert solver_add(solver, BitString.parse("011")) == 1
        assert solver_add(solver, BitString.parse("011")) == 1
        assert solve_hidden(solver) is None

    def test_full_rank_gives_zero(self):
        solver = Gf2Solver(2)
        solver.add(BitString.parse("01"))
        solver.add(BitString.parse("10"))
        assert solver.solve_hidden().is_zero()

    def test_rows_stay_reduced(self):
        solver = Gf2Solver(4)
        for z in ("1100", "0110", "0011"):
            solver.add(BitString.parse(z))
        for pivot, row in solver.basis.items():
            for other, other_row in solver.basis.items():
                if other != pivot:
                    assert not (other_row >> pivot) & 1


class TestRunSimon:
    def test_collapse_recovers_hidden(self, collapse2, rng):
        report = run_simon(collapse2, rng)
        assert report.conclusive
        assert report.decided_class.kind is FunctionKind.TWO_TO_ONE
        assert str(report.recovered_hidden) == "01"
        assert report.classical_verification_queries == 2

    def test_bijection(self, identity2, rng):
        report = run_simon(identity2, rng)
        assert report.decided_class.kind is FunctionKind.ONE_TO_ONE
        assert report.recovered_hidden.is_zero()
        # the nonzero candidate is always checked classically
        assert report.classical_verification_queries == 2
        assert report.rank == 1

    def test_budget_below_n_rejected(self, identity2, rng):
        with pytest.raises(ValueError):
            run_simon(identity2, rng, max_queries=1)

    def test_exhausted_budget_inconclusive(self):
        f = gen_one_to_one(10, np.random.default_rng(0))
        # ten samples fall short of rank 9 about 13% of the time
        outcomes = [run_simon(f, np.random.default_rng(s), max_queries=10) for s in range(100)]
        assert any(not r.conclusive for r in outcomes)
        assert all(r.quantum_queries <= 10 for r in outcomes)

    def test_dataset_decisions_exact(self, dataset6):
        queries = []
        for seed in range(42, 47):
            for entry in dataset6.entries:
                report = run_simon(entry.function, np.random.default_rng(seed ^ entry.id))
                assert report.decided_class == entry.function_class
                queries.append(report.quantum_queries)
        assert np.mean(queries) <= 12


class TestClassicalBaseline:
    def test_one_to_one_needs_half_plus_one(self):
        f = gen_one_to_one(6, np.random.default_rng(0))
        report = classical_baseline(f, np.random.default_rng(1))
        assert report.queries == 33
        assert report.decided_class.kind is FunctionKind.ONE_TO_ONE

    def test_two_to_one_finds_hidden(self, collapse2, rng):
        report = classical_baseline(collapse2, rng)
        assert report.decided_class == classify_exact(collapse2)
        assert 2 <= report.queries <= 3


class TestQueryTracker:
    def test_counts_per_method(self, identity2):
        tracker = QueryTracker(identity2)
        tracker.evaluate(1)
        tracker.log_query(QueryMethod.QUANTUM, 3)
        assert tracker.classical_queries == 1
        assert tracker.quantum_queries == 3
        assert tracker.log_query(QueryMethod.QUANTUM) == 4

    def test_budget(self, identity2):
        tracker = QueryTracker(identity2, budgets={QueryMethod.CLASSICAL: 1})
        assert tracker.evaluate(BitString(2, 3)) == 3
        with pytest.raises(QueryBudgetExhausted) as err:
            tracker.evaluate(0)
        assert err.value.budget == 1


class TestSeparation:
    def test_small_experiment(self):
        table, fit = separation_experiment([3, 4], trials=10, seed=0)
        assert set(table["method"]) == {"quantum", "classical"}
        assert table["correct"].all()
        one_to_one = table[(table["method"] == "classical") & (table["class"] == "1:1")]
        assert set(one_to_one["queries"]) == {5, 9} and len(one_to_one) == 20
        assert np.isfinite(fit.quantum_linear_slope)

    def test_single_width_gives_nan(self):
        table, fit = separation_experiment([3], trials=3, seed=0)
        assert np.isnan(fit.classical_log2_slope)
        assert fit_separation(table).means.shape[0] == 4

    @pytest.mark.slow
    def test_query_growth(self):
        table, fit = separation_experiment([4, 6, 8, 10], trials=200, seed=42)
        assert table["correct"].all()
        assert fit.classical_log2_slope == pytest.approx(0.5, abs=0.1)
        assert fit.quantum_linear_slope == pytest.approx(1.0, abs=0.2)
        certify = table[(table["method"] == "classical") & (table["class"] == "1:1")]
        for n, group in certify.groupby("n"):
            assert set(group["queries"]) == {(1 << (n - 1)) + 1}
