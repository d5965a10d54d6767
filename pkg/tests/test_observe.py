import numpy as np
import pytest

from core.models import BitString, FunctionKind
from quantum.embed import SymmetryOp, all_symmetry_ops, apply_symmetry, embed_diagonal
from quantum.observe import (
    dense_observable,
    exact_moments,
    model_evaluate,
    observable_spectrum,
    observable_value,
    sample_features,
)
from quantum.qsim import swap_operator


class TestObservable:
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_dense_sum_identity(self, n):
        dim = 1 << n
        expected = -np.eye(dim)
        expected[0, 0] = dim - 1
        np.testing.assert_array_equal(dense_observable(n).real, expected)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_swap_invariant(self, n):
        obs = dense_observable(n)
        for i in range(n):
            for j in range(i + 1, n):
                s = swap_operator(i, j, n)
                np.testing.assert_array_equal(s @ obs @ s.conj().T, obs)

    def test_values(self):
        assert observable_value(BitString(3, 0), 3) == 7.0
        assert observable_value(5, 3) == -1.0
        np.testing.assert_array_equal(observable_spectrum(2), [3, -1, -1, -1])

    def test_width_mismatch(self):
        with pytest.raises(ValueError):
            observable_value(BitString(2, 0), 3)

    def test_dense_width_cap(self):
        with pytest.raises(ValueError):
            dense_observable(5)


class TestExactMoments:
    def test_dataset_means(self, dataset6):
        for entry in dataset6.entries:
            expected = 0.0 if entry.function_class.kind is FunctionKind.ONE_TO_ONE else 1.0
            assert abs(model_evaluate(entry.function) - expected) < 1e-12

    def test_dataset_variances(self, dataset6):
        for entry in dataset6.entries:
            _, variance = exact_moments(embed_diagonal(entry.function))
            expected = 63.0 if entry.function_class.kind is FunctionKind.ONE_TO_ONE else 124.0
            assert abs(variance - expected) < 1e-12

    def test_bitflip_preserves_magnitude(self, dataset6):
        for entry in dataset6.entries:
            rho = embed_diagonal(entry.function)
            base = abs(exact_moments(rho)[0])
            for op in all_symmetry_ops(6):
                assert abs(exact_moments(apply_symmetry(rho, op))[0]) == pytest.approx(base, abs=1e-12)

    def test_swap_preserves_expectation(self, collapse2):
        rho = embed_diagonal(collapse2)
        assert exact_moments(apply_symmetry(rho, SymmetryOp.swap(0, 1)))[0] == exact_moments(rho)[0]


class TestSampledFeatures:
    def test_converges_to_exact(self, collapse2):
        rho = embed_diagonal(collapse2)
        fv = sample_features(rho, 200_000, np.random.default_rng(0), function_id=7, seed=3)
        mean, variance = exact_moments(rho)
        assert fv.mean == pytest.approx(mean, abs=0.05)
        assert fv.variance == pytest.approx(variance, rel=0.02)
        assert fv.as_row(1) == {
            "function_id": 7,
            "label": 1,
            "shots": 200_000,
            "seed": 3,
            "mean": fv.mean,
            "variance": fv.variance,
        }

    def test_reproducible(self, identity2):
        rho = embed_diagonal(identity2)
        a = sample_features(rho, 50, np.random.default_rng(9))
        b = sample_features(rho, 50, np.random.default_rng(9))
        assert a == b

    def test_needs_two_shots(self, identity2):
        with pytest.raises(ValueError):
            sample_features(embed_diagonal(identity2), 1, np.random.default_rng(0))

    def test_mean_error_falls_as_one_over_shots(self, identity2):
        # exact mean 0, variance 3
        rho = embed_diagonal(identity2)
        rng = np.random.default_rng(2024)
        grid = [10, 40, 160, 640, 2560]
        mse = [np.mean([sample_features(rho, s, rng).mean ** 2 for _ in range(400)]) for s in grid]
        slope = np.polyfit(np.log(grid), np.log(mse), 1)[0]
        assert slope == pytest.approx(-1.0, abs=0.1)
