import numpy as np
import pytest

from core.errors import ConvergenceError, DegenerateKernel
from learn.kmeans import kmeans_cluster, kmeans_plus_plus, lloyd
from learn.kpca import KernelSpec, center_kernel, jacobi_eigh, kernel_matrix, kpca_project, median_gamma
from learn.metrics import ONE_TO_ONE, TWO_TO_ONE, best_relabel_agreement, f1_score, separation_margin
from learn.ocsvm import INLIER, OUTLIER, ocsvm_predict, ocsvm_score, ocsvm_train
from learn.preprocessing import FeatureMatrix, Standardization, standardize
from learn.sweep import evaluate_ocsvm, function_features, shots_sweep, split_train_test, summarize_sweep
from quantum.embed import embed_diagonal
from quantum.observe import FeatureVector


def two_blobs(rng, m=40, gap=6.0):
    a = rng.normal(size=(m, 2))
    b = rng.normal(size=(m, 2)) + gap
    return np.vstack([a, b]), np.array([0] * m + [1] * m)


class TestPreprocessing:
    def test_standardization(self):
        rows = np.array([[1.0, 5.0], [3.0, 5.0]])
        stats = Standardization.fit(rows)
        np.testing.assert_allclose(stats.transform(rows), [[-1.0, 0.0], [1.0, 0.0]])

    def test_feature_matrix(self):
        fvs = [FeatureVector(0.1, 60.0, 100, i, 0) for i in range(3)]
        fm = FeatureMatrix.from_features(fvs, [0, 0, 1])
        assert fm.rows.shape == (3, 2)
        assert FeatureMatrix.from_features(fvs, [0, 0, 1], "mean").rows.shape == (3, 1)
        sub = fm.take([2])
        assert sub.ids == [2] and sub.labels.tolist() == [1]

    def test_unknown_feature_set(self):
        with pytest.raises(ValueError):
            FeatureMatrix.from_features([], [], "cubic")

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            FeatureMatrix(rows=np.array([[np.nan, 1.0]]), ids=[0], labels=[0])

    def test_standardize_carries_stats(self):
        fm = FeatureMatrix(rows=np.array([[0.0, 1.0], [2.0, 3.0]]), ids=[0, 1], labels=[0, 1])
        out = standardize(fm, fm)
        assert out.stats is not None
        np.testing.assert_allclose(out.rows.mean(axis=0), 0.0)


class TestJacobi:
    def test_matches_numpy(self):
        rng = np.random.default_rng(0)
        a = rng.normal(size=(12, 12))
        sym = a + a.T
        values, vectors = jacobi_eigh(sym)
        np.testing.assert_allclose(values, np.sort(np.linalg.eigvalsh(sym))[::-1], atol=1e-8)
        np.testing.assert_allclose(sym @ vectors, vectors * values, atol=1e-8)

    def test_not_symmetric(self):
        with pytest.raises(ValueError):
            jacobi_eigh(np.array([[1.0, 2.0], [0.0, 1.0]]))

    def test_sweep_cap(self):
        rng = np.random.default_rng(1)
        a = rng.normal(size=(10, 10))
        with pytest.raises(ConvergenceError):
            jacobi_eigh(a + a.T, tol=0.0, max_sweeps=1)

    def test_spread_spectrum_converges(self):
        rng = np.random.default_rng(2)
        q, _ = np.linalg.qr(rng.normal(size=(40, 40)))
        spectrum = np.logspace(3, -6, 40)
        values, vectors = jacobi_eigh(q @ np.diag(spectrum) @ q.T)
        np.testing.assert_allclose(values, spectrum, atol=1e-6)
        np.testing.assert_allclose(vectors.T @ vectors, np.eye(40), atol=1e-10)

    def test_diagonal_input(self):
        values, vectors = jacobi_eigh(np.diag([1e4, 3.0, 1e-9]))
        np.testing.assert_array_equal(values, [1e4, 3.0, 1e-9])
        np.testing.assert_allclose(np.abs(vectors), np.eye(3))


class TestKpca:
    @pytest.mark.parametrize("kind", ["linear", "rbf"])
    def test_gram_is_psd(self, rng, kind):
        X, _ = two_blobs(rng, 20)
        K = kernel_matrix(X, KernelSpec(kind))
        np.testing.assert_array_equal(K, K.T)
        assert np.linalg.eigvalsh(K).min() >= -1e-8

    def test_centered_gram(self, rng):
        X, _ = two_blobs(rng, 10)
        Kc = center_kernel(kernel_matrix(X, KernelSpec("rbf")))
        np.testing.assert_allclose(Kc.sum(axis=0), 0.0, atol=1e-10)

    def test_coordinates_centered(self, rng):
        X, _ = two_blobs(rng, 15)
        result = kpca_project(X, KernelSpec("rbf"))
        np.testing.assert_allclose(result.coords.mean(axis=0), 0.0, atol=1e-10)
        assert result.eigenvalues[0] >= result.eigenvalues[1] > 0

    def test_linear_kernel_matches_pca(self, rng):
        X, labels = two_blobs(rng, 15)
        result = kpca_project(X, KernelSpec("linear"))
        centered = X - X.mean(axis=0)
        top = np.linalg.eigvalsh(centered.T @ centered)[::-1]
        np.testing.assert_allclose(result.eigenvalues, top, rtol=1e-8)
        assert separation_margin(result.coords[:, 0], labels) > 0

    def test_degenerate(self):
        with pytest.raises(DegenerateKernel):
            kpca_project(np.ones((5, 2)), KernelSpec("linear"))

    def test_median_gamma(self):
        X = np.array([[0.0], [1.0], [3.0]])
        # squared distances 1, 9, 4 -> median 4
        assert median_gamma(X) == pytest.approx(1 / 8)

    def test_bad_kernel(self):
        with pytest.raises(ValueError):
            KernelSpec("poly")


class TestKMeans:
    def test_recovers_blobs(self, rng):
        X, labels = two_blobs(rng)
        result = kmeans_cluster(X, k=2, rng=np.random.default_rng(0))
        assert best_relabel_agreement(result.assignments, labels) == 1.0

    def test_inertia_monotone(self, rng):
        X, _ = two_blobs(rng, gap=1.0)
        result = lloyd(X, kmeans_plus_plus(X, 3, rng))
        assert all(b <= a + 1e-9 for a, b in zip(result.history, result.history[1:]))

    def test_empty_cluster_keeps_centroid(self):
        X = np.array([[0.0], [0.1], [0.2]])
        result = lloyd(X, np.array([[0.1], [100.0]]))
        assert result.centroids[1, 0] == 100.0

    def test_too_few_points(self):
        with pytest.raises(ValueError):
            kmeans_cluster(np.zeros((1, 2)), k=2)

    def test_reproducible(self, rng):
        X, _ = two_blobs(rng)
        a = kmeans_cluster(X, rng=np.random.default_rng(5))
        b = kmeans_cluster(X, rng=np.random.default_rng(5))
        np.testing.assert_array_equal(a.assignments, b.assignments)


class TestOcsvm:
    def test_nu_property(self):
        rng = np.random.default_rng(0)
        X = rng.normal(size=(200, 2))
        model = ocsvm_train(X, nu=0.1, spec=KernelSpec("rbf"))
        outliers = np.mean(model.decision_function(X) < 0)
        assert outliers <= 0.1
        support_fraction = np.mean(model.alpha > 1e-12)
        assert support_fraction >= 0.1 - 1e-9

    def test_dual_constraints(self, rng):
        X = rng.normal(size=(50, 2))
        model = ocsvm_train(X, nu=0.2)
        assert model.alpha.sum() == pytest.approx(1.0)
        assert np.all(model.alpha >= 0)
        assert np.all(model.alpha <= model.upper_bound + 1e-12)

    def test_far_point_is_outlier(self, rng):
        X = rng.normal(size=(60, 2))
        model = ocsvm_train(X, nu=0.05, spec=KernelSpec("rbf"))
        assert ocsvm_predict(model, np.array([[20.0, 20.0]]))[0] == OUTLIER
        assert isinstance(ocsvm_score(model, np.zeros(2)), float)

    def test_linear_half_space(self):
        # inliers on the line x = 1; the boundary bisects them from the origin at x = 1/2
        X = np.column_stack([np.ones(20), np.linspace(-1, 1, 20)])
        model = ocsvm_train(X, nu=0.02)
        np.testing.assert_allclose(model.decision_function(X), 0.5, atol=1e-5)
        assert not model.degenerate
        assert ocsvm_predict(model, np.array([[3.0, 0.0]]))[0] == INLIER
        assert ocsvm_predict(model, np.array([[-3.0, 0.0]]))[0] == OUTLIER

    def test_invalid_nu(self):
        with pytest.raises(ValueError):
            ocsvm_train(np.zeros((5, 2)), nu=0.0)

    def test_iteration_cap(self, rng):
        X = rng.normal(size=(40, 2))
        with pytest.raises(ConvergenceError):
            ocsvm_train(X, nu=0.5, spec=KernelSpec("rbf"), tol=0.0, max_iter=1)

    def test_two_points_full_nu(self):
        model = ocsvm_train(np.array([[1.0, 0.0], [0.0, 1.0]]), nu=1.0)
        np.testing.assert_allclose(model.alpha, [0.5, 0.5])
        assert model.level == pytest.approx(0.5)
        assert model.rho == pytest.approx(0.25)

    def test_origin_inside_hull_is_degenerate(self):
        X = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
        model = ocsvm_train(X, nu=0.5)
        assert model.degenerate
        np.testing.assert_array_equal(model.decision_function(X), 0.0)
        assert np.all(ocsvm_predict(model, np.array([[5.0, 5.0], [-5.0, 0.0]])) == INLIER)

    def test_tolerance_scales_with_features(self, rng):
        X = rng.normal(size=(60, 2)) + 4.0
        small = ocsvm_train(X, nu=0.1)
        large = ocsvm_train(X * 1000.0, nu=0.1)
        assert large.kkt_gap < 1e-6 * np.max(np.sum((X * 1000.0) ** 2, axis=1))
        np.testing.assert_array_equal(ocsvm_predict(small, X), ocsvm_predict(large, X * 1000.0))

    def test_bisector_between_blobs(self, rng):
        inliers = rng.normal(scale=0.1, size=(50, 2)) + [3.0, 0.0]
        model = ocsvm_train(inliers, nu=0.02)
        assert ocsvm_predict(model, np.array([[2.0, 0.0]]))[0] == INLIER
        assert ocsvm_predict(model, np.array([[1.0, 0.0]]))[0] == OUTLIER


class TestMetrics:
    def test_f1(self):
        truth = np.array([0, 0, 1, 1])
        assert f1_score(np.array([0, 0, 1, 1]), truth) == 1.0
        assert f1_score(np.array([0, 1, 1, 1]), truth) == pytest.approx(2 / 3)
        assert f1_score(np.array([1, 1, 1, 1]), truth) == 0.0
        assert f1_score(np.array([0, 0, 1, 1]), truth, positive_class=TWO_TO_ONE) == 1.0

    def test_f1_ignores_order(self, rng):
        truth = rng.integers(0, 2, size=50)
        predictions = rng.integers(0, 2, size=50)
        perm = rng.permutation(50)
        assert f1_score(predictions[perm], truth[perm]) == f1_score(predictions, truth)

    def test_f1_absent_class(self):
        with pytest.raises(ValueError):
            f1_score(np.array([0, 0]), np.array([1, 1]), positive_class=ONE_TO_ONE)

    def test_relabel_agreement(self):
        assert best_relabel_agreement(np.array([1, 1, 0, 0]), np.array([0, 0, 1, 1])) == 1.0
        assert best_relabel_agreement(np.array([0, 1, 0, 1]), np.array([0, 0, 1, 1])) == 0.5

    def test_margin(self):
        assert separation_margin(np.array([0.0, 1.0, 3.0, 4.0]), np.array([0, 0, 1, 1])) == 2.0
        assert separation_margin(np.array([0.0, 2.0, 1.0, 4.0]), np.array([0, 0, 1, 1])) == -1.0


class TestSweep:
    def test_split_balanced_and_disjoint(self):
        labels = np.array([0] * 60 + [1] * 60)
        train, test = split_train_test(labels, 42)
        assert len(train) == len(test) == 60
        assert np.sum(labels[train] == 0) == 30
        assert not set(train) & set(test)

    def test_features_independent_of_order(self, small_dataset):
        densities = [embed_diagonal(e.function) for e in small_dataset.entries]
        forward = function_features(small_dataset, densities, 100, 3)
        ds_rev = type(small_dataset)(
            n=small_dataset.n, seed=small_dataset.seed, mode=small_dataset.mode, entries=small_dataset.entries[::-1]
        )
        backward = function_features(ds_rev, densities[::-1], 100, 3)
        assert forward == backward[::-1]

    def test_evaluate_perfect_features(self, small_dataset):
        # noiseless features: exact moments
        fvs = [FeatureVector(float(e.label), 15.0 + 13.0 * e.label, 0, e.id, 0) for e in small_dataset.entries]
        fm = FeatureMatrix.from_features(fvs, small_dataset.labels)
        train, test = split_train_test(fm.labels, 0)
        ev = evaluate_ocsvm(fm, train, test, nu=0.02, spec=KernelSpec("linear"))
        assert ev.f1_test_inlier == 1.0
        assert ev.f1_test_outlier == 1.0

    def test_sweep_table_shape(self, small_dataset):
        table = shots_sweep(small_dataset, [10, 100], seeds=[0, 1])
        assert list(table.columns) == ["shots", "seed", "split", "f1_inlier", "f1_outlier"]
        assert len(table) == 2 * 2 * 2
        summary = summarize_sweep(table)
        assert summary["shots"].tolist() == [10, 100]

    def test_sweep_reproducible(self, small_dataset):
        a = shots_sweep(small_dataset, [20], seeds=[5])
        b = shots_sweep(small_dataset, [20], seeds=[5])
        assert a.equals(b)


DEFAULT_GRID = [10, 50, 100, 500, 1000, 5000]
DEFAULT_SEEDS = [42, 43, 44, 45, 46]


@pytest.fixture(scope="module")
def default_sweep(dataset6):
    return shots_sweep(dataset6, DEFAULT_GRID, seeds=DEFAULT_SEEDS)


@pytest.mark.slow
class TestFullScaleClassification:
    def test_default_grid_completes(self, default_sweep):
        assert len(default_sweep) == len(DEFAULT_GRID) * len(DEFAULT_SEEDS) * 2

    def test_plateau_at_full_budget(self, default_sweep):
        test = default_sweep[default_sweep["split"] == "test"]
        assert test[test["shots"] == 5000]["f1_inlier"].median() >= 0.98
        cell = test[(test["shots"] == 5000) & (test["seed"] == 42)]
        assert cell["f1_inlier"].item() >= 0.98

    def test_growth_with_shots(self, default_sweep):
        medians = summarize_sweep(default_sweep).set_index("shots")["median_f1_test"]
        assert medians[5000] - medians[10] >= 0.2
        values = medians.loc[DEFAULT_GRID].to_numpy()
        assert np.all(np.diff(values) >= 0)

    def test_two_shots_cannot_classify(self, dataset6):
        table = shots_sweep(dataset6, [2], seeds=DEFAULT_SEEDS)
        assert table[table["split"] == "test"]["f1_inlier"].median() < 0.8

    @pytest.mark.parametrize("seed", range(42, 52))
    def test_kpca_on_sampled_features(self, dataset6, seed):
        densities = [embed_diagonal(e.function) for e in dataset6.entries]
        fm = FeatureMatrix.from_features(function_features(dataset6, densities, 5000, seed), dataset6.labels)
        X = Standardization.fit(fm.rows).transform(fm.rows)
        result = kpca_project(X, KernelSpec("rbf"))
        assert result.eigenvalues[0] > 0

    def test_kmeans_separates_classes(self, dataset6):
        densities = [embed_diagonal(e.function) for e in dataset6.entries]
        for seed in range(42, 47):
            fm = FeatureMatrix.from_features(function_features(dataset6, densities, 5000, seed), dataset6.labels)
            X = Standardization.fit(fm.rows).transform(fm.rows)
            result = kmeans_cluster(X, rng=np.random.default_rng(seed))
            assert best_relabel_agreement(result.assignments, fm.labels) == 1.0
