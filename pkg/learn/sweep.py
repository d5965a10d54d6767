"""Train/test splitting, one-class evaluation, and the F1-versus-shots sweep."""

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import pandas as pd

from core.models import Dataset
from learn.kpca import KernelSpec
from learn.metrics import ONE_TO_ONE, TWO_TO_ONE, f1_score
from learn.ocsvm import INLIER, OcsvmModel, ocsvm_predict, ocsvm_train
from learn.preprocessing import FeatureMatrix, Standardization
from quantum.embed import DiagonalDensity, embed_diagonal
from quantum.observe import FeatureVector, sample_features

logger = logging.getLogger(__name__)


def feature_seed(seed: int, function_id: int) -> int:
    return seed ^ function_id


def measure_function(function_id: int, rho: DiagonalDensity, shots: int, seed: int) -> FeatureVector:
    """Features of one function from a generator seeded by (seed XOR id, shots)."""
    fseed = feature_seed(seed, function_id)
    rng = np.random.default_rng([fseed, shots])
    return sample_features(rho, shots, rng, function_id=function_id, seed=fseed)


def function_features(
    dataset: Dataset,
    densities: Sequence[DiagonalDensity],
    shots: int,
    seed: int,
) -> list[FeatureVector]:
    """
    Sampled features for every function.

    Function i is measured with a generator seeded by (seed XOR id, shots), so features
    never depend on evaluation order.
    """
    return [measure_function(e.id, rho, shots, seed) for e, rho in zip(dataset.entries, densities)]


def split_train_test(labels: np.ndarray, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Seeded shuffle within each class; first half trains, second half tests.

    Returns:
        Tuple of (train positions, test positions), each sorted ascending
    """
    labels = np.asarray(labels)
    rng = np.random.default_rng(seed)
    train, test = [], []
    for cls in (ONE_TO_ONE, TWO_TO_ONE):
        members = np.flatnonzero(labels == cls)
        shuffled = members[rng.permutation(members.size)]
        half = shuffled.size // 2
        train.extend(shuffled[:half])
        test.extend(shuffled[half:])
    return np.sort(np.array(train, dtype=np.int64)), np.sort(np.array(test, dtype=np.int64))


@dataclass
class OcsvmEvaluation:
    """A fitted model plus its F1 scores on both splits and both positive-class conventions."""

    model: OcsvmModel
    train_predictions: np.ndarray
    test_predictions: np.ndarray
    f1_train_inlier: float
    f1_train_outlier: float
    f1_test_inlier: float
    f1_test_outlier: float


def _as_labels(predictions: np.ndarray) -> np.ndarray:
    return np.where(predictions == INLIER, ONE_TO_ONE, TWO_TO_ONE)


def evaluate_ocsvm(
    features: FeatureMatrix,
    train: np.ndarray,
    test: np.ndarray,
    nu: float,
    spec: KernelSpec,
    tol: float = 1e-6,
    max_iter: int = 100_000,
) -> OcsvmEvaluation:
    """
    Standardize on the training split, fit on its 1:1 rows, score both splits.

    Args:
        features: All functions
        train: Training positions
        test: Test positions
        nu: One-class SVM nu
        spec: One-class SVM kernel
        tol: SMO KKT tolerance
        max_iter: SMO step cap

    Returns:
        OcsvmEvaluation
    """
    stats = Standardization.fit(features.rows[train])
    X = stats.transform(features.rows)
    truth = features.labels
    inliers = train[truth[train] == ONE_TO_ONE]
    model = ocsvm_train(X[inliers], nu=nu, spec=spec, tol=tol, max_iter=max_iter, stats=stats)

    pred_train = _as_labels(ocsvm_predict(model, X[train]))
    pred_test = _as_labels(ocsvm_predict(model, X[test]))
    f1_train_outlier = (
        f1_score(pred_train, truth[train], TWO_TO_ONE) if np.any(truth[train] == TWO_TO_ONE) else 0.0
    )
    return OcsvmEvaluation(
        model=model,
        train_predictions=pred_train,
        test_predictions=pred_test,
        f1_train_inlier=f1_score(pred_train, truth[train], ONE_TO_ONE),
        f1_train_outlier=f1_train_outlier,
        f1_test_inlier=f1_score(pred_test, truth[test], ONE_TO_ONE),
        f1_test_outlier=f1_score(pred_test, truth[test], TWO_TO_ONE),
    )


def sweep_cell(
    dataset: Dataset,
    densities: Sequence[DiagonalDensity],
    shots: int,
    seed: int,
    nu: float,
    spec: KernelSpec,
    feature_set: str = "mean_variance",
    tol: float = 1e-6,
    max_iter: int = 100_000,
) -> list[dict]:
    """Rows (train and test) of one (shots, seed) cell."""
    feats = function_features(dataset, densities, shots, seed)
    matrix = FeatureMatrix.from_features(feats, dataset.labels, feature_set)
    train, test = split_train_test(matrix.labels, seed)
    ev = evaluate_ocsvm(matrix, train, test, nu, spec, tol, max_iter)
    logger.debug(
        f"sweep cell shots={shots} seed={seed}: test F1={ev.f1_test_inlier:.4f}"
        f"{' (degenerate model)' if ev.model.degenerate else ''}"
    )
    return [
        {"shots": shots, "seed": seed, "split": "train", "f1_inlier": ev.f1_train_inlier, "f1_outlier": ev.f1_train_outlier},
        {"shots": shots, "seed": seed, "split": "test", "f1_inlier": ev.f1_test_inlier, "f1_outlier": ev.f1_test_outlier},
    ]


def shots_sweep(
    dataset: Dataset,
    shot_list: Sequence[int],
    seeds: Sequence[int],
    nu: float = 0.02,
    spec: KernelSpec = KernelSpec("linear"),
    feature_set: str = "mean_variance",
    tol: float = 1e-6,
    max_iter: int = 100_000,
) -> pd.DataFrame:
    """
    F1 of the one-class SVM across shot budgets and seeds.

    Args:
        dataset: Balanced dataset
        shot_list: Shot budgets
        seeds: Seeds; each seeds both the features and the split
        nu: One-class SVM nu
        spec: One-class SVM kernel
        feature_set: "mean_variance" or "mean"
        tol: SMO KKT tolerance
        max_iter: SMO step cap

    Returns:
        Tidy table with columns shots, seed, split, f1_inlier, f1_outlier
    """
    densities = [embed_diagonal(e.function) for e in dataset.entries]
    rows: list[dict] = []
    for shots in shot_list:
        for seed in seeds:
            rows.extend(sweep_cell(dataset, densities, shots, seed, nu, spec, feature_set, tol, max_iter))
    return pd.DataFrame(rows, columns=["shots", "seed", "split", "f1_inlier", "f1_outlier"])


def summarize_sweep(table: pd.DataFrame) -> pd.DataFrame:
    """Median and interquartile band of the inlier F1 per shots value."""
    test = table[table["split"] == "test"].groupby("shots")["f1_inlier"]
    train = table[table["split"] == "train"].groupby("shots")["f1_inlier"]
    return pd.DataFrame(
        {
            "median_f1_test": test.median(),
            "q25_f1_test": test.quantile(0.25),
            "q75_f1_test": test.quantile(0.75),
            "median_f1_train": train.median(),
        }
    ).reset_index()
