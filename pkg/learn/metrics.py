"""Scores used to judge the unsupervised learners against ground truth."""

import itertools

import numpy as np

# Class labels: 0 = 1:1 (inlier), 1 = 2:1 (outlier)
ONE_TO_ONE = 0
TWO_TO_ONE = 1


def f1_score(predictions: np.ndarray, truth: np.ndarray, positive_class: int = ONE_TO_ONE) -> float:
    """
    F1 = 2PR / (P + R) for the given positive class; 0 when P + R = 0.

    Args:
        predictions: Predicted class labels
        truth: Ground-truth class labels
        positive_class: Label treated as positive (1:1 by convention)

    Returns:
        F1 in [0, 1]
    """
    predictions = np.asarray(predictions)
    truth = np.asarray(truth)
    if predictions.shape != truth.shape:
        raise ValueError(f"length mismatch: {predictions.shape} vs {truth.shape}")
    if not np.any(truth == positive_class):
        raise ValueError(f"positive class {positive_class} absent from ground truth")
    predicted_pos = predictions == positive_class
    actual_pos = truth == positive_class
    tp = int(np.sum(predicted_pos & actual_pos))
    fp = int(np.sum(predicted_pos & ~actual_pos))
    fn = int(np.sum(~predicted_pos & actual_pos))
    if tp == 0:
        return 0.0
    precision = tp / (tp + fp)
    recall = tp / (tp + fn)
    return 2 * precision * recall / (precision + recall)


def best_relabel_agreement(assignments: np.ndarray, truth: np.ndarray, k: int = 2) -> float:
    """Fraction of points whose cluster matches the truth under the best cluster relabelling."""
    assignments = np.asarray(assignments)
    truth = np.asarray(truth)
    best = 0.0
    for perm in itertools.permutations(range(k)):
        mapped = np.asarray(perm)[assignments]
        best = max(best, float(np.mean(mapped == truth)))
    return best


def separation_margin(values: np.ndarray, truth: np.ndarray) -> float:
    """
    Gap between two classes along one coordinate.

    Positive when a single threshold separates them perfectly (either orientation);
    otherwise the negative overlap.
    """
    values = np.asarray(values, dtype=float)
    truth = np.asarray(truth)
    a, b = values[truth == ONE_TO_ONE], values[truth == TWO_TO_ONE]
    if a.size == 0 or b.size == 0:
        raise ValueError("separation margin needs both classes")
    return float(max(a.min() - b.max(), b.min() - a.max()))
