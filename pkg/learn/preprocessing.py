"""Feature matrices and standardization."""

import logging
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from config import FEATURE_SETS
from quantum.observe import FeatureVector

logger = logging.getLogger(__name__)

FEATURE_COLUMNS = {
    "mean_variance": ("mean", "variance"),
    "mean": ("mean",),
}


@dataclass(frozen=True)
class Standardization:
    """Per-column shift and scale fitted on a training matrix (population std)."""

    mean: np.ndarray
    std: np.ndarray

    @classmethod
    def fit(cls, rows: np.ndarray) -> "Standardization":
        rows = np.asarray(rows, dtype=float)
        if rows.ndim != 2 or rows.shape[0] == 0:
            raise ValueError("standardization needs a non-empty 2-D training matrix")
        return cls(mean=rows.mean(axis=0), std=rows.std(axis=0))

    def transform(self, rows: np.ndarray) -> np.ndarray:
        """(x - mean) / std; zero-variance columns map to zeros."""
        rows = np.asarray(rows, dtype=float)
        out = np.zeros_like(rows)
        live = self.std > 0
        out[:, live] = (rows[:, live] - self.mean[live]) / self.std[live]
        return out


@dataclass
class FeatureMatrix:
    """m samples x d feature columns, with ids and ground-truth labels for evaluation."""

    rows: np.ndarray
    ids: list[int]
    labels: np.ndarray
    columns: tuple[str, ...] = ("mean", "variance")
    stats: Standardization | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        self.rows = np.asarray(self.rows, dtype=float)
        if self.rows.ndim != 2:
            raise ValueError("feature rows must be 2-D")
        self.labels = np.asarray(self.labels, dtype=np.int64)
        m = self.rows.shape[0]
        if len(self.ids) != m or self.labels.shape != (m,):
            raise ValueError(f"ids/labels length does not match {m} rows")
        if self.rows.shape[1] != len(self.columns):
            raise ValueError(f"{self.rows.shape[1]} columns but names {self.columns}")
        if not np.all(np.isfinite(self.rows)):
            raise ValueError("feature matrix has non-finite entries")

    @classmethod
    def from_features(
        cls,
        features: Sequence[FeatureVector],
        labels: Sequence[int],
        feature_set: str = "mean_variance",
    ) -> "FeatureMatrix":
        """Stack FeatureVectors into the chosen columns."""
        if feature_set not in FEATURE_SETS:
            raise ValueError(f"feature set must be one of {FEATURE_SETS}, got {feature_set!r}")
        columns = FEATURE_COLUMNS[feature_set]
        rows = np.array([[getattr(fv, c) for c in columns] for fv in features], dtype=float)
        return cls(
            rows=rows.reshape(len(features), len(columns)),
            ids=[fv.function_id for fv in features],
            labels=np.asarray(labels),
            columns=columns,
        )

    def __len__(self) -> int:
        return self.rows.shape[0]

    def take(self, index: Sequence[int] | np.ndarray) -> "FeatureMatrix":
        """Row subset (positional indices or boolean mask)."""
        index = np.asarray(index)
        if index.dtype == bool:
            index = np.flatnonzero(index)
        return replace(
            self,
            rows=self.rows[index],
            ids=[self.ids[i] for i in index],
            labels=self.labels[index],
        )


def standardize(train: FeatureMatrix, apply_to: FeatureMatrix) -> FeatureMatrix:
    """
    Standardize `apply_to` with statistics fitted on `train`.

    Args:
        train: Matrix the statistics come from
        apply_to: Matrix to transform

    Returns:
        Transformed copy of apply_to carrying the fitted statistics
    """
    if len(train) == 0:
        raise ValueError("cannot standardize on an empty training matrix")
    stats = Standardization.fit(train.rows)
    dead = [c for c, s in zip(train.columns, stats.std) if s == 0]
    if dead:
        logger.debug(f"zero-variance columns mapped to zeros: {dead}")
    return replace(apply_to, rows=stats.transform(apply_to.rows), stats=stats)
