"""k-means++ seeding and Lloyd iterations with restarts."""

import logging
from dataclasses import dataclass, field

import numpy as np

from core.errors import ConvergenceError

logger = logging.getLogger(__name__)


@dataclass
class KMeansResult:
    assignments: np.ndarray
    inertia: float
    centroids: np.ndarray
    iterations: int
    history: list[float] = field(default_factory=list)


def _sq_dist(X: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    return ((X[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)


def kmeans_plus_plus(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """D^2-weighted seeding; falls back to uniform picks when every point is covered."""
    m = X.shape[0]
    centroids = [X[rng.integers(m)]]
    for _ in range(k - 1):
        d2 = _sq_dist(X, np.array(centroids)).min(axis=1)
        total = d2.sum()
        idx = rng.choice(m, p=d2 / total) if total > 0 else rng.integers(m)
        centroids.append(X[idx])
    return np.array(centroids, dtype=float)


def lloyd(X: np.ndarray, centroids: np.ndarray, max_iter: int = 300) -> KMeansResult:
    """
    Lloyd iterations until the assignment is a fixpoint or max_iter is reached.

    Inertia is recorded after every assignment step and must never increase. An empty
    cluster keeps its previous centroid.
    """
    centroids = centroids.copy()
    k = centroids.shape[0]
    assignments = None
    history: list[float] = []
    it = 0
    for it in range(1, max_iter + 1):
        d2 = _sq_dist(X, centroids)
        new = np.argmin(d2, axis=1)
        inertia = float(d2[np.arange(len(X)), new].sum())
        if history and inertia > history[-1] + 1e-9 * max(1.0, history[-1]):
            raise ConvergenceError(
                f"k-means inertia increased from {history[-1]} to {inertia}",
                iterations=it,
                residual=inertia - history[-1],
            )
        history.append(inertia)
        if assignments is not None and np.array_equal(new, assignments):
            break
        assignments = new
        for c in range(k):
            members = X[assignments == c]
            if len(members):
                centroids[c] = members.mean(axis=0)
            else:
                logger.warning(f"k-means cluster {c} is empty; keeping its centroid")
    else:
        logger.warning(f"k-means stopped at the {max_iter}-iteration cap")

    return KMeansResult(
        assignments=assignments,
        inertia=history[-1],
        centroids=centroids,
        iterations=it,
        history=history,
    )


def kmeans_cluster(
    X: np.ndarray,
    k: int = 2,
    restarts: int = 10,
    rng: np.random.Generator | None = None,
    max_iter: int = 300,
) -> KMeansResult:
    """
    Best-inertia k-means over several k-means++ restarts.

    Args:
        X: m x d points (m >= k)
        k: Number of clusters
        restarts: Independent seedings
        rng: Random generator
        max_iter: Lloyd iteration cap per restart

    Returns:
        KMeansResult of the lowest-inertia restart (earliest on ties)
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[0] < k:
        raise ValueError(f"k-means needs at least k={k} points, got {X.shape[0]}")
    rng = rng or np.random.default_rng()
    best: KMeansResult | None = None
    for r in range(restarts):
        result = lloyd(X, kmeans_plus_plus(X, k, rng), max_iter)
        logger.debug(f"k-means restart {r}: inertia={result.inertia:.6g} after {result.iterations} iterations")
        if best is None or result.inertia < best.inertia:
            best = result
    return best
