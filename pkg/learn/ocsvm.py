"""One-class nu-SVM trained by SMO pairwise updates.

Dual: minimise 1/2 a^T K a subject to 0 <= a_i <= C = 1/(nu m) and sum a = 1. At the
optimum the free support vectors share one kernel-expansion value, the support level.
The decision value of x is sum_i a_i k(x_i, x) - rho with rho = level / 2, so the
boundary is the maximum-margin bisector between the training inliers and the origin of
feature space. Non-negative means inlier.

When |w|^2 = a^T K a vanishes against the kernel scale, the origin lies in the hull of
the training inliers and no half-space separates them from it; such a model is flagged
degenerate and scores every point 0 (inlier).
"""

import logging
from dataclasses import dataclass

import numpy as np

from core.errors import ConvergenceError
from learn.kpca import KernelSpec, cross_kernel, kernel_matrix
from learn.preprocessing import Standardization

logger = logging.getLogger(__name__)

INLIER = 1
OUTLIER = -1

# relative slack deciding whether alpha sits on a bound
_BOUND_EPS = 1e-12
# |w|^2 at or below this fraction of the kernel scale means no separating half-space
NULL_WEIGHT_TOL = 1e-3


@dataclass
class OcsvmModel:
    """Trained one-class SVM."""

    alpha: np.ndarray
    rho: float
    nu: float
    spec: KernelSpec
    support: np.ndarray
    stats: Standardization | None = None
    level: float = 0.0
    degenerate: bool = False
    iterations: int = 0
    kkt_gap: float = 0.0

    @property
    def upper_bound(self) -> float:
        return 1.0 / (self.nu * len(self.alpha))

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if self.degenerate:
            return np.zeros(X.shape[0])
        return self.alpha @ cross_kernel(self.support, X, self.spec) - self.rho


def _initial_alpha(m: int, C: float) -> np.ndarray:
    """Fill the first floor(1/C) coordinates to C and put the remainder on the next."""
    alpha = np.zeros(m)
    full = min(int(np.floor(1.0 / C + 1e-12)), m)
    alpha[:full] = C
    if full < m:
        alpha[full] = 1.0 - full * C
    return alpha


def _support_level(alpha: np.ndarray, grad: np.ndarray, lo: float, hi: float) -> float:
    free = (alpha > lo) & (alpha < hi)
    if free.any():
        return float(grad[free].mean())
    at_upper = grad[alpha >= hi]
    at_lower = grad[alpha <= lo]
    if at_upper.size and at_lower.size:
        return float((at_upper.max() + at_lower.min()) / 2)
    return float(at_upper.max() if at_upper.size else at_lower.min())


def ocsvm_train(
    X: np.ndarray,
    nu: float = 0.1,
    spec: KernelSpec = KernelSpec("linear"),
    tol: float = 1e-6,
    max_iter: int = 100_000,
    stats: Standardization | None = None,
) -> OcsvmModel:
    """
    Fit a one-class SVM on inlier rows.

    The KKT gap of the maximal violating pair is compared with tol * max(1, max_i K_ii),
    so the stopping rule does not depend on the feature scale. Training also stops as
    soon as a^T K a drops to NULL_WEIGHT_TOL of that scale: the optimum can only be
    smaller, so the model is degenerate whatever the remaining steps would do.

    Args:
        X: m x d training inliers (already standardized)
        nu: Upper bound on the training outlier fraction, in (0, 1]
        spec: Kernel
        tol: Relative KKT tolerance on the maximal violating pair
        max_iter: SMO step cap
        stats: Standardization to keep with the model

    Returns:
        OcsvmModel

    Raises:
        ConvergenceError: If the KKT gap is still above tolerance after max_iter steps
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    m = X.shape[0]
    if m < 2:
        raise ValueError(f"one-class SVM needs at least 2 training points, got {m}")
    if not 0 < nu <= 1:
        raise ValueError(f"nu must be in (0, 1], got {nu}")

    spec = spec.resolve(X)
    K = kernel_matrix(X, spec)
    scale = max(1.0, float(np.diag(K).max()))
    kkt_tol = tol * scale
    null_level = NULL_WEIGHT_TOL * scale

    C = 1.0 / (nu * m)
    alpha = _initial_alpha(m, C)
    grad = K @ alpha
    lo, hi = C * _BOUND_EPS, C * (1 - _BOUND_EPS)

    gap = 0.0
    n_iter = 0
    while True:
        up = np.flatnonzero(alpha < hi)
        low = np.flatnonzero(alpha > lo)
        if up.size == 0 or low.size == 0:
            gap = 0.0
            break
        # move mass from j (largest gradient) to i (smallest gradient)
        i = up[np.argmin(grad[up])]
        j = low[np.argmax(grad[low])]
        gap = float(grad[j] - grad[i])
        if gap < kkt_tol or float(alpha @ grad) <= null_level:
            break
        if n_iter == max_iter:
            raise ConvergenceError(
                f"one-class SVM did not converge in {max_iter} SMO steps (gap {gap:.3e})",
                iterations=n_iter,
                residual=gap,
            )
        quad = K[i, i] + K[j, j] - 2 * K[i, j]
        step = gap / max(quad, 1e-12)
        step = min(step, C - alpha[i], alpha[j])
        alpha[i] += step
        alpha[j] -= step
        if C - alpha[i] <= lo:
            alpha[i] = C
        if alpha[j] <= lo:
            alpha[j] = 0.0
        grad += step * (K[:, i] - K[:, j])
        n_iter += 1

    weight2 = float(alpha @ grad)
    degenerate = weight2 <= null_level
    level = _support_level(alpha, grad, lo, hi)
    rho = 0.0 if degenerate else level / 2
    if degenerate:
        logger.debug(f"OCSVM: |w|^2 = {weight2:.3e} within {null_level:.3e} of zero; accepting every point")

    n_free = int(((alpha > lo) & (alpha < hi)).sum())
    logger.debug(f"OCSVM: m={m}, nu={nu}, {n_iter} SMO steps, {n_free} free SVs, level={level:.6g}")
    return OcsvmModel(
        alpha=alpha,
        rho=rho,
        nu=nu,
        spec=spec,
        support=X,
        stats=stats,
        level=level,
        degenerate=degenerate,
        iterations=n_iter,
        kkt_gap=gap,
    )


def ocsvm_score(model: OcsvmModel, x: np.ndarray) -> np.ndarray | float:
    """Decision value(s); a single point gives a float."""
    x = np.asarray(x, dtype=float)
    scores = model.decision_function(x)
    return float(scores[0]) if x.ndim == 1 else scores


def ocsvm_predict(model: OcsvmModel, X: np.ndarray) -> np.ndarray:
    """+1 for inliers (score >= 0), -1 for outliers."""
    return np.where(model.decision_function(X) >= 0, INLIER, OUTLIER)
