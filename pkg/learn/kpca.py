"""Kernels, a cyclic Jacobi eigensolver, and kernel PCA."""

import logging
from dataclasses import dataclass

import numpy as np

from config import KERNELS, OPERATOR_TOL
from core.errors import ConvergenceError, DegenerateKernel

logger = logging.getLogger(__name__)

JACOBI_TOL = 1e-10
JACOBI_MAX_SWEEPS = 100


@dataclass(frozen=True)
class KernelSpec:
    """Kernel choice: "linear" or "rbf" with a bandwidth gamma (None = median heuristic)."""

    kind: str = "linear"
    gamma: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in KERNELS:
            raise ValueError(f"kernel must be one of {KERNELS}, got {self.kind!r}")
        if self.gamma is not None and self.gamma <= 0:
            raise ValueError(f"rbf gamma must be positive, got {self.gamma}")

    def resolve(self, X: np.ndarray) -> "KernelSpec":
        """Fix gamma from the data when it was left to the heuristic."""
        if self.kind == "rbf" and self.gamma is None:
            return KernelSpec("rbf", median_gamma(X))
        return self


def _squared_distances(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    d = (A * A).sum(axis=1)[:, None] + (B * B).sum(axis=1)[None, :] - 2 * A @ B.T
    return np.maximum(d, 0.0)


def median_gamma(X: np.ndarray) -> float:
    """gamma = 1 / (2 * median pairwise squared distance) over distinct pairs."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    d = _squared_distances(X, X)
    pairs = d[np.triu_indices(X.shape[0], k=1)]
    med = float(np.median(pairs)) if pairs.size else 0.0
    if med <= 0:
        logger.warning("median pairwise distance is zero; falling back to gamma = 1")
        return 1.0
    return 1.0 / (2.0 * med)


def cross_kernel(A: np.ndarray, B: np.ndarray, spec: KernelSpec) -> np.ndarray:
    """k(a_i, b_j) for every pair; spec must be resolved for rbf."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    if spec.kind == "linear":
        return A @ B.T
    if spec.gamma is None:
        raise ValueError("rbf kernel needs a resolved gamma")
    return np.exp(-spec.gamma * _squared_distances(A, B))


def kernel_matrix(X: np.ndarray, spec: KernelSpec) -> np.ndarray:
    """
    Symmetric Gram matrix of X.

    Args:
        X: m x d features
        spec: Kernel; an unresolved rbf gamma is set by the median heuristic

    Returns:
        m x m matrix
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if not np.all(np.isfinite(X)):
        raise ValueError("kernel input has non-finite entries")
    K = cross_kernel(X, X, spec.resolve(X))
    return (K + K.T) / 2


def center_kernel(K: np.ndarray) -> np.ndarray:
    """Double-centre a Gram matrix: (I - 1/m) K (I - 1/m)."""
    row = K.mean(axis=1, keepdims=True)
    col = K.mean(axis=0, keepdims=True)
    return K - row - col + K.mean()


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip each column so its largest-magnitude entry is positive."""
    idx = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[idx, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def jacobi_eigh(
    A: np.ndarray,
    tol: float = JACOBI_TOL,
    max_sweeps: int = JACOBI_MAX_SWEEPS,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Sweeps over all (p, q) pairs until the off-diagonal Frobenius norm falls below
    tol * max(1, ||A||_F).

    Args:
        A: Symmetric matrix
        tol: Relative off-diagonal tolerance
        max_sweeps: Sweep cap

    Returns:
        Tuple of (eigenvalues descending, eigenvectors as columns, signs fixed)

    Raises:
        ConvergenceError: If the sweep cap is reached
    """
    A = np.array(A, dtype=float)
    m = A.shape[0]
    if A.shape != (m, m):
        raise ValueError(f"matrix must be square, got {A.shape}")
    if np.abs(A - A.T).max(initial=0.0) > OPERATOR_TOL * max(1.0, np.abs(A).max(initial=0.0)):
        raise ValueError("matrix is not symmetric")
    A = (A + A.T) / 2
    V = np.eye(m)
    scale = max(1.0, float(np.linalg.norm(A)))

    def off_norm() -> float:
        return float(np.linalg.norm(A - np.diag(np.diag(A))))

    sweeps = 0
    while off_norm() > tol * scale:
        if sweeps == max_sweeps:
            raise ConvergenceError(
                f"Jacobi eigensolver did not converge in {max_sweeps} sweeps",
                iterations=sweeps,
                residual=off_norm(),
            )
        sweeps += 1
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = A[p, q]
                if abs(apq) < 1e-300:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 1.0 / (2.0 * theta)
                else:
                    t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                    if theta == 0:
                        t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                ap, aq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * ap - s * aq
                A[:, q] = s * ap + c * aq
                ap, aq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * ap - s * aq
                A[q, :] = s * ap + c * aq
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq

    logger.debug(f"Jacobi converged after {sweeps} sweeps (m={m})")
    values = np.diag(A).copy()
    order = np.argsort(-values, kind="stable")
    return values[order], _fix_signs(V[:, order])


@dataclass
class KpcaResult:
    """Projected coordinates plus the decomposition they came from."""

    coords: np.ndarray
    eigenvalues: np.ndarray
    alphas: np.ndarray
    spec: KernelSpec


def kpca_project(X: np.ndarray, spec: KernelSpec = KernelSpec("rbf"), dims: int = 2) -> KpcaResult:
    """
    Kernel PCA of X onto its top `dims` components.

    Expansion coefficients are the centred-Gram eigenvectors scaled by 1/sqrt(lambda);
    the returned coordinates are the projections K_c . alpha (= sqrt(lambda) v).

    Raises:
        DegenerateKernel: If the leading eigenvalue is not positive
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    m = X.shape[0]
    if m < dims + 1:
        raise ValueError(f"kernel PCA with {dims} dims needs at least {dims + 1} samples, got {m}")
    spec = spec.resolve(X)
    Kc = center_kernel(kernel_matrix(X, spec))
    values, vectors = jacobi_eigh(Kc)
    top = values[:dims]
    if top[0] <= OPERATOR_TOL * max(1.0, abs(values).max()):
        raise DegenerateKernel(f"centred kernel has no positive eigenvalue (leading {top[0]:.3e})")

    alphas = np.zeros((m, dims))
    for d in range(dims):
        if top[d] > OPERATOR_TOL * top[0]:
            alphas[:, d] = vectors[:, d] / np.sqrt(top[d])
        else:
            logger.warning(f"kPCA component {d + 1} has eigenvalue {top[d]:.3e}; coordinates set to 0")
    return KpcaResult(coords=Kc @ alphas, eigenvalues=top, alphas=alphas, spec=spec)
