"""Invariant observable, exact moments, and shot-based features.

The observable is the sum of every non-empty product of Z operators,
sum_i Z_i + sum_{i<j} Z_i Z_j + ... + Z_1...Z_n = prod_i (1 + Z_i) - 1 = 2^n |0><0| - 1,
so its eigenvalue on |y> is 2^n - 1 for y = 0 and -1 otherwise.
"""

import logging
from dataclasses import dataclass

import numpy as np

from config import MAX_TWIRL_WIDTH
from core.models import BitString, BooleanFunction
from quantum.embed import DiagonalDensity, embed_diagonal
from quantum.qsim import sample_bitstrings, z_product

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FeatureVector:
    """Sample mean and variance of the observable for one function."""

    mean: float
    variance: float
    shots: int
    function_id: int
    seed: int

    def as_row(self, label: int | None = None) -> dict:
        row = {"function_id": self.function_id}
        if label is not None:
            row["label"] = label
        row.update({"shots": self.shots, "seed": self.seed, "mean": self.mean, "variance": self.variance})
        return row


def observable_value(y: BitString | int, n: int) -> float:
    """Eigenvalue of the observable on basis state |y>."""
    if isinstance(y, BitString):
        if y.width != n:
            raise ValueError(f"width mismatch: n={n}, y has {y.width} bits")
        y = y.value
    return float((1 << n) - 1) if y == 0 else -1.0


def observable_spectrum(n: int) -> np.ndarray:
    """Eigenvalues for every basis state 0..2^n-1."""
    v = np.full(1 << n, -1.0)
    v[0] = (1 << n) - 1
    return v


def dense_observable(n: int) -> np.ndarray:
    """The explicit sum of all 2^n - 1 non-empty Z products (n <= 4)."""
    if not 1 <= n <= MAX_TWIRL_WIDTH:
        raise ValueError(f"dense observable supports 1 <= n <= {MAX_TWIRL_WIDTH}, got {n}")
    return sum(z_product(mask, n) for mask in range(1, 1 << n))


def exact_moments(rho: DiagonalDensity) -> tuple[float, float]:
    """(tr(rho O), tr(rho O^2) - tr(rho O)^2)."""
    v = observable_spectrum(rho.n)
    expectation = float(rho.probs @ v)
    variance = float(rho.probs @ (v * v) - expectation**2)
    return expectation, max(variance, 0.0)


def sample_features(
    rho: DiagonalDensity,
    shots: int,
    rng: np.random.Generator,
    function_id: int = 0,
    seed: int = 0,
) -> FeatureVector:
    """
    Simulate `shots` measurements of the observable on rho.

    Args:
        rho: Embedded density
        shots: Number of shots, at least 2
        rng: Random generator
        function_id: Recorded in the result
        seed: Seed rng was built from, recorded in the result

    Returns:
        FeatureVector with the sample mean and unbiased sample variance
    """
    if shots < 2:
        raise ValueError(f"shots must be >= 2 for a sample variance, got {shots}")
    bits = sample_bitstrings(rho.probs, shots, rng)
    outcomes = observable_spectrum(rho.n)[[b.value for b in bits]]
    return FeatureVector(
        mean=float(outcomes.mean()),
        variance=float(outcomes.var(ddof=1)),
        shots=shots,
        function_id=function_id,
        seed=seed,
    )


def model_evaluate(f: BooleanFunction) -> float:
    """h(f) with the identity ansatz: the exact expectation of the observable on rho(f)."""
    return exact_moments(embed_diagonal(f))[0]
