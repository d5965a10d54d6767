"""Equivariant embedding of Boolean functions and its output symmetries.

The twirled state preparation averages |f(x)><f(x)| over all inputs x, which is diagonal
in the computational basis: rho(f)[y] = |f^-1(y)| / 2^n. The same diagonal is the reduced
state of the output register of 2^{-n/2} sum_x |x>|f(x)>, which is how the circuit path
realises the linear combination of oracle calls.

The output symmetry group is generated by single-qubit bitflips X_i and qubit swaps
SWAP_ij, i.e. the hyperoctahedral group S_n x| Z_2^n with n! * 2^n elements.
"""

import itertools
import logging
from dataclasses import dataclass
from enum import Enum as PyEnum

import numpy as np
import pandas as pd

from config import EXACT_TOL, MAX_STATE_QUBITS, MAX_TWIRL_WIDTH, OPERATOR_TOL, SUM_TOL
from core.models import BooleanFunction
from quantum.qsim import PAULIS, pauli_operator, permutation_operator, query_state, reduced_diagonal

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class DiagonalDensity:
    """Diagonal of the embedded density operator: 2^n non-negative reals summing to 1."""

    n: int
    probs: np.ndarray

    def __post_init__(self) -> None:
        probs = np.array(self.probs, dtype=float)
        if probs.shape != (1 << self.n,):
            raise ValueError(f"density of width {self.n} needs {1 << self.n} entries, got {probs.shape}")
        if np.any(probs < -EXACT_TOL):
            raise ValueError(f"negative density entry {probs.min()!r}")
        if abs(probs.sum() - 1.0) > SUM_TOL:
            raise ValueError(f"density sums to {probs.sum()!r}")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    def trace_distance(self, other: "DiagonalDensity") -> float:
        """Trace distance (total variation for diagonals)."""
        if other.n != self.n:
            raise ValueError(f"width mismatch: {self.n} vs {other.n}")
        return float(0.5 * np.abs(self.probs - other.probs).sum())

    def to_operator(self) -> np.ndarray:
        """Dense diagonal matrix (small n only)."""
        return np.diag(self.probs).astype(complex)


class SymmetryKind(str, PyEnum):
    BITFLIP = "bitflip"
    SWAP = "swap"


@dataclass(frozen=True)
class SymmetryOp:
    """A generator of the output symmetry group: Bitflip(i) or Swap(i, j)."""

    kind: SymmetryKind
    qubits: tuple[int, ...]

    def __post_init__(self) -> None:
        expected = 1 if self.kind is SymmetryKind.BITFLIP else 2
        if len(self.qubits) != expected:
            raise ValueError(f"{self.kind.value} takes {expected} qubit index(es), got {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise ValueError(f"negative qubit index in {self.qubits}")
        if self.kind is SymmetryKind.SWAP and self.qubits[0] == self.qubits[1]:
            raise ValueError("swap needs two distinct qubits")

    @classmethod
    def bitflip(cls, i: int) -> "SymmetryOp":
        return cls(SymmetryKind.BITFLIP, (i,))

    @classmethod
    def swap(cls, i: int, j: int) -> "SymmetryOp":
        return cls(SymmetryKind.SWAP, (i, j))

    def check(self, n: int) -> None:
        if any(q >= n for q in self.qubits):
            raise ValueError(f"{self} has a qubit index >= n={n}")

    def permutation(self, n: int) -> np.ndarray:
        """Index map y -> sigma(y) on 0..2^n-1."""
        self.check(n)
        y = np.arange(1 << n, dtype=np.int64)
        if self.kind is SymmetryKind.BITFLIP:
            return y ^ (1 << self.qubits[0])
        i, j = self.qubits
        differ = ((y >> i) ^ (y >> j)) & 1
        return y ^ (differ * ((1 << i) | (1 << j)))

    def unitary(self, n: int) -> np.ndarray:
        return permutation_operator(self.permutation(n))

    def __str__(self) -> str:
        return f"{self.kind.value}({','.join(map(str, self.qubits))})"


def all_symmetry_ops(n: int) -> list[SymmetryOp]:
    """Every single bitflip and every swap at width n."""
    ops = [SymmetryOp.bitflip(i) for i in range(n)]
    ops += [SymmetryOp.swap(i, j) for i, j in itertools.combinations(range(n), 2)]
    return ops


def embed_diagonal(f: BooleanFunction) -> DiagonalDensity:
    """rho(f)[y] = |f^-1(y)| / 2^n, computed from preimage counts."""
    counts = np.bincount(f.truth_table, minlength=1 << f.n)
    return DiagonalDensity(f.n, counts / float(1 << f.n))


def embed_via_circuit(f: BooleanFunction) -> DiagonalDensity:
    """
    rho(f) from statevector simulation.

    Prepares the control register in uniform superposition, applies the oracle (one
    controlled bitflip product per x), and traces out the control register.

    Raises:
        ValueError: If 2n exceeds the statevector qubit cap
    """
    if 2 * f.n > MAX_STATE_QUBITS:
        raise ValueError(f"circuit embedding needs {2 * f.n} qubits, cap is {MAX_STATE_QUBITS}")
    diag = reduced_diagonal(query_state(f), "bottom")
    return DiagonalDensity(f.n, diag)


def apply_symmetry(rho: DiagonalDensity, op: SymmetryOp) -> DiagonalDensity:
    """Conjugate rho by the op's unitary (a permutation of diagonal entries)."""
    perm = op.permutation(rho.n)
    out = np.empty_like(rho.probs)
    out[perm] = rho.probs
    return DiagonalDensity(rho.n, out)


def relabel_outputs(f: BooleanFunction, op: SymmetryOp) -> BooleanFunction:
    """sigma o f as a table function."""
    perm = op.permutation(f.n)
    return BooleanFunction.from_table(f.n, perm[f.truth_table])


def group_permutations(n: int) -> list[np.ndarray]:
    """
    Index maps of every element of S_n x| Z_2^n.

    Element (pi, m) moves bit q of y to position pi[q] and then XORs the mask m.
    """
    if not 1 <= n <= MAX_TWIRL_WIDTH:
        raise ValueError(f"group enumeration supports 1 <= n <= {MAX_TWIRL_WIDTH}, got {n}")
    y = np.arange(1 << n, dtype=np.int64)
    bits = [(y >> q) & 1 for q in range(n)]
    maps = []
    for pi in itertools.permutations(range(n)):
        moved = np.zeros_like(y)
        for q in range(n):
            moved |= bits[q] << pi[q]
        for mask in range(1 << n):
            maps.append(moved ^ mask)
    return maps


def symmetry_group(n: int) -> list[np.ndarray]:
    """Dense unitaries of the bitflip-and-permutation group (n <= 4)."""
    return [permutation_operator(p) for p in group_permutations(n)]


def twirl_generator(generator: np.ndarray, n: int) -> np.ndarray:
    """
    Group average (1/|S|) sum U G U^dagger over S_n x| Z_2^n.

    Args:
        generator: 2^n x 2^n operator
        n: Width (at most 4)

    Returns:
        Twirled operator, commuting with every group element
    """
    dim = 1 << n
    if generator.shape != (dim, dim):
        raise ValueError(f"generator shape {generator.shape} does not match n={n}")
    total = np.zeros((dim, dim), dtype=complex)
    maps = group_permutations(n)
    for perm in maps:
        # U G U^dagger for a permutation unitary is a simultaneous row/column relabel
        conj = np.empty_like(total)
        conj[np.ix_(perm, perm)] = generator
        total += conj
    return total / len(maps)


def commutes_with_group(operator: np.ndarray, n: int, tol: float = OPERATOR_TOL) -> bool:
    """True if the operator commutes with every group element within tol."""
    for u in symmetry_group(n):
        if np.abs(u @ operator - operator @ u).max() > tol:
            return False
    return True


def x_sum(n: int) -> np.ndarray:
    """sum_i X_i on n qubits."""
    return sum(pauli_operator("X", q, n) for q in range(n))


def twirled_pauli_report(n: int) -> pd.DataFrame:
    """
    Twirl every single-qubit Pauli generator and measure what survives.

    Columns: pauli, qubit, twirled_norm (spectral), x_sum_coefficient, x_sum_residual
    (spectral norm of the part outside span{sum_i X_i}), commutes.
    """
    s = x_sum(n)
    s_norm2 = float(np.real(np.vdot(s, s)))
    rows = []
    for kind in PAULIS:
        for qubit in range(n):
            twirled = twirl_generator(pauli_operator(kind, qubit, n), n)
            coef = np.vdot(s, twirled) / s_norm2
            residual = twirled - coef * s
            rows.append(
                {
                    "pauli": kind,
                    "qubit": qubit,
                    "twirled_norm": float(np.linalg.norm(twirled, 2)),
                    "x_sum_coefficient": float(np.real(coef)),
                    "x_sum_residual": float(np.linalg.norm(residual, 2)),
                    "commutes": commutes_with_group(twirled, n),
                }
            )
    return pd.DataFrame(rows)


def densities_table(ids: list[int], densities: list[DiagonalDensity]) -> pd.DataFrame:
    """One row per function: function_id, p_0 .. p_{2^n - 1}."""
    if not densities:
        return pd.DataFrame(columns=["function_id"])
    n = densities[0].n
    frame = pd.DataFrame(
        np.vstack([d.probs for d in densities]),
        columns=[f"p_{y}" for y in range(1 << n)],
    )
    frame.insert(0, "function_id", ids)
    return frame
