"""Exact statevector simulation of the Simon circuit.

Index convention: qubit q is bit q of the amplitude index (qubit 0 least significant). On
a 2n-qubit Simon register the top (input) register is qubits 0..n-1 and the bottom
(output) register is qubits n..2n-1, so basis state |x>|y> sits at index x | (y << n).
"""

import logging
from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

import numpy as np

from config import EXACT_TOL, MAX_DENSE_QUBITS, MAX_STATE_QUBITS, SUM_TOL
from core.models import BitString, BooleanFunction

logger = logging.getLogger(__name__)

_SQRT2_INV = 1 / np.sqrt(2)

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT2_INV
SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]],
    dtype=complex,
)
PAULIS = {"X": X, "Y": Y, "Z": Z}

CnotList = list[tuple[int, int]]


@dataclass
class StateVector:
    """2^q complex amplitudes of a q-qubit pure state."""

    qubits: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        if not 1 <= self.qubits <= MAX_STATE_QUBITS:
            raise ValueError(f"qubit count must be in [1, {MAX_STATE_QUBITS}], got {self.qubits}")
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (1 << self.qubits,):
            raise ValueError(f"{self.qubits} qubits need {1 << self.qubits} amplitudes")

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm(self) -> float:
        return float(np.sqrt(self.probabilities.sum()))

    def copy(self) -> "StateVector":
        return StateVector(self.qubits, self.amplitudes.copy())


def zero_state(qubits: int) -> StateVector:
    """|0...0> on the given number of qubits."""
    return basis_state(qubits, 0)


def basis_state(qubits: int, index: int) -> StateVector:
    """Computational basis state |index>."""
    amps = np.zeros(1 << qubits, dtype=complex)
    amps[index] = 1.0
    return StateVector(qubits, amps)


def _check_qubit(state: StateVector, qubit: int) -> None:
    if not 0 <= qubit < state.qubits:
        raise ValueError(f"qubit index {qubit} out of range for a {state.qubits}-qubit state")


def apply_single_qubit(state: StateVector, matrix: np.ndarray, qubit: int) -> StateVector:
    """Apply a 2x2 gate to one qubit."""
    _check_qubit(state, qubit)
    q = state.qubits
    # reshape puts the most significant bit on axis 0
    axis = q - 1 - qubit
    tensor = state.amplitudes.reshape([2] * q)
    tensor = np.tensordot(matrix, tensor, axes=([1], [axis]))
    tensor = np.moveaxis(tensor, 0, axis)
    return StateVector(q, tensor.reshape(-1))


def hadamard_layer(state: StateVector, qubit_set: Iterable[int]) -> StateVector:
    """Hadamard on every listed qubit."""
    out = state
    for qubit in sorted(set(qubit_set)):
        out = apply_single_qubit(out, H, qubit)
    return out


def _register_width(state: StateVector) -> int:
    if state.qubits % 2:
        raise ValueError(f"Simon register needs an even qubit count, got {state.qubits}")
    return state.qubits // 2


def apply_oracle(state: StateVector, f: BooleanFunction) -> StateVector:
    """
    U_f |x>|y> = |x>|y XOR f(x)>, applied as an index permutation.

    Args:
        state: 2n-qubit state
        f: n-bit function

    Returns:
        New StateVector
    """
    if state.qubits != 2 * f.n:
        raise ValueError(f"oracle for n={f.n} needs {2 * f.n} qubits, state has {state.qubits}")
    n = f.n
    idx = np.arange(1 << state.qubits, dtype=np.int64)
    low = (1 << n) - 1
    x = idx & low
    y = idx >> n
    target = x | ((y ^ f.truth_table[x]) << n)
    out = np.empty_like(state.amplitudes)
    out[target] = state.amplitudes
    return StateVector(state.qubits, out)


def oracle_from_cnots(f: BooleanFunction) -> CnotList:
    """
    CNOT wiring of a linear oracle.

    One CNOT from top qubit j to bottom qubit n+i for every nonzero entry M[i][j], listed
    row by row.

    Raises:
        ValueError: If f is a table function (not CNOT-realizable)
    """
    if f.matrix is None:
        raise ValueError("table function is not CNOT-realizable; need a linear function")
    n = f.n
    return [(j, n + i) for i in range(n) for j in range(n) if f.matrix.entry(i, j)]


def apply_cnot(state: StateVector, control: int, target: int) -> StateVector:
    """Controlled-NOT as an index permutation."""
    _check_qubit(state, control)
    _check_qubit(state, target)
    if control == target:
        raise ValueError("CNOT control and target must differ")
    idx = np.arange(1 << state.qubits, dtype=np.int64)
    flipped = idx ^ (((idx >> control) & 1) << target)
    out = np.empty_like(state.amplitudes)
    out[flipped] = state.amplitudes
    return StateVector(state.qubits, out)


def apply_cnots(state: StateVector, cnots: CnotList) -> StateVector:
    """Apply a CNOT list gate by gate."""
    for control, target in cnots:
        state = apply_cnot(state, control, target)
    return state


def reduced_diagonal(state: StateVector, keep_register: Literal["top", "bottom"]) -> np.ndarray:
    """
    Marginal basis-state probabilities of one half of a 2n-qubit register.

    This is the diagonal of the reduced density operator after tracing out the other half.
    """
    n = _register_width(state)
    # row = bottom value y, column = top value x
    grid = state.probabilities.reshape(1 << n, 1 << n)
    if keep_register == "top":
        diag = grid.sum(axis=0)
    elif keep_register == "bottom":
        diag = grid.sum(axis=1)
    else:
        raise ValueError(f"keep_register must be 'top' or 'bottom', got {keep_register!r}")
    if abs(diag.sum() - 1.0) > EXACT_TOL * (1 << n):
        logger.warning(f"reduced diagonal sums to {diag.sum():.15f}")
    return diag


def validate_probabilities(probabilities: Sequence[float] | np.ndarray) -> np.ndarray:
    """
    Check and clean a probability vector.

    Entries down to -1e-12 are clipped to zero; anything more negative, or a sum off by
    more than 1e-9, is a contract violation.
    """
    p = np.asarray(probabilities, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise ValueError("probabilities must be a non-empty 1-D sequence")
    if np.any(p < -EXACT_TOL):
        raise ValueError(f"negative probability {p.min()!r}")
    p = np.clip(p, 0.0, None)
    total = p.sum()
    if abs(total - 1.0) > SUM_TOL:
        raise ValueError(f"probabilities sum to {total!r}, not 1")
    return p / total


def sample_indices(probabilities: Sequence[float] | np.ndarray, shots: int, rng: np.random.Generator) -> np.ndarray:
    """Draw `shots` i.i.d. basis indices from a probability vector."""
    if shots < 0:
        raise ValueError(f"shots must be non-negative, got {shots}")
    p = validate_probabilities(probabilities)
    return rng.choice(p.size, size=shots, p=p)


def sample_bitstrings(
    probabilities: Sequence[float] | np.ndarray,
    shots: int,
    rng: np.random.Generator,
) -> list[BitString]:
    """
    Measurement samples X ~ p(x) as bit strings.

    Args:
        probabilities: Distribution over 2^w basis states
        shots: Number of samples
        rng: Random generator

    Returns:
        List of BitString of width w
    """
    p = validate_probabilities(probabilities)
    width = max(1, int(p.size).bit_length() - 1)
    if 1 << width != p.size:
        raise ValueError(f"distribution size {p.size} is not a power of two")
    return [BitString(width, int(i)) for i in sample_indices(p, shots, rng)]


def dense_kron(factors: Sequence[np.ndarray]) -> np.ndarray:
    """
    Kronecker product of per-qubit factors in qubit-index order.

    ``factors[0]`` acts on qubit 0 (least significant). A 4x4 factor acts on two
    consecutive qubits, its own low bit being the lower qubit.

    Raises:
        ValueError: If a factor is not 2x2/4x4 or the result exceeds 2^8 dimensions
    """
    dim = 1
    for factor in factors:
        if factor.shape not in ((2, 2), (4, 4)):
            raise ValueError(f"factor must be 2x2 or 4x4, got {factor.shape}")
        dim *= factor.shape[0]
    if dim > 1 << MAX_DENSE_QUBITS:
        raise ValueError(f"dense operator dimension {dim} exceeds {1 << MAX_DENSE_QUBITS}")
    out = np.eye(1, dtype=complex)
    for factor in reversed(factors):
        out = np.kron(out, factor)
    return out


def pauli_operator(kind: str, qubit: int, n: int) -> np.ndarray:
    """Single-qubit Pauli ('X', 'Y' or 'Z') on `qubit` of an n-qubit register."""
    if not 0 <= qubit < n:
        raise ValueError(f"qubit index {qubit} out of range for n={n}")
    factors = [I2] * n
    factors[qubit] = PAULIS[kind]
    return dense_kron(factors)


def z_product(mask: int, n: int) -> np.ndarray:
    """Product of Z over the qubits set in `mask`."""
    return dense_kron([Z if (mask >> q) & 1 else I2 for q in range(n)])


def permutation_operator(perm: np.ndarray) -> np.ndarray:
    """Dense unitary sending |i> to |perm[i]>."""
    perm = np.asarray(perm, dtype=np.int64)
    dim = perm.size
    if dim > 1 << MAX_DENSE_QUBITS:
        raise ValueError(f"dense operator dimension {dim} exceeds {1 << MAX_DENSE_QUBITS}")
    out = np.zeros((dim, dim), dtype=complex)
    out[perm, np.arange(dim)] = 1.0
    return out


def swap_operator(i: int, j: int, n: int) -> np.ndarray:
    """SWAP of qubits i and j on an n-qubit register."""
    if not (0 <= i < n and 0 <= j < n) or i == j:
        raise ValueError(f"invalid swap ({i}, {j}) for n={n}")
    idx = np.arange(1 << n, dtype=np.int64)
    differ = ((idx >> i) ^ (idx >> j)) & 1
    return permutation_operator(idx ^ (differ * ((1 << i) | (1 << j))))


def simon_circuit_state(f: BooleanFunction, via_cnots: bool = False) -> StateVector:
    """
    Final state of H(top) -> U_f -> H(top) on |0>|0>.

    Args:
        f: Function to query
        via_cnots: Apply the oracle gate by gate (linear functions only)

    Returns:
        2n-qubit StateVector
    """
    n = f.n
    top = range(n)
    state = hadamard_layer(zero_state(2 * n), top)
    state = apply_cnots(state, oracle_from_cnots(f)) if via_cnots else apply_oracle(state, f)
    return hadamard_layer(state, top)


def query_state(f: BooleanFunction) -> StateVector:
    """2^{-n/2} sum_x |x>|f(x)>: the state after the oracle, before the final Hadamards."""
    n = f.n
    return apply_oracle(hadamard_layer(zero_state(2 * n), range(n)), f)
