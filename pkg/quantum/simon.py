"""Simon's algorithm: sampling, GF(2) post-processing, and the classical baseline."""

import logging
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
import pandas as pd

from core.boolfn import classify_exact, gen_one_to_one, gen_two_to_one
from core.gf2 import gf2_nullspace, parity
from core.models import BitString, BooleanFunction, FunctionClass, FunctionKind
from quantum.qsim import reduced_diagonal, sample_indices, simon_circuit_state
from utils.query_tracker import QueryBudgetExhausted, QueryMethod, QueryTracker

logger = logging.getLogger(__name__)


def simon_distribution(f: BooleanFunction) -> np.ndarray:
    """
    Exact top-register distribution after H -> U_f -> H.

    Computed by full statevector simulation of the 2n-qubit circuit.
    """
    classify_exact(f)
    return reduced_diagonal(simon_circuit_state(f), "top")


class SimonSampler:
    """
    Draws measurement outcomes of the Simon circuit for one function.

    The fast path samples the known law directly (uniform for bijections, uniform over
    {z : z.s = 0} for period s); the slow path samples the simulated distribution.
    """

    def __init__(self, f: BooleanFunction, fast: bool = True):
        self.n = f.n
        self.function_class = classify_exact(f)
        self.fast = fast
        self._probs = None if fast else simon_distribution(f)
        hidden = self.function_class.hidden.value
        # lowest set bit of s; flipping it toggles z.s
        self._flip = hidden & -hidden

    def sample_values(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if not self.fast:
            return sample_indices(self._probs, size, rng)
        z = rng.integers(0, 1 << self.n, size=size, dtype=np.int64)
        if self._flip:
            hidden = self.function_class.hidden.value
            odd = parity(z & hidden).astype(bool)
            z = np.where(odd, z ^ self._flip, z)
        return z

    def sample(self, rng: np.random.Generator) -> BitString:
        return BitString(self.n, int(self.sample_values(rng, 1)[0]))


def simon_sample(f: BooleanFunction, rng: np.random.Generator, fast: bool = True) -> BitString:
    """One draw from simon_distribution(f)."""
    return SimonSampler(f, fast=fast).sample(rng)


@dataclass
class Gf2Solver:
    """Incremental reduced row-echelon basis of collected measurement outcomes."""

    n: int
    # pivot (highest set bit) -> row; every row is reduced against every other pivot
    basis: dict[int, int] = field(default_factory=dict)

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def rows(self) -> list[int]:
        return [self.basis[p] for p in sorted(self.basis, reverse=True)]

    def add(self, z: BitString) -> int:
        """Insert z if independent; returns the new rank."""
        if z.width != self.n:
            raise ValueError(f"width mismatch: solver has {self.n} bits, vector has {z.width}")
        v = z.value
        for pivot, row in self.basis.items():
            if (v >> pivot) & 1:
                v ^= row
        if v:
            pivot = v.bit_length() - 1
            for p, row in list(self.basis.items()):
                if (row >> pivot) & 1:
                    self.basis[p] = row ^ v
            self.basis[pivot] = v
        return self.rank

    def solve_hidden(self) -> BitString | None:
        """
        Candidate hidden string.

        Returns:
            The unique nonzero vector orthogonal to the basis at rank n-1, the zero
            string at rank n, or None when the system is still undetermined
        """
        if self.rank == self.n:
            return BitString.zero(self.n)
        if self.rank == self.n - 1:
            (s,) = gf2_nullspace(self.rows, self.n)
            return BitString(self.n, s)
        return None


def solver_add(solver: Gf2Solver, z: BitString) -> int:
    return solver.add(z)


def solve_hidden(solver: Gf2Solver) -> BitString | None:
    return solver.solve_hidden()


@dataclass
class SimonRunReport:
    """Outcome of one run of Simon's algorithm."""

    decided_class: FunctionClass | None
    recovered_hidden: BitString | None
    quantum_queries: int
    classical_verification_queries: int
    rank: int

    @property
    def conclusive(self) -> bool:
        return self.decided_class is not None


def run_simon(
    f: BooleanFunction,
    rng: np.random.Generator,
    max_queries: int = 200,
    fast: bool = True,
) -> SimonRunReport:
    """
    Decide 1:1 versus 2:1 with Simon's algorithm.

    Samples until the collected outcomes reach rank n-1, takes the unique orthogonal
    candidate s and confirms it with two classical queries (f(0) == f(s) means 2:1).

    Args:
        f: Function to decide
        rng: Random generator
        max_queries: Quantum sample budget
        fast: Use the analytic sampler instead of statevector sampling

    Returns:
        SimonRunReport; decided_class is None when the budget ran out
    """
    n = f.n
    if max_queries < n:
        raise ValueError(f"max_queries must be >= n ({n}), got {max_queries}")

    tracker = QueryTracker(f, budgets={QueryMethod.QUANTUM: max_queries})
    sampler = SimonSampler(f, fast=fast)
    solver = Gf2Solver(n)

    while solver.rank < n - 1:
        try:
            tracker.log_query(QueryMethod.QUANTUM)
        except QueryBudgetExhausted as e:
            logger.warning(f"Simon run inconclusive at rank {solver.rank}/{n}: {e}")
            return SimonRunReport(None, None, tracker.quantum_queries, 0, solver.rank)
        solver.add(sampler.sample(rng))

    # rank n-1 leaves exactly one nonzero candidate
    candidate = solver.solve_hidden()
    if tracker.evaluate(0) == tracker.evaluate(candidate):
        decided = FunctionClass(FunctionKind.TWO_TO_ONE, candidate)
    else:
        decided = FunctionClass(FunctionKind.ONE_TO_ONE, BitString.zero(n))

    return SimonRunReport(
        decided_class=decided,
        recovered_hidden=decided.hidden,
        quantum_queries=tracker.quantum_queries,
        classical_verification_queries=tracker.classical_queries,
        rank=solver.rank,
    )


class ClassicalRunReport(NamedTuple):
    decided_class: FunctionClass
    queries: int


def classical_baseline(f: BooleanFunction, rng: np.random.Generator) -> ClassicalRunReport:
    """
    Collision search on distinct random inputs.

    Stops at the first output collision (2:1, hidden = XOR of the colliding inputs) or
    after 2^(n-1)+1 distinct collision-free queries (1:1 with certainty).
    """
    n = f.n
    tracker = QueryTracker(f)
    limit = (1 << (n - 1)) + 1
    seen: dict[int, int] = {}
    for x in rng.permutation(1 << n)[:limit]:
        x = int(x)
        y = tracker.evaluate(x)
        if y in seen:
            hidden = BitString(n, x ^ seen[y])
            return ClassicalRunReport(FunctionClass(FunctionKind.TWO_TO_ONE, hidden), tracker.classical_queries)
        seen[y] = x
    return ClassicalRunReport(FunctionClass(FunctionKind.ONE_TO_ONE, BitString.zero(n)), tracker.classical_queries)


@dataclass
class SeparationFit:
    """Growth fits of mean query counts across widths."""

    classical_log2_slope: float
    quantum_linear_slope: float
    quantum_intercept: float
    means: pd.DataFrame


def separation_rows(
    n: int,
    trial: int,
    true_class: FunctionClass,
    quantum: SimonRunReport,
    classical: ClassicalRunReport,
) -> list[dict]:
    """Tidy rows for one function: one per method."""
    truth = true_class.kind.value
    return [
        {
            "n": n,
            "trial": trial,
            "class": truth,
            "method": "quantum",
            "queries": quantum.quantum_queries,
            "verification_queries": quantum.classical_verification_queries,
            "decided": quantum.decided_class.kind.value if quantum.conclusive else "inconclusive",
            "correct": quantum.conclusive and quantum.decided_class == true_class,
        },
        {
            "n": n,
            "trial": trial,
            "class": truth,
            "method": "classical",
            "queries": classical.queries,
            "verification_queries": 0,
            "decided": classical.decided_class.kind.value,
            "correct": classical.decided_class == true_class,
        },
    ]


def separation_experiment(
    ns: Sequence[int],
    trials: int,
    seed: int,
    mode: str = "linear",
    max_queries: int = 200,
) -> tuple[pd.DataFrame, SeparationFit]:
    """
    Query counts of run_simon and classical_baseline across widths.

    Each (n, trial) draws a fresh 1:1 and a fresh 2:1 function from a generator seeded
    with (seed, n, trial); both methods see the same functions.

    Args:
        ns: Widths to sweep
        trials: Trials per width and class
        seed: Base seed
        mode: 2:1 generator mode
        max_queries: Quantum budget per run

    Returns:
        Tuple of (tidy table, growth fits)
    """
    rows: list[dict] = []
    for n in ns:
        for trial in range(trials):
            rng = np.random.default_rng([seed, n, trial])
            for f in (gen_one_to_one(n, rng), gen_two_to_one(n, rng, mode)):
                truth = classify_exact(f)
                quantum = run_simon(f, rng, max_queries=max(max_queries, n))
                classical = classical_baseline(f, rng)
                rows.extend(separation_rows(n, trial, truth, quantum, classical))
        logger.info(f"Separation experiment: n={n} done ({trials} trials)")

    table = pd.DataFrame(rows)
    return table, fit_separation(table)


def fit_separation(table: pd.DataFrame) -> SeparationFit:
    """
    Fit log2(classical 2:1 queries) and quantum queries linearly in n.

    Needs at least two widths; with one width the slopes are NaN.
    """
    means = (
        table.groupby(["n", "method", "class"], as_index=False)["queries"]
        .mean()
        .sort_values(["n", "method", "class"])
        .reset_index(drop=True)
    )
    classical = means[(means["method"] == "classical") & (means["class"] == FunctionKind.TWO_TO_ONE.value)]
    quantum = table[table["method"] == "quantum"].groupby("n", as_index=False)["queries"].mean()

    if len(quantum) < 2:
        return SeparationFit(float("nan"), float("nan"), float("nan"), means)

    c_slope, _ = np.polyfit(classical["n"].to_numpy(float), np.log2(classical["queries"].to_numpy(float)), 1)
    q_slope, q_intercept = np.polyfit(quantum["n"].to_numpy(float), quantum["queries"].to_numpy(float), 1)
    return SeparationFit(float(c_slope), float(q_slope), float(q_intercept), means)
