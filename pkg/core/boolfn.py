"""Generation, evaluation, and exact classification of Boolean functions."""

import logging

import numpy as np

from config import MAX_WIDTH
from core.errors import UniquenessExhausted, UnsupportedFunctionClass
from core.gf2 import gf2_apply, gf2_rank_nullspace, random_matrix
from core.models import (
    BitString,
    BooleanFunction,
    Dataset,
    DatasetEntry,
    FunctionClass,
    FunctionKind,
)

logger = logging.getLogger(__name__)

# Rejection sampling should accept within a handful of draws; log if it does not.
_SLOW_REJECTION = 64


def _check_width(n: int) -> None:
    if not 1 <= n <= MAX_WIDTH:
        raise ValueError(f"width must be in [1, {MAX_WIDTH}], got {n}")


def gen_one_to_one(n: int, rng: np.random.Generator) -> BooleanFunction:
    """
    Uniformly random invertible linear function.

    Draws uniform GF(2) matrices until one has full rank; acceptance probability per draw
    is prod_{k=1..n}(1 - 2^-k), about 0.29 for large n.
    """
    _check_width(n)
    draws = 0
    while True:
        draws += 1
        matrix = random_matrix(n, rng)
        rank, _ = gf2_rank_nullspace(matrix)
        if rank == n:
            if draws > _SLOW_REJECTION:
                logger.warning(f"gen_one_to_one needed {draws} draws at n={n}")
            return BooleanFunction.linear(matrix)


def gen_two_to_one(n: int, rng: np.random.Generator, mode: str = "linear") -> BooleanFunction:
    """
    Random two-to-one function with a nonzero hidden XOR period.

    Args:
        n: Width
        rng: Random generator
        mode: "linear" (uniform rank n-1 matrix) or "table" (uniform nonzero period,
            pair outputs drawn without replacement)

    Returns:
        BooleanFunction
    """
    _check_width(n)
    if mode == "linear":
        draws = 0
        while True:
            draws += 1
            matrix = random_matrix(n, rng)
            rank, _ = gf2_rank_nullspace(matrix)
            if rank == n - 1:
                if draws > _SLOW_REJECTION:
                    logger.warning(f"gen_two_to_one needed {draws} draws at n={n}")
                return BooleanFunction.linear(matrix)

    if mode == "table":
        size = 1 << n
        hidden = int(rng.integers(1, size))
        reps = [x for x in range(size) if x < x ^ hidden]
        outputs = rng.choice(size, size=len(reps), replace=False)
        table = np.empty(size, dtype=np.int64)
        for x, y in zip(reps, outputs):
            table[x] = y
            table[x ^ hidden] = y
        return BooleanFunction.from_table(n, table)

    raise ValueError(f"unknown generator mode: {mode}")


def evaluate(f: BooleanFunction, x: BitString) -> BitString:
    """f(x): matrix product for linear functions, lookup for tables."""
    if x.width != f.n:
        raise ValueError(f"width mismatch: function has {f.n} bits, input has {x.width}")
    if f.matrix is not None:
        return gf2_apply(f.matrix, x)
    return BitString(f.n, f.table[x.value])


def preimage_counts(f: BooleanFunction) -> np.ndarray:
    """Number of preimages of every output value."""
    return np.bincount(f.truth_table, minlength=1 << f.n)


def classify_exact(f: BooleanFunction) -> FunctionClass:
    """
    Ground-truth class by brute force over all 2^n inputs.

    Raises:
        UnsupportedFunctionClass: If f is neither a bijection nor a 2:1 function with a
            global XOR period
    """
    table = f.truth_table
    counts = preimage_counts(f)
    if np.all(counts == 1):
        return FunctionClass(FunctionKind.ONE_TO_ONE, BitString.zero(f.n))

    histogram = {int(k): int(v) for k, v in zip(*np.unique(counts, return_counts=True))}
    if set(histogram) <= {0, 2}:
        y = int(np.flatnonzero(counts == 2)[0])
        x1, x2 = (int(x) for x in np.flatnonzero(table == y))
        hidden = x1 ^ x2
        xs = np.arange(1 << f.n)
        if np.array_equal(table, table[xs ^ hidden]):
            return FunctionClass(FunctionKind.TWO_TO_ONE, BitString(f.n, hidden))
        raise UnsupportedFunctionClass(
            "2:1 function without a global XOR period is not a Simon instance",
            preimage_histogram=histogram,
        )

    raise UnsupportedFunctionClass(
        f"unsupported class: preimage-count histogram {histogram}",
        preimage_histogram=histogram,
    )


def gen_dataset(
    n: int,
    m: int,
    seed: int,
    mode: str = "linear",
    max_retries: int = 10_000,
) -> Dataset:
    """
    Balanced dataset of distinct functions.

    Function ``i`` is drawn from its own generator seeded with ``seed ^ i``; ids
    0..m/2-1 are 1:1 and m/2..m-1 are 2:1. Uniqueness is enforced on truth tables.

    Args:
        n: Width
        m: Even number of functions
        seed: Base seed
        mode: 2:1 generator mode ("linear" or "table")
        max_retries: Draws allowed per function before giving up

    Returns:
        Dataset

    Raises:
        UniquenessExhausted: If a distinct function cannot be found within max_retries
    """
    _check_width(n)
    if m < 2 or m % 2:
        raise ValueError(f"m must be a positive even number, got {m}")

    seen: set[bytes] = set()
    entries: list[DatasetEntry] = []
    for i in range(m):
        rng = np.random.default_rng(seed ^ i)
        want_bijection = i < m // 2
        for attempt in range(1, max_retries + 1):
            f = gen_one_to_one(n, rng) if want_bijection else gen_two_to_one(n, rng, mode)
            key = f.table_key()
            if key not in seen:
                seen.add(key)
                break
        else:
            raise UniquenessExhausted(
                f"could not draw a distinct {'1:1' if want_bijection else '2:1'} function "
                f"#{i} at n={n} after {max_retries} attempts",
                attempts=max_retries,
            )
        entries.append(DatasetEntry(id=i, function=f, function_class=classify_exact(f)))
        logger.debug(f"function {i}: {entries[-1].function_class.kind.value} after {attempt} draws")

    logger.info(f"Generated dataset: n={n}, m={m}, seed={seed}, mode={mode}")
    return Dataset(n=n, seed=seed, mode=mode, entries=tuple(entries))
