"""Linear algebra over GF(2) on integer bitsets.

A row is an int whose bit j is the coefficient of column j. Elimination works on lists of
such ints, so an n x n matrix costs O(n^2) word operations.
"""

import numpy as np

from core.models import BitString, GF2Matrix


def parity(values: np.ndarray) -> np.ndarray:
    """Elementwise parity of non-negative integers below 2^32."""
    v = np.asarray(values, dtype=np.int64).copy()
    v ^= v >> 16
    v ^= v >> 8
    v ^= v >> 4
    v ^= v >> 2
    v ^= v >> 1
    return v & 1


def rref(rows: list[int], n_cols: int) -> tuple[list[int], list[int]]:
    """
    Reduced row-echelon form over GF(2).

    Args:
        rows: Row bitmasks (not modified)
        n_cols: Number of columns

    Returns:
        Tuple of (nonzero reduced rows, pivot column of each row)
    """
    work = list(rows)
    pivots: list[int] = []
    r = 0
    for col in range(n_cols):
        pivot = next((i for i in range(r, len(work)) if (work[i] >> col) & 1), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        for i in range(len(work)):
            if i != r and (work[i] >> col) & 1:
                work[i] ^= work[r]
        pivots.append(col)
        r += 1
        if r == len(work):
            break
    return work[:r], pivots


def gf2_nullspace(rows: list[int], n_cols: int) -> list[int]:
    """
    Basis of {v : row . v = 0 mod 2 for every row}.

    One basis vector per free column f: bit f set, plus the pivot column of every reduced
    row that has bit f set.
    """
    reduced, pivots = rref(rows, n_cols)
    pivot_set = set(pivots)
    basis = []
    for free in range(n_cols):
        if free in pivot_set:
            continue
        v = 1 << free
        for row, p in zip(reduced, pivots):
            if (row >> free) & 1:
                v |= 1 << p
        basis.append(v)
    return basis


def gf2_rank_nullspace(matrix: GF2Matrix) -> tuple[int, list[BitString]]:
    """
    Rank and kernel basis of a square GF(2) matrix.

    Args:
        matrix: Square matrix

    Returns:
        Tuple of (rank, nullspace basis) with rank + len(basis) == n
    """
    basis = gf2_nullspace(list(matrix.rows), matrix.n)
    rank = matrix.n - len(basis)
    return rank, [BitString(matrix.n, v) for v in basis]


def gf2_apply(matrix: GF2Matrix, x: BitString) -> BitString:
    """Matrix-vector product M.x over GF(2)."""
    if x.width != matrix.n:
        raise ValueError(f"width mismatch: matrix is {matrix.n}x{matrix.n}, input has {x.width} bits")
    out = 0
    for i, row in enumerate(matrix.rows):
        out |= ((row & x.value).bit_count() & 1) << i
    return BitString(matrix.n, out)


def gf2_truth_table(matrix: GF2Matrix) -> np.ndarray:
    """M.x for every x in 0..2^n-1, vectorised."""
    xs = np.arange(1 << matrix.n, dtype=np.int64)
    out = np.zeros_like(xs)
    for i, row in enumerate(matrix.rows):
        out |= parity(xs & row) << i
    return out


def random_matrix(n: int, rng: np.random.Generator) -> GF2Matrix:
    """Uniformly random n x n matrix over GF(2)."""
    rows = rng.integers(0, 1 << n, size=n)
    return GF2Matrix(n, tuple(int(r) for r in rows))
