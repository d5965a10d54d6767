from itertools import product

import numpy as np
import pytest

from core.gf2 import gf2_apply, gf2_nullspace, gf2_rank_nullspace, gf2_truth_table, parity, random_matrix
from core.models import BitString, GF2Matrix


class TestParity:
    def test_small_values(self):
        np.testing.assert_array_equal(parity(np.array([0, 1, 2, 3, 7, 0xFFFF])), [0, 1, 1, 0, 1, 0])


class TestRankNullspace:
    def test_identity(self):
        rank, basis = gf2_rank_nullspace(GF2Matrix.identity(5))
        assert rank == 5
        assert basis == []

    def test_collapse(self):
        rank, basis = gf2_rank_nullspace(GF2Matrix.from_strings(["10", "10"]))
        assert rank == 1
        assert basis == [BitString.parse("01")]

    def test_rank_plus_nullity(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            n = int(rng.integers(1, 9))
            m = random_matrix(n, rng)
            rank, basis = gf2_rank_nullspace(m)
            assert rank + len(basis) == n
            for v in basis:
                assert gf2_apply(m, v).is_zero()

    def test_nullspace_of_rows(self):
        rows = [0b0110, 0b0011]
        basis = gf2_nullspace(rows, 4)
        assert len(basis) == 2
        for v in basis:
            assert all(((r & v).bit_count() & 1) == 0 for r in rows)
        assert gf2_rank_nullspace(GF2Matrix(4, (0b0110, 0b0011, 0, 0)))[0] == 2


def _span(basis: list[int]) -> set[int]:
    span = {0}
    for v in basis:
        span |= {s ^ v for s in span}
    return span


def _brute_kernel(rows: tuple[int, ...], n: int) -> set[int]:
    return {v for v in range(1 << n) if all((r & v).bit_count() % 2 == 0 for r in rows)}


class TestNullspaceExhaustive:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_every_matrix(self, n):
        for rows in product(range(1 << n), repeat=n):
            basis = gf2_nullspace(list(rows), n)
            assert _span(basis) == _brute_kernel(rows, n)
            # independent basis spans exactly 2^k vectors
            assert len(_span(basis)) == 1 << len(basis)

    def test_width_four(self):
        for rows in product(range(16), repeat=4):
            rank, basis = gf2_rank_nullspace(GF2Matrix(4, rows))
            kernel = _brute_kernel(rows, 4)
            values = [v.value for v in basis]
            assert _span(values) == kernel
            assert len(kernel) == 1 << len(values)
            assert rank == 4 - len(values)


class TestApply:
    def test_truth_table_matches_apply(self):
        rng = np.random.default_rng(1)
        m = random_matrix(5, rng)
        table = gf2_truth_table(m)
        for x in range(32):
            assert gf2_apply(m, BitString(5, x)).value == table[x]

    def test_width_mismatch(self):
        with pytest.raises(ValueError):
            gf2_apply(GF2Matrix.identity(3), BitString(2, 1))
