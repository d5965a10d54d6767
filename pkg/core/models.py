"""Domain types: bit strings, GF(2) matrices, Boolean functions, and datasets.

Bit convention (used everywhere in the package): bit 0 is the least significant bit of
an integer value, which is also qubit 0 of a register. Strings are displayed most
significant bit first, so ``BitString(2, 0b10)`` prints as ``"10"``.
"""

from dataclasses import dataclass, field
from enum import Enum as PyEnum
from functools import cached_property

import numpy as np

from config import MAX_WIDTH


@dataclass(frozen=True, order=True)
class BitString:
    """Fixed-width bit string backed by an unsigned integer."""

    width: int
    value: int

    def __post_init__(self) -> None:
        if not 1 <= self.width <= MAX_WIDTH:
            raise ValueError(f"BitString width must be in [1, {MAX_WIDTH}], got {self.width}")
        if not 0 <= self.value < (1 << self.width):
            raise ValueError(f"value {self.value} does not fit in {self.width} bits")

    @classmethod
    def zero(cls, width: int) -> "BitString":
        return cls(width, 0)

    @classmethod
    def parse(cls, text: str) -> "BitString":
        """Parse an MSB-first string such as ``"0110"``."""
        return cls(len(text), int(text, 2))

    def _check(self, other: "BitString") -> None:
        if other.width != self.width:
            raise ValueError(f"width mismatch: {self.width} vs {other.width}")

    def __xor__(self, other: "BitString") -> "BitString":
        self._check(other)
        return BitString(self.width, self.value ^ other.value)

    def dot(self, other: "BitString") -> int:
        """Inner product mod 2."""
        self._check(other)
        return (self.value & other.value).bit_count() & 1

    def bit(self, index: int) -> int:
        if not 0 <= index < self.width:
            raise ValueError(f"bit index {index} out of range for width {self.width}")
        return (self.value >> index) & 1

    def is_zero(self) -> bool:
        return self.value == 0

    def to_hex(self) -> str:
        return format(self.value, f"0{(self.width + 3) // 4}x")

    def __str__(self) -> str:
        return format(self.value, f"0{self.width}b")


@dataclass(frozen=True)
class GF2Matrix:
    """Square matrix over GF(2); ``rows[i]`` is the bitmask of columns holding a 1."""

    n: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.rows) != self.n:
            raise ValueError(f"GF2Matrix needs {self.n} rows, got {len(self.rows)}")
        limit = 1 << self.n
        if any(not 0 <= r < limit for r in self.rows):
            raise ValueError("GF2Matrix row does not fit in n bits")

    @classmethod
    def identity(cls, n: int) -> "GF2Matrix":
        return cls(n, tuple(1 << i for i in range(n)))

    @classmethod
    def zero(cls, n: int) -> "GF2Matrix":
        return cls(n, (0,) * n)

    @classmethod
    def from_strings(cls, rows: list[str]) -> "GF2Matrix":
        """Build from MSB-first row strings, e.g. ``["10", "10"]``."""
        return cls(len(rows), tuple(int(r, 2) for r in rows))

    def entry(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def to_array(self) -> np.ndarray:
        """Dense 0/1 array with ``a[i, j] = entry(i, j)``."""
        return np.array(
            [[self.entry(i, j) for j in range(self.n)] for i in range(self.n)], dtype=np.uint8
        )


class FunctionKind(str, PyEnum):
    """Ground-truth class of a Boolean function."""

    ONE_TO_ONE = "1:1"
    TWO_TO_ONE = "2:1"


@dataclass(frozen=True)
class FunctionClass:
    """Class label plus hidden XOR period (zero for bijections)."""

    kind: FunctionKind
    hidden: BitString

    def __post_init__(self) -> None:
        if (self.kind is FunctionKind.TWO_TO_ONE) == self.hidden.is_zero():
            raise ValueError(f"{self.kind.value} class inconsistent with hidden {self.hidden}")

    @property
    def label(self) -> int:
        """Learning label: 0 for 1:1, 1 for 2:1."""
        return 0 if self.kind is FunctionKind.ONE_TO_ONE else 1


@dataclass(frozen=True, eq=False)
class BooleanFunction:
    """An n-bit to n-bit function, either GF(2)-linear or an explicit truth table."""

    n: int
    matrix: GF2Matrix | None = None
    table: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if not 1 <= self.n <= MAX_WIDTH:
            raise ValueError(f"function width must be in [1, {MAX_WIDTH}], got {self.n}")
        if (self.matrix is None) == (self.table is None):
            raise ValueError("exactly one of matrix or table must be given")
        if self.matrix is not None and self.matrix.n != self.n:
            raise ValueError("matrix dimension does not match function width")
        if self.table is not None:
            if len(self.table) != 1 << self.n:
                raise ValueError(f"table needs {1 << self.n} entries, got {len(self.table)}")
            if any(not 0 <= v < (1 << self.n) for v in self.table):
                raise ValueError("table entry does not fit in n bits")

    @classmethod
    def linear(cls, matrix: GF2Matrix) -> "BooleanFunction":
        return cls(n=matrix.n, matrix=matrix)

    @classmethod
    def from_table(cls, n: int, table: list[int] | tuple[int, ...] | np.ndarray) -> "BooleanFunction":
        return cls(n=n, table=tuple(int(v) for v in table))

    @property
    def is_linear(self) -> bool:
        return self.matrix is not None

    @cached_property
    def truth_table(self) -> np.ndarray:
        """Outputs for every input value 0..2^n-1 (read-only int64 array)."""
        if self.table is not None:
            out = np.asarray(self.table, dtype=np.int64)
        else:
            from core.gf2 import gf2_truth_table

            out = gf2_truth_table(self.matrix)
        out.setflags(write=False)
        return out

    def table_key(self) -> bytes:
        """Hashable identity of the truth table, used for uniqueness checks."""
        return self.truth_table.astype(np.uint16).tobytes()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BooleanFunction):
            return NotImplemented
        return self.n == other.n and self.table_key() == other.table_key()

    def __hash__(self) -> int:
        return hash((self.n, self.table_key()))


@dataclass(frozen=True)
class DatasetEntry:
    """One labelled function of a dataset."""

    id: int
    function: BooleanFunction
    function_class: FunctionClass

    @property
    def label(self) -> int:
        return self.function_class.label


@dataclass(frozen=True)
class Dataset:
    """Balanced collection of distinct functions of a common width."""

    n: int
    seed: int
    mode: str
    entries: tuple[DatasetEntry, ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.entries)

    def by_kind(self, kind: FunctionKind) -> list[DatasetEntry]:
        return [e for e in self.entries if e.function_class.kind is kind]

    @property
    def ids(self) -> list[int]:
        return [e.id for e in self.entries]

    @property
    def labels(self) -> np.ndarray:
        return np.array([e.label for e in self.entries], dtype=np.int64)
