"""Shared fixtures: canonical small functions, the default dataset, seeded generators."""

import numpy as np
import pytest

from config import ExperimentConfig
from core.boolfn import gen_dataset
from core.models import BooleanFunction, GF2Matrix


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def identity2():
    """The 2-bit identity, a bijection."""
    return BooleanFunction.linear(GF2Matrix.identity(2))


@pytest.fixture
def collapse2():
    """rows [10, 10]: f(x) = (x1, x1), two-to-one with hidden string 01."""
    return BooleanFunction.linear(GF2Matrix.from_strings(["10", "10"]))


@pytest.fixture
def table3_two_to_one():
    """A non-linear 3-bit function with period s = 0b101."""
    s = 0b101
    table = [0] * 8
    for y, x in enumerate(x for x in range(8) if x < x ^ s):
        table[x] = table[x ^ s] = [3, 6, 1, 7][y]
    return BooleanFunction.from_table(3, table)


@pytest.fixture(scope="session")
def dataset6():
    """The default n=6, m=120 dataset."""
    return gen_dataset(6, 120, 42)


@pytest.fixture(scope="session")
def small_dataset():
    return gen_dataset(4, 16, 7)


@pytest.fixture
def small_config(tmp_path):
    return ExperimentConfig(
        n=4,
        m=16,
        shots=200,
        shot_grid=[10, 200],
        seeds=[7, 8],
        widths=[3, 4],
        trials=5,
        output_dir=str(tmp_path / "out"),
    )
