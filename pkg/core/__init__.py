"""Core module: Boolean functions, GF(2) algebra, datasets, and file I/O.

Submodules are imported explicitly (``from core.boolfn import ...``); only the error
hierarchy is re-exported here so that ``config`` can depend on it without a cycle.
"""

from core.errors import (
    ConfigError,
    ConvergenceError,
    DataError,
    DegenerateKernel,
    LabError,
    ManifestMismatch,
    UniquenessExhausted,
    UnsupportedFunctionClass,
)

__all__ = [
    "LabError",
    "ConfigError",
    "DataError",
    "UnsupportedFunctionClass",
    "UniquenessExhausted",
    "ManifestMismatch",
    "ConvergenceError",
    "DegenerateKernel",
]
