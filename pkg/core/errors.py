"""Exception hierarchy with CLI exit codes."""


class LabError(Exception):
    """Base class for errors that terminate a CLI command."""

    exit_code: int = 1


class ConfigError(LabError):
    """Raised when the experiment configuration is invalid."""

    exit_code = 2


class DataError(LabError):
    """Raised when input data is missing, malformed, or unattainable."""

    exit_code = 3


class UnsupportedFunctionClass(DataError):
    """Raised when a function is neither one-to-one nor two-to-one."""

    def __init__(self, message: str, preimage_histogram: dict[int, int]):
        super().__init__(message)
        self.preimage_histogram = preimage_histogram


class UniquenessExhausted(DataError):
    """Raised when a dataset cannot be filled with distinct functions."""

    def __init__(self, message: str, attempts: int):
        super().__init__(message)
        self.attempts = attempts


class ManifestMismatch(DataError):
    """Raised when a manifest disagrees with the requested configuration."""

    pass


class ConvergenceError(LabError):
    """Raised when an iterative numerical routine fails to converge."""

    exit_code = 4

    def __init__(self, message: str, iterations: int = 0, residual: float = float("nan")):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual


class DegenerateKernel(ConvergenceError):
    """Raised when a centred kernel matrix has no positive leading eigenvalue."""

    pass
