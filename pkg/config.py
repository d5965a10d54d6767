"""Configuration for the Simon-GQML laboratory."""

import os

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator
from pydantic_settings import BaseSettings

from core.errors import ConfigError

load_dotenv()


# Numerical tolerances
EXACT_TOL = 1e-12  # exact-circuit identities
SUM_TOL = 1e-9  # accumulated sums and probability normalisation
OPERATOR_TOL = 1e-10  # dense operator identities and twirling

# Size limits
MAX_WIDTH = 16
MAX_STATE_QUBITS = 24
MAX_DENSE_QUBITS = 8
MAX_TWIRL_WIDTH = 4

GENERATOR_MODES = ["linear", "table"]
KERNELS = ["linear", "rbf"]
FEATURE_SETS = ["mean_variance", "mean"]


class DatasetConfig(BaseModel):
    """Dataset generation configuration."""

    n: int = Field(default=6, ge=1, le=MAX_WIDTH, description="Input/output bit width")
    m: int = Field(default=120, ge=2, description="Number of functions (half 1:1, half 2:1)")
    mode: str = Field(default="linear", description="2:1 generator mode")
    max_retries: int = Field(default=10_000, ge=1, description="Uniqueness retries per function")

    @field_validator("m")
    @classmethod
    def _m_even(cls, value: int) -> int:
        if value % 2:
            raise ValueError("m must be even")
        return value

    @field_validator("mode")
    @classmethod
    def _known_mode(cls, value: str) -> str:
        if value not in GENERATOR_MODES:
            raise ValueError(f"mode must be one of {GENERATOR_MODES}")
        return value


class ShotsConfig(BaseModel):
    """Measurement budget configuration."""

    shots: int = Field(default=5000, ge=2, description="Shots per function")
    shot_grid: list[int] = Field(default=[10, 50, 100, 500, 1000, 5000])

    @field_validator("shot_grid")
    @classmethod
    def _ascending(cls, value: list[int]) -> list[int]:
        if not value:
            raise ValueError("shot_grid must not be empty")
        if any(s < 2 for s in value):
            raise ValueError("every shot_grid entry must be >= 2")
        if sorted(value) != value:
            raise ValueError("shot_grid must be ascending")
        return value


class LearnConfig(BaseModel):
    """Classical post-processing configuration."""

    nu: float = Field(default=0.02, gt=0.0, le=1.0, description="One-class SVM nu")
    ocsvm_kernel: str = "linear"
    kpca_kernel: str = "rbf"
    features: str = "mean_variance"
    kmeans_restarts: int = Field(default=10, ge=1)
    max_lloyd_iter: int = Field(default=300, ge=1)
    smo_max_iter: int = Field(default=100_000, ge=1)
    smo_tol: float = Field(default=1e-6, gt=0.0, description="SMO KKT tolerance, relative to the kernel scale")

    @field_validator("ocsvm_kernel", "kpca_kernel")
    @classmethod
    def _known_kernel(cls, value: str) -> str:
        if value not in KERNELS:
            raise ValueError(f"kernel must be one of {KERNELS}")
        return value

    @field_validator("features")
    @classmethod
    def _known_features(cls, value: str) -> str:
        if value not in FEATURE_SETS:
            raise ValueError(f"features must be one of {FEATURE_SETS}")
        return value


class SimonConfig(BaseModel):
    """Simon's algorithm / separation experiment configuration."""

    max_queries: int = Field(default=200, description="Quantum sample budget per run")
    widths: list[int] = Field(default=[4, 6, 8, 10])
    trials: int = Field(default=200, ge=1)


class GraphConfig(BaseModel):
    """Functional-graph report configuration."""

    visualization_size: int = Field(default=64, ge=2, description="Functions in the DOT and threshold visualization set")
    dot_max_width: int = Field(default=10, ge=1)


class RuntimeConfig(BaseModel):
    """Seeds, workers, and output location."""

    base_seed: int = 42
    num_seeds: int = Field(default=5, ge=1)
    workers: int = Field(default_factory=lambda: os.cpu_count() or 1, ge=1)
    output_dir: Path = Path("results")


class ExperimentConfig(BaseModel):
    """Flattened, validated view of the settings handed to the orchestrator.

    Echoed verbatim into every output file header.
    """

    n: int = 6
    m: int = 120
    mode: str = "linear"
    max_retries: int = Field(default=10_000, ge=1)
    shots: int = 5000
    shot_grid: list[int] = Field(default=[10, 50, 100, 500, 1000, 5000])
    seeds: list[int] = Field(default=[42, 43, 44, 45, 46])
    nu: float = 0.02
    ocsvm_kernel: str = "linear"
    kpca_kernel: str = "rbf"
    features: str = "mean_variance"
    kmeans_restarts: int = Field(default=10, ge=1)
    max_lloyd_iter: int = Field(default=300, ge=1)
    smo_tol: float = Field(default=1e-6, gt=0.0)
    smo_max_iter: int = Field(default=100_000, ge=1)
    max_queries: int = 200
    widths: list[int] = Field(default=[4, 6, 8, 10])
    trials: int = 200
    visualization_size: int = Field(default=64, ge=2)
    dot_max_width: int = Field(default=10, ge=1)
    workers: int = 1
    output_dir: str = "results"

    @field_validator("n")
    @classmethod
    def _width_in_range(cls, value: int) -> int:
        if not 1 <= value <= MAX_WIDTH:
            raise ValueError(f"n must be in 1..{MAX_WIDTH}")
        return value

    @field_validator("shots")
    @classmethod
    def _enough_shots(cls, value: int) -> int:
        if value < 2:
            raise ValueError("shots must be >= 2")
        return value

    @field_validator("nu")
    @classmethod
    def _nu_in_range(cls, value: float) -> float:
        if not 0 < value <= 1:
            raise ValueError("nu must be in (0, 1]")
        return value

    @field_validator("mode")
    @classmethod
    def _known_mode(cls, value: str) -> str:
        if value not in GENERATOR_MODES:
            raise ValueError(f"mode must be one of {GENERATOR_MODES}")
        return value

    @field_validator("ocsvm_kernel", "kpca_kernel")
    @classmethod
    def _known_kernel(cls, value: str) -> str:
        if value not in KERNELS:
            raise ValueError(f"kernel must be one of {KERNELS}")
        return value

    @field_validator("features")
    @classmethod
    def _known_features(cls, value: str) -> str:
        if value not in FEATURE_SETS:
            raise ValueError(f"features must be one of {FEATURE_SETS}")
        return value

    @field_validator("shot_grid")
    @classmethod
    def _ascending(cls, value: list[int]) -> list[int]:
        if not value or any(s < 2 for s in value) or sorted(value) != value:
            raise ValueError("shot_grid must be a non-empty ascending list of values >= 2")
        return value

    @model_validator(mode="after")
    def _consistent(self) -> "ExperimentConfig":
        if self.m < 2 or self.m % 2:
            raise ValueError("m must be even and >= 2")
        if not self.seeds:
            raise ValueError("at least one seed is required")
        if self.max_queries < self.n:
            raise ValueError("max_queries must be >= n")
        return self

    @property
    def base_seed(self) -> int:
        return self.seeds[0]

    def header(self) -> dict[str, Any]:
        """Config as plain data for file headers."""
        return self.model_dump(mode="json")


class Settings(BaseSettings):
    """Main application settings."""

    dataset: DatasetConfig = Field(default_factory=DatasetConfig)
    shots: ShotsConfig = Field(default_factory=ShotsConfig)
    learn: LearnConfig = Field(default_factory=LearnConfig)
    simon: SimonConfig = Field(default_factory=SimonConfig)
    graphs: GraphConfig = Field(default_factory=GraphConfig)
    runtime: RuntimeConfig = Field(default_factory=RuntimeConfig)

    model_config = {"env_prefix": "SIMONLAB_", "env_nested_delimiter": "__"}

    def to_experiment(self, **overrides: Any) -> ExperimentConfig:
        """
        Build the flattened experiment config.

        Args:
            **overrides: Flag values; None means "not given on the command line"

        Returns:
            Validated ExperimentConfig

        Raises:
            ConfigError: If the merged values fail validation
        """
        seeds = [self.runtime.base_seed + i for i in range(self.runtime.num_seeds)]
        values: dict[str, Any] = {
            "n": self.dataset.n,
            "m": self.dataset.m,
            "mode": self.dataset.mode,
            "max_retries": self.dataset.max_retries,
            "shots": self.shots.shots,
            "shot_grid": self.shots.shot_grid,
            "seeds": seeds,
            "nu": self.learn.nu,
            "ocsvm_kernel": self.learn.ocsvm_kernel,
            "kpca_kernel": self.learn.kpca_kernel,
            "features": self.learn.features,
            "kmeans_restarts": self.learn.kmeans_restarts,
            "max_lloyd_iter": self.learn.max_lloyd_iter,
            "smo_tol": self.learn.smo_tol,
            "smo_max_iter": self.learn.smo_max_iter,
            "max_queries": self.simon.max_queries,
            "widths": self.simon.widths,
            "trials": self.simon.trials,
            "visualization_size": self.graphs.visualization_size,
            "dot_max_width": self.graphs.dot_max_width,
            "workers": self.runtime.workers,
            "output_dir": str(self.runtime.output_dir),
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        try:
            return ExperimentConfig(**values)
        except ValidationError as e:
            raise ConfigError(f"Invalid experiment config: {e}") from e


def load_settings(config_file: str | Path | None = None) -> Settings:
    """
    Load settings from defaults, environment, and an optional TOML file.

    The TOML file uses the same sections as Settings, e.g.::

        [dataset]
        n = 6
        [shots]
        shots = 5000

    Args:
        config_file: Optional path to a TOML key-value file

    Returns:
        Settings instance

    Raises:
        ConfigError: If the file cannot be read or fails validation
    """
    data: dict[str, Any] = {}
    if config_file:
        path = Path(config_file)
        try:
            with path.open("rb") as fh:
                data = tomllib.load(fh)
        except (OSError, tomllib.TOMLDecodeError) as e:
            raise ConfigError(f"Cannot read config file {path}: {e}") from e

    try:
        return Settings(**data)
    except ValidationError as e:
        raise ConfigError(f"Invalid settings: {e}") from e
