"""State shared between pipeline stages of one command."""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from config import ExperimentConfig
from core.models import Dataset
from quantum.embed import DiagonalDensity
from quantum.observe import FeatureVector
from utils.worker_pool import WorkerPool


@dataclass
class ExperimentContext:
    """Config, pool, and the artefacts earlier stages hand to later ones."""

    config: ExperimentConfig
    manifest_path: Path
    pool: WorkerPool
    dataset: Dataset | None = None
    densities: list[DiagonalDensity] = field(default_factory=list)
    features: list[FeatureVector] = field(default_factory=list)
    summary: dict[str, Any] = field(default_factory=dict)

    @property
    def output_dir(self) -> Path:
        return Path(self.config.output_dir)

    @property
    def header(self) -> dict[str, Any]:
        return self.config.header()

    def require_dataset(self) -> Dataset:
        if self.dataset is None:
            raise RuntimeError("no dataset loaded; run the generate stage first")
        return self.dataset
