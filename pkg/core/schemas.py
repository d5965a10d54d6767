"""Pydantic schemas for manifests, summaries, and stage results."""

from typing import Any, Literal, Optional

from pydantic import BaseModel, Field, model_validator


class ManifestEntry(BaseModel):
    """One function of a dataset manifest.

    Hex strings encode integer values (bit 0 = least significant), zero-padded to
    ceil(n/4) digits.
    """

    id: int = Field(ge=0)
    kind: Literal["linear", "table"]
    rows_hex: Optional[list[str]] = None
    table_hex: Optional[list[str]] = None
    # "class" is a Python keyword, hence the alias
    function_class: Literal["1:1", "2:1"] = Field(alias="class")
    hidden_hex: str

    model_config = {"populate_by_name": True}

    @model_validator(mode="after")
    def _representation_present(self) -> "ManifestEntry":
        if self.kind == "linear" and self.rows_hex is None:
            raise ValueError("linear entry needs rows_hex")
        if self.kind == "table" and self.table_hex is None:
            raise ValueError("table entry needs table_hex")
        return self


class DatasetManifest(BaseModel):
    """Serialized Dataset (boolfn JSON manifest)."""

    n: int = Field(ge=1, le=16)
    seed: int
    mode: str = "linear"
    sampling: str = "uniform rejection sampling over each matrix class"
    config: dict[str, Any] = Field(default_factory=dict)
    entries: list[ManifestEntry]


class ExactMomentCheck(BaseModel):
    """Exact model values observed per class."""

    mean: dict[str, float]
    variance: dict[str, float]
    max_mean_error: float


class PipelineSummary(BaseModel):
    """summary.json of the pipeline command."""

    config: dict[str, Any]
    n_functions: int
    shots: int
    features: str
    exact_means: dict[str, float]
    exact_variances: dict[str, float]
    exact_check: ExactMomentCheck
    max_embedding_tv_distance: Optional[float] = None
    kmeans_agreement: float
    kmeans_inertia: float
    kpca_margin: Optional[float] = None
    f1_train: float
    f1_test: float
    f1_test_outlier: float
    train_ids: list[int]
    test_ids: list[int]
    nu: float
    ocsvm_kernel: str
    ocsvm_degenerate: bool = False


class SweepCell(BaseModel):
    """Median F1 of one shots value across seeds."""

    shots: int
    median_f1_test: float
    q25_f1_test: float
    q75_f1_test: float
    median_f1_train: float


class SimonSummary(BaseModel):
    """Footer data of the separation experiment."""

    decision_errors: int
    mean_quantum_queries: float
    mean_classical_queries_one_to_one: Optional[float] = None
    mean_classical_queries_two_to_one: Optional[float] = None
    classical_log2_slope: Optional[float] = None
    quantum_linear_slope: Optional[float] = None


class TopologySummary(BaseModel):
    """Footer data of the graph report."""

    n_functions: int
    betti0_threshold: float
    betti0_accuracy: float
    pair_accuracy: float
    certificates_consistent: bool
