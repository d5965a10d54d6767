"""Flat-file persistence: dataset manifests, CSV tables, and JSON summaries."""

import json
import logging
from pathlib import Path
from typing import Any

import pandas as pd
from pydantic import BaseModel, ValidationError

from core.boolfn import classify_exact
from core.errors import DataError, ManifestMismatch
from core.models import BitString, BooleanFunction, Dataset, DatasetEntry, GF2Matrix
from core.schemas import DatasetManifest, ManifestEntry

logger = logging.getLogger(__name__)


def _hex(value: int, n: int) -> str:
    return format(value, f"0{(n + 3) // 4}x")


def dataset_to_manifest(dataset: Dataset, config: dict[str, Any] | None = None) -> DatasetManifest:
    """Convert a Dataset into its JSON manifest model."""
    entries = []
    for e in dataset.entries:
        f = e.function
        entries.append(
            ManifestEntry(
                id=e.id,
                kind="linear" if f.is_linear else "table",
                rows_hex=[_hex(r, f.n) for r in f.matrix.rows] if f.matrix else None,
                table_hex=[_hex(v, f.n) for v in f.table] if f.table else None,
                function_class=e.function_class.kind.value,
                hidden_hex=e.function_class.hidden.to_hex(),
            )
        )
    return DatasetManifest(
        n=dataset.n,
        seed=dataset.seed,
        mode=dataset.mode,
        config=config or {},
        entries=entries,
    )


def manifest_to_dataset(manifest: DatasetManifest) -> Dataset:
    """
    Rebuild a Dataset from a manifest, re-deriving every class exactly.

    Raises:
        ManifestMismatch: If a stored class or hidden string disagrees with the function
    """
    n = manifest.n
    entries = []
    for item in manifest.entries:
        if item.kind == "linear":
            f = BooleanFunction.linear(GF2Matrix(n, tuple(int(h, 16) for h in item.rows_hex)))
        else:
            f = BooleanFunction.from_table(n, [int(h, 16) for h in item.table_hex])
        cls = classify_exact(f)
        if cls.kind.value != item.function_class or cls.hidden != BitString(n, int(item.hidden_hex, 16)):
            raise ManifestMismatch(
                f"manifest entry {item.id} claims {item.function_class}/{item.hidden_hex}, "
                f"function is {cls.kind.value}/{cls.hidden.to_hex()}"
            )
        entries.append(DatasetEntry(id=item.id, function=f, function_class=cls))
    return Dataset(n=n, seed=manifest.seed, mode=manifest.mode, entries=tuple(entries))


def write_manifest(path: Path, dataset: Dataset, config: dict[str, Any] | None = None) -> Path:
    """Write the dataset manifest as indented JSON."""
    manifest = dataset_to_manifest(dataset, config)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(manifest.model_dump_json(indent=2, by_alias=True) + "\n", encoding="utf-8")
    logger.info(f"Wrote manifest with {len(manifest.entries)} entries to {path}")
    return path


def read_manifest(path: Path, expected_n: int | None = None) -> Dataset:
    """
    Load and validate a dataset manifest.

    Args:
        path: Manifest file
        expected_n: Width the caller expects, if any

    Returns:
        Dataset

    Raises:
        DataError: If the file is missing or malformed
        ManifestMismatch: If the width or stored classes disagree
    """
    if not path.exists():
        raise DataError(f"Manifest not found: {path}")
    try:
        manifest = DatasetManifest.model_validate_json(path.read_text(encoding="utf-8"))
    except ValidationError as e:
        raise DataError(f"Malformed manifest {path}: {e}") from e
    if expected_n is not None and manifest.n != expected_n:
        raise ManifestMismatch(f"manifest width {manifest.n} != configured n={expected_n}")
    return manifest_to_dataset(manifest)


def header_lines(config: dict[str, Any], extra: dict[str, Any] | None = None) -> list[str]:
    """'#'-prefixed metadata lines: the config, one key per line, then extras."""
    lines = [f"# {key}: {json.dumps(value, sort_keys=True)}" for key, value in config.items()]
    for key, value in (extra or {}).items():
        lines.append(f"# {key}: {json.dumps(value, sort_keys=True)}")
    return lines


def write_csv(
    path: Path,
    frame: pd.DataFrame,
    config: dict[str, Any],
    footer: dict[str, Any] | None = None,
) -> Path:
    """
    Write a table with a metadata header (and optional '#' footer).

    Args:
        path: Output file
        frame: Table to write (index dropped)
        config: Experiment config echoed into the header
        footer: Optional key/value lines appended after the table

    Returns:
        The path written
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    body = frame.to_csv(index=False, lineterminator="\n")
    lines = header_lines(config)
    text = "\n".join(lines) + "\n" + body
    if footer:
        text += "\n".join(f"# {k}: {json.dumps(v, sort_keys=True)}" for k, v in footer.items()) + "\n"
    path.write_text(text, encoding="utf-8")
    logger.info(f"Wrote {len(frame)} rows to {path}")
    return path


def read_csv(path: Path) -> pd.DataFrame:
    """Read a table written by write_csv, skipping metadata lines."""
    return pd.read_csv(path, comment="#")


def write_json(path: Path, model: BaseModel) -> Path:
    """Write a pydantic model as indented JSON."""
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(model.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return path


def write_schema(path: Path, model_cls: type[BaseModel]) -> Path:
    """Publish the JSON schema of a pydantic model."""
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(model_cls.model_json_schema(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path
