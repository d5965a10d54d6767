"""Stage 2: Quantum embedding and observable features."""

import logging
from typing import Any

import numpy as np
import pandas as pd

from config import MAX_STATE_QUBITS
from core.models import DatasetEntry, FunctionKind
from core.schemas import ExactMomentCheck
from core.storage import write_csv
from learn.sweep import measure_function
from pipeline.context import ExperimentContext
from quantum.embed import DiagonalDensity, densities_table, embed_diagonal, embed_via_circuit
from quantum.observe import exact_moments

logger = logging.getLogger(__name__)

# Exact observable expectation per class for GF(2)-linear functions
EXPECTED_MEANS = {FunctionKind.ONE_TO_ONE.value: 0.0, FunctionKind.TWO_TO_ONE.value: 1.0}


def _circuit_distance(entry: DatasetEntry) -> float:
    """Total-variation distance between the circuit and diagonal embeddings."""
    f = entry.function
    return embed_via_circuit(f).trace_distance(embed_diagonal(f))


def exact_moment_check(ctx: ExperimentContext) -> ExactMomentCheck:
    """
    Per-class exact mean and variance, plus the largest deviation from the expected means.

    Table-mode 2:1 functions need not map anything to zero, so only their 1:1
    counterparts are held to the expected value.
    """
    dataset = ctx.require_dataset()
    moments: dict[str, list[tuple[float, float]]] = {}
    error = 0.0
    for entry, rho in zip(dataset.entries, ctx.densities):
        kind = entry.function_class.kind.value
        mean, variance = exact_moments(rho)
        moments.setdefault(kind, []).append((mean, variance))
        if entry.function.is_linear or kind == FunctionKind.ONE_TO_ONE.value:
            error = max(error, abs(mean - EXPECTED_MEANS[kind]))
    return ExactMomentCheck(
        mean={k: float(np.mean([m for m, _ in v])) for k, v in sorted(moments.items())},
        variance={k: float(np.mean([s for _, s in v])) for k, v in sorted(moments.items())},
        max_mean_error=error,
    )


async def embed_and_measure(ctx: ExperimentContext, dump_densities: bool = False) -> dict[str, Any]:
    """
    Embed every function, cross-check against the circuit, and sample features.

    Writes features.csv (and densities.csv when asked) under the output directory.

    Args:
        ctx: Experiment context with a dataset loaded
        dump_densities: Also export every diagonal density

    Returns:
        Dict with the exact-moment check and the embedding distance
    """
    dataset = ctx.require_dataset()
    config = ctx.config
    entries = list(dataset.entries)

    ctx.densities = await ctx.pool.map_ordered(lambda e: embed_diagonal(e.function), entries)

    tv_distance: float | None = None
    if 2 * dataset.n <= MAX_STATE_QUBITS:
        distances = await ctx.pool.map_ordered(_circuit_distance, entries)
        tv_distance = float(max(distances))
        logger.info(f"Circuit embedding agrees with diagonal embedding to {tv_distance:.3e}")
    else:
        logger.warning(f"Skipping circuit embedding check: {2 * dataset.n} qubits exceed {MAX_STATE_QUBITS}")

    check = exact_moment_check(ctx)

    pairs: list[tuple[DatasetEntry, DiagonalDensity]] = list(zip(entries, ctx.densities))
    ctx.features = await ctx.pool.map_ordered(
        lambda pair: measure_function(pair[0].id, pair[1], config.shots, config.base_seed),
        pairs,
    )

    frame = pd.DataFrame([fv.as_row(e.label) for fv, e in zip(ctx.features, entries)])
    write_csv(ctx.output_dir / "features.csv", frame, ctx.header)
    if dump_densities:
        write_csv(ctx.output_dir / "densities.csv", densities_table(dataset.ids, ctx.densities), ctx.header)

    ctx.summary.update(
        {
            "n_functions": len(dataset),
            "exact_means": check.mean,
            "exact_variances": check.variance,
            "exact_check": check,
            "max_embedding_tv_distance": tv_distance,
        }
    )
    return {
        "functions": len(dataset),
        "shots": config.shots,
        "max_mean_error": check.max_mean_error,
        "max_embedding_tv_distance": tv_distance,
    }
