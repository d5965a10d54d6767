"""Stage 5: F1 versus shot budget."""

import logging
from typing import Any

import pandas as pd

from core.schemas import SweepCell
from core.storage import write_csv
from learn.kpca import KernelSpec
from learn.sweep import summarize_sweep, sweep_cell
from pipeline.context import ExperimentContext
from quantum.embed import embed_diagonal

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ["shots", "seed", "split", "f1_inlier", "f1_outlier"]


async def sweep_shots(ctx: ExperimentContext) -> dict[str, Any]:
    """
    One-class SVM F1 over the shot grid and every seed.

    Cells run on the worker pool and are gathered in (shots, seed) order. Writes
    f1_vs_shots.csv (tidy) and f1_vs_shots_summary.csv (medians per shots value).

    Args:
        ctx: Experiment context with a dataset loaded

    Returns:
        Dict with the median test F1 per shots value
    """
    dataset = ctx.require_dataset()
    config = ctx.config
    if not ctx.densities:
        ctx.densities = await ctx.pool.map_ordered(lambda e: embed_diagonal(e.function), dataset.entries)

    spec = KernelSpec(config.ocsvm_kernel)
    cells = [(shots, seed) for shots in config.shot_grid for seed in config.seeds]
    logger.info(f"Sweeping {len(config.shot_grid)} shot budgets x {len(config.seeds)} seeds")

    results = await ctx.pool.map_ordered(
        lambda cell: sweep_cell(
            dataset,
            ctx.densities,
            cell[0],
            cell[1],
            config.nu,
            spec,
            config.features,
            config.smo_tol,
            config.smo_max_iter,
        ),
        cells,
    )
    table = pd.DataFrame([row for rows in results for row in rows], columns=SWEEP_COLUMNS)
    summary = summarize_sweep(table)

    write_csv(ctx.output_dir / "f1_vs_shots.csv", table, ctx.header)
    write_csv(ctx.output_dir / "f1_vs_shots_summary.csv", summary, ctx.header)

    medians = [SweepCell(**row) for row in summary.to_dict(orient="records")]
    for cell in medians:
        logger.info(f"shots={cell.shots}: median test F1 {cell.median_f1_test:.4f}")
    return {"medians": {cell.shots: cell.median_f1_test for cell in medians}, "cells": len(cells)}
