"""Stage 7: Quantum versus classical query separation."""

import logging
from typing import Any

import numpy as np
import pandas as pd

from core.models import DatasetEntry, FunctionKind
from core.schemas import SimonSummary
from core.storage import write_csv
from pipeline.context import ExperimentContext
from quantum.simon import classical_baseline, run_simon, separation_experiment, separation_rows

logger = logging.getLogger(__name__)


def decide_function(entry: DatasetEntry, seed: int, max_queries: int) -> list[dict]:
    """Both deciders on one function, each from a generator seeded with seed XOR id."""
    f = entry.function
    quantum = run_simon(f, np.random.default_rng(seed ^ entry.id), max_queries=max_queries)
    classical = classical_baseline(f, np.random.default_rng(seed ^ entry.id))
    rows = separation_rows(f.n, entry.id, entry.function_class, quantum, classical)
    for row in rows:
        row.pop("trial")
        row.update({"function_id": entry.id, "seed": seed})
    return rows


def _class_mean(table: pd.DataFrame, method: str, kind: FunctionKind) -> float | None:
    picked = table[(table["method"] == method) & (table["class"] == kind.value)]["queries"]
    return float(picked.mean()) if len(picked) else None


async def compare_queries(ctx: ExperimentContext, widths: bool = True) -> dict[str, Any]:
    """
    Run Simon's algorithm and the classical collision search on every function.

    Every seed decides every function once. Writes separation.csv and, unless disabled,
    separation_widths.csv from fresh functions over the configured widths.

    Args:
        ctx: Experiment context with a dataset loaded
        widths: Also run the multi-width separation experiment

    Returns:
        SimonSummary as a dict
    """
    dataset = ctx.require_dataset()
    config = ctx.config
    jobs = [(entry, seed) for seed in config.seeds for entry in dataset.entries]
    results = await ctx.pool.map_ordered(lambda job: decide_function(job[0], job[1], config.max_queries), jobs)
    columns = ["function_id", "seed", "n", "class", "method", "queries", "verification_queries", "decided", "correct"]
    table = pd.DataFrame([row for rows in results for row in rows])[columns]

    summary = SimonSummary(
        decision_errors=int((~table["correct"].astype(bool)).sum()),
        mean_quantum_queries=float(table[table["method"] == "quantum"]["queries"].mean()),
        mean_classical_queries_one_to_one=_class_mean(table, "classical", FunctionKind.ONE_TO_ONE),
        mean_classical_queries_two_to_one=_class_mean(table, "classical", FunctionKind.TWO_TO_ONE),
    )

    if widths and config.widths and config.trials > 0:
        sweep, fit = await ctx.pool.run(
            separation_experiment,
            config.widths,
            config.trials,
            config.base_seed,
            config.mode,
            config.max_queries,
        )
        summary.classical_log2_slope = fit.classical_log2_slope
        summary.quantum_linear_slope = fit.quantum_linear_slope
        write_csv(
            ctx.output_dir / "separation_widths.csv",
            sweep,
            ctx.header,
            footer={
                "classical_log2_slope": fit.classical_log2_slope,
                "quantum_linear_slope": fit.quantum_linear_slope,
                "quantum_intercept": fit.quantum_intercept,
            },
        )

    write_csv(ctx.output_dir / "separation.csv", table, ctx.header, footer=summary.model_dump())
    if summary.decision_errors:
        logger.error(f"{summary.decision_errors} wrong decisions in the separation run")
    logger.info(
        f"Mean queries: quantum {summary.mean_quantum_queries:.2f}, "
        f"classical 1:1 {summary.mean_classical_queries_one_to_one}, "
        f"classical 2:1 {summary.mean_classical_queries_two_to_one}"
    )
    return summary.model_dump()
