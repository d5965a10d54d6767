"""Stage 6: Functional-graph topology report."""

import json
import logging
from typing import Any

import numpy as np
import pandas as pd

from core.models import DatasetEntry, FunctionKind
from core.schemas import TopologySummary
from core.storage import write_csv
from graphs.functional import best_stump, best_threshold, build_graph, export_dot, topology_report
from pipeline.context import ExperimentContext

logger = logging.getLogger(__name__)


def visualization_set(entries: list[DatasetEntry], size: int) -> list[DatasetEntry]:
    """First size/2 functions of each class, 1:1 block first."""
    half = size // 2
    ones = [e for e in entries if e.function_class.kind is FunctionKind.ONE_TO_ONE][:half]
    twos = [e for e in entries if e.function_class.kind is FunctionKind.TWO_TO_ONE][:half]
    return ones + twos


def _write_dot_files(ctx: ExperimentContext, entries: list[DatasetEntry]) -> int:
    header = "\n".join(f"// {k}: {json.dumps(v, sort_keys=True)}" for k, v in ctx.header.items())
    out = ctx.output_dir / "graphs"
    out.mkdir(parents=True, exist_ok=True)
    for e in entries:
        name = f"f{e.id}"
        text = export_dot(build_graph(e.function), name=name)
        (out / f"{name}.dot").write_text(header + "\n" + text, encoding="utf-8")
    logger.info(f"Wrote {len(entries)} DOT files to {out}")
    return len(entries)


async def graph_report(ctx: ExperimentContext, write_dot: bool = False) -> dict[str, Any]:
    """
    Topological certificates for every function plus threshold classifiers.

    topology.csv lists the 1:1 block first. Its footer carries the best single threshold
    on betti0 and the best threshold over (betti0, periodic_points), both learned on the
    visualization set.

    Args:
        ctx: Experiment context with a dataset loaded
        write_dot: Also write one DOT file per visualization-set function

    Returns:
        TopologySummary as a dict
    """
    dataset = ctx.require_dataset()
    entries = sorted(dataset.entries, key=lambda e: (e.label, e.id))

    reports = await ctx.pool.map_ordered(lambda e: topology_report(build_graph(e.function)), entries)
    frame = pd.DataFrame([r.as_row(e.id, e.label) for r, e in zip(reports, entries)])
    by_id = {e.id: r for e, r in zip(entries, reports)}

    viz = visualization_set(entries, ctx.config.visualization_size)
    labels = np.array([e.label for e in viz])
    betti0 = [by_id[e.id].betti0 for e in viz]
    periodic = [by_id[e.id].periodic_points for e in viz]
    betti_rule = best_threshold(betti0, labels)
    pair_rule = best_stump([betti0, periodic], labels)

    summary = TopologySummary(
        n_functions=len(entries),
        betti0_threshold=betti_rule.threshold,
        betti0_accuracy=betti_rule.accuracy,
        pair_accuracy=pair_rule.accuracy,
        certificates_consistent=all(r.certificates_consistent for r in reports),
    )
    if not summary.certificates_consistent:
        logger.warning("Graph certificates disagree for at least one function")
    write_csv(ctx.output_dir / "topology.csv", frame, ctx.header, footer=summary.model_dump())
    logger.info(f"betti0 threshold {betti_rule.threshold} classifies {betti_rule.accuracy:.2%} of {len(viz)} functions")

    if write_dot:
        if dataset.n <= ctx.config.dot_max_width:
            _write_dot_files(ctx, viz)
        else:
            logger.warning(f"DOT export skipped: n={dataset.n} exceeds {ctx.config.dot_max_width}")

    return summary.model_dump()
