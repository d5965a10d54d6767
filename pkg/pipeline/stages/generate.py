"""Stage 1: Dataset generation and manifest loading."""

import logging
from typing import Any

from core.boolfn import gen_dataset
from core.models import FunctionKind
from core.storage import read_manifest, write_manifest
from pipeline.context import ExperimentContext

logger = logging.getLogger(__name__)


async def generate_manifest(ctx: ExperimentContext) -> dict[str, Any]:
    """
    Draw the balanced dataset and write its manifest.

    The dataset is seeded with the first configured seed, so reruns with the same
    config write byte-identical manifests.

    Args:
        ctx: Experiment context; ctx.dataset is set on return

    Returns:
        Dict with manifest path and class counts
    """
    config = ctx.config
    dataset = await ctx.pool.run(
        gen_dataset, config.n, config.m, config.base_seed, config.mode, config.max_retries
    )
    write_manifest(ctx.manifest_path, dataset, ctx.header)
    ctx.dataset = dataset
    return _describe(ctx)


async def load_manifest(ctx: ExperimentContext) -> dict[str, Any]:
    """
    Read an existing manifest, re-deriving every class.

    Raises:
        DataError: If the manifest is missing or malformed
        ManifestMismatch: If its width differs from the configured n
    """
    ctx.dataset = read_manifest(ctx.manifest_path, expected_n=ctx.config.n)
    logger.info(f"Loaded {len(ctx.dataset)} functions from {ctx.manifest_path}")
    return _describe(ctx)


def _describe(ctx: ExperimentContext) -> dict[str, Any]:
    dataset = ctx.require_dataset()
    return {
        "manifest": str(ctx.manifest_path),
        "n": dataset.n,
        "functions": len(dataset),
        "one_to_one": len(dataset.by_kind(FunctionKind.ONE_TO_ONE)),
        "two_to_one": len(dataset.by_kind(FunctionKind.TWO_TO_ONE)),
    }
