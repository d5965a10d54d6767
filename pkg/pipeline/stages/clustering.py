"""Stage 3: Kernel PCA projection and k-means clustering."""

import logging
from typing import Any

import numpy as np
import pandas as pd

from core.errors import DegenerateKernel
from core.storage import write_csv
from learn.kmeans import kmeans_cluster
from learn.kpca import KernelSpec, kpca_project
from learn.metrics import best_relabel_agreement, separation_margin
from learn.preprocessing import FeatureMatrix, Standardization
from pipeline.context import ExperimentContext

logger = logging.getLogger(__name__)


async def cluster_features(ctx: ExperimentContext) -> dict[str, Any]:
    """
    Unsupervised view of all features: kPCA coordinates and a 2-means partition.

    Both learners see every function, standardized with statistics of the whole set;
    labels are used only to score the result. Writes kpca.csv and kmeans.csv.

    Args:
        ctx: Experiment context with features sampled

    Returns:
        Dict with cluster agreement, inertia, and kPCA margin
    """
    dataset = ctx.require_dataset()
    config = ctx.config
    matrix = FeatureMatrix.from_features(ctx.features, dataset.labels, config.features)
    X = Standardization.fit(matrix.rows).transform(matrix.rows)
    truth = matrix.labels

    margin: float | None = None
    try:
        projection = await ctx.pool.run(kpca_project, X, KernelSpec(config.kpca_kernel), 2)
        coords = projection.coords
        margin = separation_margin(coords[:, 0], truth)
        logger.info(f"kPCA leading eigenvalues {projection.eigenvalues.round(6).tolist()}, margin {margin:.4g}")
    except DegenerateKernel as e:
        logger.warning(f"kPCA skipped: {e}")
        coords = np.zeros((len(matrix), 2))

    kpca_frame = pd.DataFrame(
        {"function_id": matrix.ids, "label": truth, "coord1": coords[:, 0], "coord2": coords[:, 1]}
    )
    write_csv(ctx.output_dir / "kpca.csv", kpca_frame, ctx.header)

    rng = np.random.default_rng(config.base_seed)
    clusters = await ctx.pool.run(
        kmeans_cluster,
        X,
        2,
        config.kmeans_restarts,
        rng,
        config.max_lloyd_iter,
    )
    agreement = best_relabel_agreement(clusters.assignments, truth)
    kmeans_frame = pd.DataFrame({"function_id": matrix.ids, "label": truth, "cluster": clusters.assignments})
    write_csv(ctx.output_dir / "kmeans.csv", kmeans_frame, ctx.header, footer={"agreement": agreement})

    ctx.summary.update(
        {
            "kmeans_agreement": agreement,
            "kmeans_inertia": clusters.inertia,
            "kpca_margin": margin,
        }
    )
    return {"kmeans_agreement": agreement, "kmeans_inertia": clusters.inertia, "kpca_margin": margin}
