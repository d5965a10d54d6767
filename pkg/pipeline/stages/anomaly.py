"""Stage 4: One-class SVM anomaly detection."""

import logging
from typing import Any

import numpy as np
import pandas as pd

from core.storage import write_csv
from learn.kpca import KernelSpec
from learn.preprocessing import FeatureMatrix
from learn.sweep import evaluate_ocsvm, split_train_test
from pipeline.context import ExperimentContext

logger = logging.getLogger(__name__)


async def detect_anomalies(ctx: ExperimentContext) -> dict[str, Any]:
    """
    Train on the 1:1 half of the training split and flag 2:1 functions as outliers.

    The split shuffles each class with the first seed and halves it. Writes ocsvm.csv
    with one row per function in id order.

    Args:
        ctx: Experiment context with features sampled

    Returns:
        Dict with train/test F1 and the split sizes
    """
    dataset = ctx.require_dataset()
    config = ctx.config
    matrix = FeatureMatrix.from_features(ctx.features, dataset.labels, config.features)
    train, test = split_train_test(matrix.labels, config.base_seed)

    ev = await ctx.pool.run(
        evaluate_ocsvm,
        matrix,
        train,
        test,
        config.nu,
        KernelSpec(config.ocsvm_kernel),
        config.smo_tol,
        config.smo_max_iter,
    )
    scores = ev.model.decision_function(ev.model.stats.transform(matrix.rows))

    split = np.empty(len(matrix), dtype=object)
    split[train] = "train"
    split[test] = "test"
    predicted = np.empty(len(matrix), dtype=np.int64)
    predicted[train] = ev.train_predictions
    predicted[test] = ev.test_predictions

    frame = pd.DataFrame(
        {
            "function_id": matrix.ids,
            "label": matrix.labels,
            "split": split,
            "score": scores,
            "predicted": predicted,
        }
    )
    write_csv(
        ctx.output_dir / "ocsvm.csv",
        frame,
        ctx.header,
        footer={
            "rho": ev.model.rho,
            "level": ev.model.level,
            "degenerate": ev.model.degenerate,
            "smo_iterations": ev.model.iterations,
        },
    )
    if ev.model.degenerate:
        logger.warning("OCSVM weight vanished: origin is not separable from the 1:1 training features")
    logger.info(f"OCSVM: train F1 {ev.f1_train_inlier:.4f}, test F1 {ev.f1_test_inlier:.4f}")

    ctx.summary.update(
        {
            "f1_train": ev.f1_train_inlier,
            "f1_test": ev.f1_test_inlier,
            "f1_test_outlier": ev.f1_test_outlier,
            "train_ids": [matrix.ids[i] for i in train],
            "test_ids": [matrix.ids[i] for i in test],
            "nu": config.nu,
            "ocsvm_kernel": config.ocsvm_kernel,
            "ocsvm_degenerate": ev.model.degenerate,
        }
    )
    return {
        "f1_train": ev.f1_train_inlier,
        "f1_test": ev.f1_test_inlier,
        "train": int(train.size),
        "test": int(test.size),
    }
