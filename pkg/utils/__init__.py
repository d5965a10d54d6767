"""Utility modules for the experiment pipeline."""

from utils.query_tracker import (
    QueryBudgetExhausted,
    QueryMethod,
    QueryTracker,
)
from utils.worker_pool import WorkerPool

__all__ = [
    # Oracle accounting
    "QueryTracker",
    "QueryMethod",
    "QueryBudgetExhausted",
    # Concurrency
    "WorkerPool",
]
