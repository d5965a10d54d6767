"""Pipeline stages module."""

from pipeline.stages import (
    generate,
    features,
    clustering,
    anomaly,
    sweep,
    topology,
    separation,
)

__all__ = [
    "generate",
    "features",
    "clustering",
    "anomaly",
    "sweep",
    "topology",
    "separation",
]
