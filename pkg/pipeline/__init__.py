"""Pipeline module."""

from pipeline.orchestrator import ExperimentOrchestrator, orchestrator, run_experiment

__all__ = [
    "ExperimentOrchestrator",
    "orchestrator",
    "run_experiment",
]
