"""Experiment orchestrator - coordinates the 7 stages."""

import logging
from pathlib import Path
from typing import Any

from config import ExperimentConfig
from core.errors import LabError
from core.schemas import PipelineSummary
from core.storage import write_json, write_schema
from pipeline.context import ExperimentContext
from pipeline.stages import (
    anomaly,
    clustering,
    features,
    generate,
    separation,
    sweep,
    topology,
)
from utils.worker_pool import WorkerPool

logger = logging.getLogger(__name__)

# Stages each command runs after loading the manifest
COMMAND_STAGES = {
    "pipeline": [2, 3, 4],
    "sweep": [5],
    "graph-report": [6],
    "simon": [7],
}


class ExperimentOrchestrator:
    """Orchestrates the 7-stage Simon-GQML experiment."""

    STAGES = {
        1: ("generate", "Generate or load the function dataset"),
        2: ("features", "Embed functions and sample observable features"),
        3: ("clustering", "Kernel PCA and k-means on all features"),
        4: ("anomaly", "One-class SVM on the 1:1 training half"),
        5: ("sweep", "F1 versus number of shots"),
        6: ("topology", "Functional-graph certificates"),
        7: ("separation", "Simon versus classical query counts"),
    }

    def __init__(self):
        self.results: dict[int, dict[str, Any]] = {}

    def context(self, config: ExperimentConfig, manifest: str | Path | None = None) -> ExperimentContext:
        """Build the shared stage context; the manifest defaults to <output_dir>/manifest.json."""
        manifest_path = Path(manifest) if manifest else Path(config.output_dir) / "manifest.json"
        return ExperimentContext(config=config, manifest_path=manifest_path, pool=WorkerPool(config.workers))

    async def run_stage(
        self,
        ctx: ExperimentContext,
        stage: int,
        **kwargs: Any,
    ) -> dict[str, Any]:
        """
        Run a specific experiment stage.

        Args:
            ctx: Shared stage context
            stage: Stage number (1-7)
            **kwargs: Stage-specific arguments

        Returns:
            Dict with stage results

        Raises:
            LabError: Re-raised so the CLI can exit with the error's code
        """
        if stage not in self.STAGES:
            return {"error": f"Invalid stage: {stage}"}

        stage_name, stage_desc = self.STAGES[stage]
        logger.info(f"Running Stage {stage}: {stage_name} - {stage_desc}")

        try:
            result = await self._execute_stage(ctx, stage, **kwargs)
            self.results[stage] = result
            logger.info(f"Stage {stage} complete: {result}")
            return result

        except LabError as e:
            logger.error(f"Stage {stage} failed: {e}")
            self.results[stage] = {"error": str(e), "exit_code": e.exit_code}
            raise

        except Exception as e:
            logger.error(f"Stage {stage} failed: {e}")
            result = {"error": str(e)}
            self.results[stage] = result
            return result

    async def _execute_stage(
        self,
        ctx: ExperimentContext,
        stage: int,
        **kwargs: Any,
    ) -> dict[str, Any]:
        """Execute the actual stage logic."""
        if stage == 1:
            if kwargs.get("create"):
                return await generate.generate_manifest(ctx)
            return await generate.load_manifest(ctx)

        elif stage == 2:
            return await features.embed_and_measure(ctx, dump_densities=kwargs.get("dump_densities", False))

        elif stage == 3:
            return await clustering.cluster_features(ctx)

        elif stage == 4:
            return await anomaly.detect_anomalies(ctx)

        elif stage == 5:
            return await sweep.sweep_shots(ctx)

        elif stage == 6:
            return await topology.graph_report(ctx, write_dot=kwargs.get("write_dot", False))

        elif stage == 7:
            return await separation.compare_queries(ctx, widths=kwargs.get("widths", True))

        return {"error": "Stage not implemented"}

    async def run_command(
        self,
        command: str,
        config: ExperimentConfig,
        manifest: str | Path | None = None,
        **kwargs: Any,
    ) -> dict[str, Any]:
        """
        Run one CLI command: load (or create) the manifest, then the command's stages.

        Args:
            command: "generate", "pipeline", "sweep", "graph-report" or "simon"
            config: Validated experiment config
            manifest: Manifest path (defaults under the output directory)
            **kwargs: Arguments passed to all stages

        Returns:
            Dict with results from all stages run
        """
        if command != "generate" and command not in COMMAND_STAGES:
            return {"error": f"Unknown command: {command}"}

        ctx = self.context(config, manifest)
        self.results = {}
        logger.info(f"Running command {command} with output in {ctx.output_dir}")

        await self.run_stage(ctx, 1, create=command == "generate")
        for stage in COMMAND_STAGES.get(command, []):
            result = await self.run_stage(ctx, stage, **kwargs)
            if result.get("error"):
                break

        output: dict[str, Any] = {"command": command, "results": dict(self.results)}
        if command == "pipeline" and not any(r.get("error") for r in self.results.values()):
            output["summary"] = self.write_summary(ctx)
        return output

    def write_summary(self, ctx: ExperimentContext) -> PipelineSummary:
        """Write summary.json and the schema it validates against."""
        summary = PipelineSummary(
            config=ctx.header,
            shots=ctx.config.shots,
            features=ctx.config.features,
            **ctx.summary,
        )
        write_json(ctx.output_dir / "summary.json", summary)
        write_schema(ctx.output_dir / "summary.schema.json", PipelineSummary)
        logger.info(f"Wrote summary to {ctx.output_dir / 'summary.json'}")
        return summary


# Global orchestrator instance
orchestrator = ExperimentOrchestrator()


async def run_experiment(
    command: str,
    config: ExperimentConfig,
    manifest: str | Path | None = None,
    **kwargs: Any,
) -> dict[str, Any]:
    """
    Convenience function to run one command on a fresh orchestrator.

    Args:
        command: CLI command name
        config: Validated experiment config
        manifest: Manifest path
        **kwargs: Stage-specific arguments

    Returns:
        Dict with command results
    """
    orch = ExperimentOrchestrator()
    return await orch.run_command(command, config, manifest, **kwargs)
