import asyncio

import pytest

from core.errors import DataError
from pipeline.orchestrator import COMMAND_STAGES, ExperimentOrchestrator, run_experiment
from pipeline.stages.topology import visualization_set
from utils.worker_pool import WorkerPool


def run(coro):
    return asyncio.run(coro)


class TestOrchestrator:
    def test_stage_table(self):
        assert sorted(ExperimentOrchestrator.STAGES) == list(range(1, 8))
        assert all(set(stages) <= set(range(2, 8)) for stages in COMMAND_STAGES.values())

    def test_unknown_command(self, small_config):
        result = run(run_experiment("deploy", small_config))
        assert "error" in result

    def test_invalid_stage(self, small_config):
        orch = ExperimentOrchestrator()
        ctx = orch.context(small_config)
        assert run(orch.run_stage(ctx, 9)) == {"error": "Invalid stage: 9"}

    def test_stage_without_dataset_records_error(self, small_config):
        orch = ExperimentOrchestrator()
        ctx = orch.context(small_config)
        result = run(orch.run_stage(ctx, 2))
        assert "error" in result
        assert orch.results[2] is result

    def test_missing_manifest_raises(self, small_config):
        orch = ExperimentOrchestrator()
        with pytest.raises(DataError):
            run(orch.run_command("pipeline", small_config))
        assert orch.results[1]["exit_code"] == 3

    def test_generate_then_pipeline(self, small_config, tmp_path):
        manifest = tmp_path / "m.json"
        generated = run(run_experiment("generate", small_config, manifest))
        assert generated["results"][1]["functions"] == 16
        result = run(run_experiment("pipeline", small_config, manifest))
        assert set(result["results"]) == {1, 2, 3, 4}
        assert result["summary"].n_functions == 16
        assert result["summary"].config == small_config.header()

    def test_graph_settings_come_from_config(self, small_config, tmp_path):
        manifest = tmp_path / "m.json"
        run(run_experiment("generate", small_config, manifest))
        config = small_config.model_copy(update={"visualization_size": 4})
        result = run(run_experiment("graph-report", config, manifest, write_dot=True))
        assert "error" not in result["results"][6]
        assert len(list((tmp_path / "out" / "graphs").glob("f*.dot"))) == 4

    def test_dot_width_cap_from_config(self, small_config, tmp_path):
        manifest = tmp_path / "m.json"
        run(run_experiment("generate", small_config, manifest))
        config = small_config.model_copy(update={"dot_max_width": 3})
        run(run_experiment("graph-report", config, manifest, write_dot=True))
        assert not (tmp_path / "out" / "graphs").exists()

    def test_default_manifest_location(self, small_config):
        ctx = ExperimentOrchestrator().context(small_config)
        assert ctx.manifest_path == ctx.output_dir / "manifest.json"


class TestVisualizationSet:
    def test_balanced_prefix(self, small_dataset):
        viz = visualization_set(list(small_dataset.entries), 6)
        assert [e.label for e in viz] == [0, 0, 0, 1, 1, 1]


class TestWorkerPool:
    def test_map_ordered_keeps_order(self):
        pool = WorkerPool(4)
        assert run(pool.map_ordered(lambda x: x * x, list(range(20)))) == [x * x for x in range(20)]

    def test_run(self):
        assert run(WorkerPool(1).run(max, 3, 7)) == 7
