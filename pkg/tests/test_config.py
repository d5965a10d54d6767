import pytest

from config import ExperimentConfig, Settings, load_settings
from core.errors import ConfigError
from main import build_config, parse_ints


class TestSettings:
    def test_defaults(self):
        config = Settings().to_experiment()
        assert (config.n, config.m, config.shots) == (6, 120, 5000)
        assert config.seeds == [42, 43, 44, 45, 46]
        assert config.nu == 0.02
        assert config.shot_grid == [10, 50, 100, 500, 1000, 5000]

    def test_env_prefix(self, monkeypatch):
        monkeypatch.setenv("SIMONLAB_DATASET__N", "5")
        monkeypatch.setenv("SIMONLAB_LEARN__NU", "0.1")
        settings = load_settings()
        assert settings.dataset.n == 5
        assert settings.learn.nu == 0.1

    def test_toml_file(self, tmp_path):
        path = tmp_path / "lab.toml"
        path.write_text('[dataset]\nn = 4\nm = 16\n\n[learn]\nocsvm_kernel = "rbf"\n', encoding="utf-8")
        config = load_settings(path).to_experiment()
        assert (config.n, config.m, config.ocsvm_kernel) == (4, 16, "rbf")

    def test_tuning_values_reach_experiment(self, tmp_path):
        path = tmp_path / "tuning.toml"
        path.write_text(
            "[dataset]\nmax_retries = 50\n\n[learn]\nsmo_tol = 1e-8\nkmeans_restarts = 3\n\n"
            "[graphs]\nvisualization_size = 16\ndot_max_width = 4\n",
            encoding="utf-8",
        )
        config = load_settings(path).to_experiment()
        assert (config.max_retries, config.smo_tol, config.kmeans_restarts) == (50, 1e-8, 3)
        assert (config.visualization_size, config.dot_max_width) == (16, 4)
        header = config.header()
        assert header["smo_tol"] == 1e-8
        assert header["visualization_size"] == 16

    def test_unreadable_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_settings(tmp_path / "missing.toml")

    def test_malformed_toml(self, tmp_path):
        path = tmp_path / "bad.toml"
        path.write_text("[dataset\nn = ", encoding="utf-8")
        with pytest.raises(ConfigError):
            load_settings(path)

    def test_invalid_section_value(self, tmp_path):
        path = tmp_path / "odd.toml"
        path.write_text("[dataset]\nm = 15\n", encoding="utf-8")
        with pytest.raises(ConfigError):
            load_settings(path)

    def test_none_overrides_ignored(self):
        config = Settings().to_experiment(n=None, shots=300)
        assert config.n == 6
        assert config.shots == 300


class TestExperimentConfig:
    @pytest.mark.parametrize(
        "overrides",
        [
            {"n": 0},
            {"n": 17},
            {"m": 7},
            {"shots": 1},
            {"nu": 0.0},
            {"nu": 1.5},
            {"mode": "random"},
            {"ocsvm_kernel": "poly"},
            {"features": "skew"},
            {"shot_grid": [100, 10]},
            {"seeds": []},
            {"n": 10, "max_queries": 5},
            {"smo_tol": 0.0},
            {"kmeans_restarts": 0},
            {"visualization_size": 1},
        ],
    )
    def test_rejected(self, overrides):
        with pytest.raises(ConfigError):
            Settings().to_experiment(**overrides)

    def test_header_is_plain_data(self, small_config):
        header = small_config.header()
        assert header["n"] == 4
        assert header["seeds"] == [7, 8]
        assert isinstance(header["output_dir"], str)

    def test_base_seed(self):
        assert ExperimentConfig(seeds=[9, 10]).base_seed == 9


class TestFlagParsing:
    def test_parse_ints(self):
        assert parse_ints("10, 50,100", "--shot-grid") == [10, 50, 100]
        assert parse_ints(None, "--shot-grid") is None

    def test_parse_ints_rejects_text(self):
        with pytest.raises(ConfigError):
            parse_ints("10,lots", "--shot-grid")

    def test_seed_range(self):
        config = build_config(None, seed=10, num_seeds=3)
        assert config.seeds == [10, 11, 12]

    def test_seed_alone_keeps_count(self):
        assert build_config(None, seed=100).seeds == [100, 101, 102, 103, 104]

    def test_zero_seeds(self):
        with pytest.raises(ConfigError):
            build_config(None, num_seeds=0)

    def test_widths_flag(self):
        assert build_config(None, widths="3,5").widths == [3, 5]
