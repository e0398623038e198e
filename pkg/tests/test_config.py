from pathlib import Path

import pytest

from cuffless.config import (
    RunConfig,
    config_from_env,
    load_config_file,
    resolve_run_config,
)
from cuffless.exceptions import RunConfigError
from cuffless.ingest.quality import QualityThresholds
from cuffless.prompting import ContextLevel


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text(
        "alpha: 0.5\nfolds: 4\nendpoint-url: http://from-file/v1\ngrouping: appendixB\n",
        encoding="utf-8",
    )
    return path


class TestPrecedence:
    def test_defaults(self):
        config = resolve_run_config(environ={})
        assert config.alpha == 0.3
        assert config.folds == 5
        assert config.context is ContextLevel.BP_KNOWLEDGE_USER
        assert config.estimator == "zero"

    def test_environment(self):
        config = resolve_run_config(
            environ={"CUFFLESS_ALPHA": "0.6", "CUFFLESS_SEED": "9", "CUFFLESS_MODEL": "m"}
        )
        assert config.alpha == 0.6
        assert config.seed == 9
        assert config.model == "m"

    def test_file_beats_environment(self, config_file):
        config = resolve_run_config(
            config_file=config_file,
            environ={"CUFFLESS_ALPHA": "0.6", "CUFFLESS_ENDPOINT_URL": "http://env/v1"},
        )
        assert config.alpha == 0.5
        assert config.endpoint_url == "http://from-file/v1"
        assert config.grouping == "appendixB"
        assert config.config_file == config_file

    def test_flags_beat_everything(self, config_file):
        config = resolve_run_config(
            {"alpha": 0.9, "folds": None, "out": "runs/a"},
            config_file=config_file,
            environ={"CUFFLESS_ALPHA": "0.6"},
        )
        assert config.alpha == 0.9
        assert config.folds == 4
        assert config.out == Path("runs/a")

    def test_empty_environment_values_are_ignored(self):
        assert config_from_env({"CUFFLESS_ALPHA": "", "OTHER": "1"}) == {}


class TestValidation:
    @pytest.mark.parametrize(
        "flags,match",
        [
            ({"alpha": 1.2}, "alpha"),
            ({"estimator": "svr"}, "Unknown estimator"),
            ({"format": "parquet"}, "record format"),
            ({"sweep": "depth"}, "Unknown sweep"),
            ({"folds": 0}, "folds must be >= 1"),
            ({"context": "everything"}, "Unknown context level"),
            ({"grouping": "table2"}, "table2"),
            ({"loader_mode": "ignore"}, "loader_mode"),
            ({"max_clipped_fraction": 0.0}, "max_clipped_fraction"),
            ({"max_flatline_s": -1.0}, "max_flatline_s"),
            ({"flatline_tolerance": -1e-6}, "flatline_tolerance"),
            ({"min_beats": 0}, "min_beats"),
        ],
    )
    def test_invalid_values(self, flags, match):
        with pytest.raises(RunConfigError, match=match):
            resolve_run_config(flags, environ={})

    def test_uncoercible_environment_value(self):
        with pytest.raises(RunConfigError, match="Invalid value 'many' for 'folds'"):
            resolve_run_config(environ={"CUFFLESS_FOLDS": "many"})

    def test_unknown_flag(self):
        with pytest.raises(RunConfigError, match="Unknown configuration keys: colour"):
            resolve_run_config({"colour": "red"}, environ={})


class TestConfigFile:
    def test_missing(self, tmp_path):
        with pytest.raises(RunConfigError, match="does not exist"):
            load_config_file(tmp_path / "nope.yaml")

    def test_not_a_mapping(self, tmp_path):
        path = tmp_path / "list.yaml"
        path.write_text("- 1\n- 2\n")
        with pytest.raises(RunConfigError, match="must contain a mapping"):
            load_config_file(path)

    def test_unknown_keys(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("alpha: 0.1\nlearning_rate: 3\n")
        with pytest.raises(RunConfigError, match="unknown keys: learning_rate"):
            load_config_file(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.yaml"
        path.write_text("")
        assert load_config_file(path) == {}

    def test_nested_hyperparameters(self, tmp_path):
        path = tmp_path / "hyper.yaml"
        path.write_text("hyperparameters:\n  dtr_max_depth: 3\n")
        config = resolve_run_config(config_file=path, environ={})
        assert config.hyperparameters.dtr_max_depth == 3
        assert config.hyperparameters.adaboost_rounds == 50


class TestRunConfig:
    def test_fingerprint_ignores_output_location_and_jobs(self):
        base = RunConfig(alpha=0.4)
        assert base.fingerprint() == RunConfig(alpha=0.4, out=Path("x"), jobs=8).fingerprint()
        assert base.fingerprint() != RunConfig(alpha=0.5).fingerprint()

    def test_endpoint_needs_url_and_model(self):
        assert RunConfig(endpoint_url="http://h/v1").endpoint_config() is None
        endpoint = RunConfig(endpoint_url="http://h/v1", model="m", timeout_s=5.0)
        assert endpoint.endpoint_config().timeout_s == 5.0

    def test_token_is_not_in_the_plain_view(self, monkeypatch):
        monkeypatch.setenv("CUFFLESS_API_KEY", "sk-secret")
        data = resolve_run_config(environ=None).to_dict()
        assert "sk-secret" not in repr(data)
        assert data["api_key_env"] == "CUFFLESS_API_KEY"

    def test_experiment_config(self):
        config = RunConfig(alpha=0.2, folds=3, seed=4, split_unit="record")
        experiment = config.experiment_config()
        assert (experiment.alpha, experiment.k, experiment.seed) == (0.2, 3, 4)
        assert experiment.split_unit == "record"


class TestQualityThresholds:
    def test_defaults_match_the_screen(self):
        assert RunConfig().thresholds == QualityThresholds()

    def test_file_values(self, tmp_path):
        path = tmp_path / "quality.yaml"
        path.write_text(
            "max-flatline-s: 0.5\nmax_clipped_fraction: 0.05\nflatline-tolerance: 1.0e-6\n"
        )
        thresholds = resolve_run_config(config_file=path, environ={}).thresholds
        assert thresholds.max_flatline_s == 0.5
        assert thresholds.max_clipped_fraction == 0.05
        assert thresholds.flatline_tolerance == 1e-6

    def test_environment_values(self):
        thresholds = resolve_run_config(
            environ={
                "CUFFLESS_MIN_BEATS": "20",
                "CUFFLESS_MAX_FLATLINE_S": "1.5",
                "CUFFLESS_MAX_CLIPPED_FRACTION": "0.02",
                "CUFFLESS_FLATLINE_TOLERANCE": "0.001",
            }
        ).thresholds
        assert thresholds == QualityThresholds(
            min_beats=20,
            max_flatline_s=1.5,
            max_clipped_fraction=0.02,
            flatline_tolerance=0.001,
        )

    def test_flags_beat_environment(self):
        config = resolve_run_config(
            {"max_clipped_fraction": 0.2},
            environ={"CUFFLESS_MAX_CLIPPED_FRACTION": "0.02"},
        )
        assert config.thresholds.max_clipped_fraction == 0.2

    def test_thresholds_change_the_fingerprint(self):
        assert (
            RunConfig().fingerprint() != RunConfig(max_flatline_s=3.0).fingerprint()
        )
