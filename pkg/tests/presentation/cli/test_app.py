"""End-to-end command tests through Typer's CliRunner"""

import json

import numpy as np
import pytest
from freezegun import freeze_time
from typer.testing import CliRunner

from src.application.dtos.config import SchemaConfig
from src.infrastructure.persistence.psv_cohort import load_psv_cohort, read_partition
from src.presentation.cli.app import app
from src.presentation.cli.runtime import EXIT_IO, EXIT_VALIDATION

runner = CliRunner()

SMALL_COHORT = ["--patients", "40", "--n-dynamic", "4", "--n-static", "1", "--k-true", "2", "--t-min", "3", "--t-max", "5"]
TINY_TRAINING = ["--epochs", "2", "--k", "2", "--hidden-size", "3", "--embed-dim", "3", "--batch-size", "16", "--seed", "1"]
SWEEP_TRAINING = ["--epochs", "2", "--hidden-size", "3", "--embed-dim", "3"]


def _read(path):
    return json.loads(path.read_text())


@pytest.fixture
def generated(tmp_path):
    out = tmp_path / "gen"
    result = runner.invoke(app, ["gen-synthetic", "--out-dir", str(out), "--seed", "5", *SMALL_COHORT])
    assert result.exit_code == 0, result.output
    return out


@pytest.fixture
def trained(generated, tmp_path):
    out = tmp_path / "train"
    result = runner.invoke(app, ["train", str(generated / "cohort"), "--out-dir", str(out), *TINY_TRAINING])
    assert result.exit_code == 0, result.output
    return out


class TestGenSynthetic:
    @freeze_time("2026-01-15 12:00:00")
    def test_writes_cohort_sidecars_and_manifest(self, tmp_path):
        """
        GIVEN a small planted cohort request
        WHEN gen-synthetic runs
        THEN patient files, the schema, the planted partition and a manifest are written
        """
        # WHEN
        out = tmp_path / "gen"
        result = runner.invoke(app, ["gen-synthetic", "--out-dir", str(out), "--seed", "5", *SMALL_COHORT])

        # THEN
        assert result.exit_code == 0, result.output
        assert len(list((out / "cohort").glob("*.psv"))) == 40
        assert _read(out / "cohort" / "schema.json")["dynamic_columns"] == ["x00", "x01", "x02", "x03"]
        assert _read(out / "planted_partition.json")["groups"] == [["x00", "x01"], ["x02", "x03"]]
        assert _read(out / "statistics.json")["patients"] == 40
        manifest = _read(out / "manifest.json")
        assert manifest["command"] == "gen-synthetic"
        assert manifest["seed"] == 5
        assert manifest["created_at"].startswith("2026-01-15T12:00:00")
        assert set(manifest["outputs"]) == {"cohort", "cohort/schema.json", "planted_partition.json", "statistics.json"}

    def test_same_seed_same_files(self, tmp_path):
        for name in ("a", "b"):
            runner.invoke(app, ["gen-synthetic", "--out-dir", str(tmp_path / name), "--seed", "5", *SMALL_COHORT])
        assert _read(tmp_path / "a" / "manifest.json")["outputs"] == _read(tmp_path / "b" / "manifest.json")["outputs"]

    def test_noise_free_cohort_matches_its_sidecar(self, tmp_path):
        out = tmp_path / "gen"
        result = runner.invoke(app, ["gen-synthetic", "--out-dir", str(out), "--noise-std", "0", *SMALL_COHORT])
        assert result.exit_code == 0, result.output

        cohort = load_psv_cohort(out / "cohort", SchemaConfig(**_read(out / "cohort" / "schema.json")))
        planted = read_partition(_read(out / "planted_partition.json"), cohort.dynamic_names)

        for record in cohort.records:
            for group in planted.groups:
                np.testing.assert_allclose(np.corrcoef(record.dynamic[:, list(group)].T), 1.0, atol=1e-9)

    def test_zero_patients_is_a_validation_error(self, tmp_path):
        result = runner.invoke(app, ["gen-synthetic", "--out-dir", str(tmp_path), "--patients", "0"])
        assert result.exit_code == EXIT_VALIDATION


class TestStats:
    def test_reads_the_generated_cohort(self, generated):
        result = runner.invoke(app, ["stats", str(generated / "cohort")])
        assert result.exit_code == 0, result.output
        assert "# patients" in result.stdout

    def test_missing_schema(self, tmp_path):
        result = runner.invoke(app, ["stats", str(tmp_path)])
        assert result.exit_code == EXIT_VALIDATION

    def test_malformed_file_reports_validation_error(self, generated):
        (generated / "cohort" / "zzz.psv").write_text("x00|x01|x02|x03|s00|SepsisLabel\n1|2|oops|4|5|0\n")
        result = runner.invoke(app, ["stats", str(generated / "cohort")])
        assert result.exit_code == EXIT_VALIDATION


class TestTrainAndEvaluate:
    def test_train_writes_its_artifacts(self, trained):
        for name in ("checkpoint.json", "history.json", "split.json", "test_report.json", "test_report.txt"):
            assert (trained / name).exists()
        history = _read(trained / "history.json")
        assert history["k"] == 2
        assert len(history["epochs"]) == 2
        split = _read(trained / "split.json")
        assert len(split["train"]) + len(split["validation"]) + len(split["test"]) == 40
        manifest = _read(trained / "manifest.json")
        assert manifest["config"]["epochs"] == 2
        assert set(manifest["outputs"]) >= {"checkpoint.json", "test_report.json"}

    def test_config_file_is_overridden_by_flags(self, generated, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"epochs": 5, "patience": 3}))
        out = tmp_path / "run"
        result = runner.invoke(
            app, ["train", str(generated / "cohort"), "--config", str(config), "--out-dir", str(out), *TINY_TRAINING]
        )
        assert result.exit_code == 0, result.output
        resolved = _read(out / "manifest.json")["config"]
        assert resolved["epochs"] == 2
        assert resolved["patience"] == 3

    def test_evaluate_on_the_saved_test_split(self, generated, trained, tmp_path):
        out = tmp_path / "eval"
        result = runner.invoke(
            app,
            [
                "evaluate",
                str(trained / "checkpoint.json"),
                str(generated / "cohort"),
                "--split",
                str(trained / "split.json"),
                "--out-dir",
                str(out),
            ],
        )
        assert result.exit_code == 0, result.output
        evaluated = {m["name"]: m["value"] for m in _read(out / "report.json")["metrics"]}
        reported = {m["name"]: m["value"] for m in _read(trained / "test_report.json")["metrics"]}
        assert evaluated == pytest.approx(reported)
        inputs = _read(out / "manifest.json")["config"]["inputs"]
        assert inputs["schema"] == str(generated / "cohort" / "schema.json")
        assert inputs["split"] == str(trained / "split.json")

    def test_evaluate_missing_checkpoint(self, generated, tmp_path):
        result = runner.invoke(app, ["evaluate", str(tmp_path / "none.json"), str(generated / "cohort")])
        assert result.exit_code == EXIT_IO

    def test_missing_config_file_is_an_io_error(self, generated, tmp_path):
        result = runner.invoke(
            app, ["train", str(generated / "cohort"), "--config", str(tmp_path / "absent.json"), "--out-dir", str(tmp_path)]
        )
        assert result.exit_code == EXIT_IO

    def test_cluster_report_against_planted(self, generated, trained, tmp_path):
        out = tmp_path / "report"
        result = runner.invoke(
            app,
            [
                "cluster-report",
                str(trained / "checkpoint.json"),
                "--planted",
                str(generated / "planted_partition.json"),
                "--out-dir",
                str(out),
            ],
        )
        assert result.exit_code == 0, result.output
        report = _read(out / "cluster_report.json")
        assert report["k"] == 2
        assert "planted_ari" in report


class TestSweepK:
    def test_bad_ks(self, generated, tmp_path):
        result = runner.invoke(app, ["sweep-k", str(generated / "cohort"), "--ks", "2,x", "--out-dir", str(tmp_path)])
        assert result.exit_code == EXIT_VALIDATION

    def test_fixed_embedding_export(self, generated, tmp_path):
        out = tmp_path / "sweep"
        result = runner.invoke(
            app,
            ["sweep-k", str(generated / "cohort"), "--ks", "1,2,4", "--out-dir", str(out), *SWEEP_TRAINING],
        )
        assert result.exit_code == 0, result.output
        export = _read(out / "sweep.json")
        assert [b["k"] for b in export["blocks"]] == [1, 2, 4]
        assert len(export["transitions"]) == 2
