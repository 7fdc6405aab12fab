import json

import pytest

from driftlab.cli import main


@pytest.fixture(scope="module")
def scenario_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "scen1.tsv"
    assert main(["generate", "--scenario", "I", "--seed", "7",
                 "--length", "1200", "--out", str(path)]) == 0
    return path


class TestGenerate:
    def test_writes_stream_file_and_plot(self, tmp_path):
        out = tmp_path / "s3.tsv"
        code = main(["generate", "--scenario", "III", "--seed", "1",
                     "--length", "800", "--out", str(out), "--plot"])
        assert code == 0
        assert out.exists()
        assert out.with_suffix(".png").exists()

    def test_bad_scenario_is_usage_error(self, tmp_path):
        code = main(["generate", "--scenario", "X", "--seed", "1",
                     "--out", str(tmp_path / "x.tsv")])
        assert code == 2


class TestRun:
    def test_end_to_end_with_reports_and_figure(self, scenario_file, tmp_path):
        out = tmp_path / "run"
        code = main(["run", "--data", str(scenario_file), "--seed", "7",
                     "--batch-size", "100", "--out", str(out), "--snapshot"])
        assert code == 0
        report = json.loads((out / "report.json").read_text())
        assert report["seed"] == 7
        assert report["config"]["batch_size"] == 100
        assert 0 <= report["metrics"]["annotation_effort"] <= 1
        log_lines = (out / "decisions.jsonl").read_text().splitlines()
        header = json.loads(log_lines[0])
        assert header["type"] == "header"
        assert header["seed"] == 7   # provenance embedded in the log file too
        assert len(log_lines) == 1 + sum(s["N"] for s in report["slots"])
        assert (out / "run.png").exists()
        assert (out / "model.json").exists()

    def test_same_seed_byte_identical(self, scenario_file, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        for out in (a, b):
            assert main(["run", "--data", str(scenario_file), "--seed", "11",
                         "--batch-size", "100", "--out", str(out)]) == 0
        assert (a / "report.json").read_bytes() == (b / "report.json").read_bytes()
        assert (a / "decisions.jsonl").read_bytes() == (b / "decisions.jsonl").read_bytes()

    def test_missing_seed_is_usage_error(self, scenario_file, tmp_path):
        code = main(["run", "--data", str(scenario_file),
                     "--out", str(tmp_path / "r")])
        assert code == 2

    def test_missing_config_file_is_usage_error(self, scenario_file, tmp_path):
        code = main(["run", "--data", str(scenario_file), "--seed", "1",
                     "--config", str(tmp_path / "nope.json"),
                     "--out", str(tmp_path / "r")])
        assert code == 2

    def test_invalid_config_value_is_usage_error(self, scenario_file, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text('{"threshold": 7.5}')
        code = main(["run", "--data", str(scenario_file), "--seed", "1",
                     "--config", str(cfg), "--out", str(tmp_path / "r")])
        assert code == 2

    def test_unknown_config_field_is_usage_error(self, scenario_file, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text('{"thresold": 0.9}')
        code = main(["run", "--data", str(scenario_file), "--seed", "1",
                     "--config", str(cfg), "--out", str(tmp_path / "r")])
        assert code == 2

    def test_config_file_with_flag_overrides(self, scenario_file, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"threshold": 0.7, "batch_size": 100}))
        out = tmp_path / "r"
        code = main(["run", "--data", str(scenario_file), "--seed", "1",
                     "--config", str(cfg), "--threshold", "0.9",
                     "--out", str(out)])
        assert code == 0
        report = json.loads((out / "report.json").read_text())
        assert report["config"]["threshold"] == 0.9
        assert report["config"]["batch_size"] == 100


class TestBaselineCommand:
    @pytest.mark.parametrize("strategy", ["passive", "evenodd", "unwise"])
    def test_strategies_run(self, scenario_file, tmp_path, strategy):
        out = tmp_path / strategy
        code = main(["baseline", "--strategy", strategy,
                     "--data", str(scenario_file), "--batch-size", "100",
                     "--seed", "0", "--out", str(out)])
        assert code == 0
        assert (out / "report.json").exists()


class TestSweepCommands:
    def test_threshold_sweep_outputs(self, scenario_file, tmp_path):
        out = tmp_path / "sweep"
        code = main(["sweep", "threshold", "--data", str(scenario_file),
                     "--seed", "3", "--batch-size", "100",
                     "--grid", "0.9,1.0", "--seeds", "2", "--out", str(out)])
        assert code == 0
        for name in ("sweep_points.csv", "sweep_curve.csv", "plotdata.csv",
                     "sweep.png", "sweep_meta.json"):
            assert (out / name).exists(), name
        lines = (out / "sweep_points.csv").read_text().strip().splitlines()
        assert len(lines) == 1 + 2 * 2

    def test_batchsize_sweep_outputs(self, scenario_file, tmp_path):
        out = tmp_path / "bsweep"
        code = main(["sweep", "batchsize", "--data", str(scenario_file),
                     "--seed", "3", "--points", "4", "--seeds", "1",
                     "--out", str(out)])
        assert code == 0
        assert (out / "batchsize.csv").exists()
        assert (out / "batchsize.png").exists()
        meta = json.loads((out / "batchsize_meta.json").read_text())
        assert meta["best_batch_size"] >= 1


class TestPcaCommand:
    def test_fit_and_apply(self, scenario_file, tmp_path):
        model = tmp_path / "proj.json"
        out = tmp_path / "projected.tsv"
        assert main(["pca", "fit", "--data", str(scenario_file),
                     "--model", str(model), "--q", "2"]) == 0
        assert main(["pca", "apply", "--data", str(scenario_file),
                     "--model", str(model), "--out", str(out)]) == 0
        assert out.exists()

    def test_apply_without_out_is_usage_error(self, scenario_file, tmp_path):
        model = tmp_path / "proj.json"
        main(["pca", "fit", "--data", str(scenario_file), "--model", str(model),
              "--q", "2"])
        assert main(["pca", "apply", "--data", str(scenario_file),
                     "--model", str(model)]) == 2


class TestUsage:
    def test_unknown_command(self):
        assert main(["frobnicate"]) == 2

    def test_unknown_flag(self, scenario_file):
        assert main(["run", "--data", str(scenario_file), "--seed", "1",
                     "--wat", "x", "--out", "y"]) == 2
