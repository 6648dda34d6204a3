"""Tests for the command-line surface."""
import json

import pytest

from src.cli import main
from src.cli.commands import build_parser


def read_report(capsys) -> dict:
    return json.loads(capsys.readouterr().out)


class TestParser:
    def test_subcommand_required(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args([])

    def test_defaults(self):
        args = build_parser().parse_args(["stabilize"])
        assert args.instance == "ext-reals"
        assert args.depth == 24 and args.eps == 0.25
        assert args.format == "json" and args.out is None

    def test_rejects_unknown_engine(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["stabilize", "--engine", "spectral"])


class TestCheckAxioms:
    def test_passes(self, capsys):
        assert main(["check-axioms", "--instance", "ext-reals", "--sample-size", "60"]) == 0
        data = read_report(capsys)
        assert data["passed"] is True

    def test_unknown_instance(self, capsys):
        assert main(["check-axioms", "--instance", "reals"]) == 1
        data = read_report(capsys)
        assert data["status"] == "failure"
        assert data["failure"]["error"] == "invalid config"

    def test_writes_to_file(self, tmp_path, capsys):
        out = tmp_path / "axioms.json"
        argv = ["check-axioms", "--instance", "intervals", "--sample-size", "40", "--out", str(out)]
        assert main(argv) == 0
        assert capsys.readouterr().out == ""
        assert json.loads(out.read_text(encoding="utf-8"))["passed"] is True

    def test_csv_output(self, capsys):
        argv = ["check-axioms", "--instance", "intervals", "--sample-size", "30"]
        assert main(argv + ["--format", "csv"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "instance,law,passed,checked"
        assert len(lines) > 1
        assert all(line.startswith("intervals,") and ",True," in line for line in lines[1:])


class TestStabilize:
    def test_default_run(self, capsys):
        assert main(["stabilize", "--depth", "16"]) == 0
        data = read_report(capsys)
        assert data["status"] == "ok"
        assert data["config"]["v-scale"] == 1.0
        assert all(data["stabilization"]["verdicts"].values())

    def test_both_engines(self, capsys):
        argv = ["stabilize", "--instance", "vector-uc:2:sup", "--engine", "both", "--depth", "16"]
        assert main(argv) == 0
        data = read_report(capsys)
        assert "normed" in data and "cross_engine_gap" in data

    def test_violation_exit_code(self, capsys):
        argv = ["stabilize", "--noise", "adversarial-step", "--v-scale", "0.5", "--depth", "12"]
        assert main(argv) == 2
        assert read_report(capsys)["failure"]["error"] == "hypothesis violation"

    def test_invalid_flag_values(self, capsys):
        assert main(["stabilize", "--depth", "0"]) == 1
        assert read_report(capsys)["failure"]["error"] == "invalid config"

    def test_csv_output(self, capsys):
        assert main(["stabilize", "--depth", "8", "--format", "csv"]) == 0
        assert capsys.readouterr().out.startswith("engine,x,A_of_x")


class TestRun:
    def test_json_config(self, tmp_path, capsys):
        path = tmp_path / "experiment.json"
        path.write_text(
            json.dumps(
                {
                    "instance-name": "intervals",
                    "noise": {"magnitude": 0.25, "anchor-origin": True},
                    "depth": 16,
                }
            ),
            encoding="utf-8",
        )
        assert main(["run", "--config", str(path)]) == 0
        data = read_report(capsys)
        assert data["config"]["instance-name"] == "intervals"

    def test_infinite_origin(self, tmp_path, capsys):
        path = tmp_path / "experiment.toml"
        path.write_text("infinite-origin = true\ndepth = 12\n", encoding="utf-8")
        assert main(["run", "--config", str(path)]) == 2
        data = read_report(capsys)
        assert data["failure"]["error"] == "unbounded value"

    def test_bad_config(self, tmp_path, capsys):
        path = tmp_path / "experiment.json"
        path.write_text(json.dumps({"instance-name": "hilbert"}), encoding="utf-8")
        assert main(["run", "--config", str(path)]) == 1
        assert read_report(capsys)["exit_code"] == 1

    def test_missing_config(self, tmp_path, capsys):
        assert main(["run", "--config", str(tmp_path / "absent.toml")]) == 1


def test_log_file(tmp_path, capsys):
    log_file = tmp_path / "logs" / "conestab.log"
    argv = ["--log-file", str(log_file), "check-axioms", "--instance", "ext-reals"]
    assert main(argv + ["--sample-size", "20"]) == 0
    capsys.readouterr()
    text = log_file.read_text(encoding="utf-8")
    assert "conestab v1.0.0: check-axioms" in text
    assert " - INFO - " in text
