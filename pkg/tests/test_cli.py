import json

import numpy as np
import pandas as pd
import pytest

from entcomm.cli.main import main, parse_arguments
from entcomm.cli.records import ExperimentRecord, ExperimentRecorder
from entcomm.cli.report import MISSING, render, report
from entcomm.cli.schema import load_schema
from entcomm.qcore.serialization import state_to_json

EXPERIMENTS = [
    "rac",
    "graph",
    "pair",
    "chaturvedi",
    "tilted",
    "scenario313",
    "scenario314",
    "discriminate",
    "verify-appendix",
    "sweep-theta",
]


def _only_record(base, experiment):
    paths = sorted((base / experiment).glob("*/record.json"))
    assert len(paths) == 1
    return ExperimentRecord.load(paths[0])


class TestSchema:
    def test_regime_columns(self):
        assert load_schema().columns("regimes") == [
            "regime",
            "success",
            "distinguishability",
            "certified",
        ]

    def test_sweep_columns(self):
        assert load_schema().columns("sweep") == [
            "theta",
            "S_C",
            "S_EACC",
            "S_EACC_restricted",
            "S_closed_form",
            "D_EACC",
            "advantage",
        ]

    @pytest.mark.parametrize("experiment", EXPERIMENTS)
    def test_every_experiment_has_a_table(self, experiment):
        assert load_schema().table_for(experiment)

    def test_unknown_experiment(self):
        with pytest.raises(KeyError):
            load_schema().table_for("teleport")

    def test_fixed_columns_are_enforced(self):
        with pytest.raises(ValueError):
            load_schema().check("ensemble", pd.DataFrame(columns=["x", "weight"]))

    def test_vertex_columns_follow_the_pattern(self):
        schema = load_schema()
        schema.check("vertices", pd.DataFrame(columns=["p(1|1)", "p(2|1)", "D"]))
        with pytest.raises(ValueError):
            schema.check("vertices", pd.DataFrame(columns=["p(1|1)", "q", "D"]))


class TestRecords:
    def test_ratios(self):
        record = ExperimentRecord(
            "rac",
            {},
            classical_distinguishability=0.6,
            eacc_distinguishability=0.5,
            eacc_success=2.0,
            classical_success=1.6,
        )
        assert record.distinguishability_ratio == pytest.approx(1.2)
        assert record.success_ratio == pytest.approx(1.25)

    def test_missing_values_give_no_ratio(self):
        record = ExperimentRecord("graph", {}, eacc_distinguishability=0.0)
        assert record.distinguishability_ratio is None
        assert record.success_ratio is None

    def test_json_round_trip(self, tmp_path):
        record = ExperimentRecord(
            "tilted",
            {"theta": 1.0},
            values={"C": {"S": 2.7, "D": 0.5}},
            classical_distinguishability=0.55,
            eacc_distinguishability=0.5,
            notes=["note"],
        )
        path = tmp_path / "record.json"
        path.write_text(json.dumps(record.to_json()))
        back = ExperimentRecord.load(path)
        assert back == record
        assert back.quantity("C.S") == 2.7
        assert back.quantity("QC.S") is None

    def test_recorder_never_overwrites(self, tmp_path):
        recorder = ExperimentRecorder(tmp_path)
        frame = pd.DataFrame(
            [{"x": 1, "weight": 1.0, "success_probability": 1.0}]
        )
        first = recorder.save(ExperimentRecord("discriminate", {}), frame)
        second = recorder.save(ExperimentRecord("discriminate", {}), frame)
        assert first != second
        metadata = json.loads((tmp_path / "metadata.json").read_text())
        assert len(metadata["runs"]) == 2

    def test_recorder_reports_bad_tables(self, tmp_path):
        recorder = ExperimentRecorder(tmp_path)
        run_dir = recorder.save(ExperimentRecord("discriminate", {}), pd.DataFrame({"a": [1]}))
        assert run_dir is None


class TestReport:
    def test_target_row(self):
        record = ExperimentRecord(
            "rac",
            {"n": 3},
            classical_distinguishability=2 * (np.sqrt(3) - 1) / 4,
            eacc_distinguishability=0.25,
            targets={"distinguishability_ratio": 2 * (np.sqrt(3) - 1)},
        )
        frame = report([record])
        row = frame.iloc[0]
        assert row["target"] == "1.464102"
        assert row["status"] == "pass"

    def test_minimum_row_flags_a_miss(self):
        record = ExperimentRecord(
            "pair",
            {"n": 3},
            classical_distinguishability=0.3,
            eacc_distinguishability=0.5,
            minimums={"distinguishability_ratio": 1.0},
        )
        assert report([record]).iloc[0]["status"] == "flag"

    def test_record_without_targets(self):
        frame = report([ExperimentRecord("graph", {})])
        row = frame.iloc[0]
        assert row["value"] == MISSING and row["status"] == MISSING

    def test_render_carries_the_external_note(self):
        text = render(report([ExperimentRecord("graph", {})]))
        assert "NPA" in text

    def test_empty_report(self):
        with pytest.raises(ValueError):
            report([])


class TestMain:
    def test_defaults(self):
        args = parse_arguments(["sweep-theta"])
        assert args.points == 25
        assert args.theta_min == pytest.approx(0.15)
        assert args.seed == 0

    def test_rac_run(self, tmp_path, capsys):
        assert main(["--output-dir", str(tmp_path), "rac", "--n", "2"]) == 0
        record = _only_record(tmp_path, "rac")
        assert record.distinguishability_ratio == pytest.approx(np.sqrt(2), abs=1e-6)
        assert record.values["EACC"]["D"] == pytest.approx(0.5, abs=1e-6)
        assert any((tmp_path / "rac").glob("*/protocol.json"))
        frame = pd.read_csv(record.artifacts["data"])
        assert list(frame["regime"]) == ["C", "QC", "EACC"]
        assert "pass" in capsys.readouterr().out

    def test_reruns_write_identical_records(self, tmp_path):
        for _ in range(2):
            assert main(["--output-dir", str(tmp_path), "rac", "--n", "2"]) == 0
        first, second = sorted((tmp_path / "rac").iterdir())
        assert (first / "record.json").read_bytes() == (second / "record.json").read_bytes()
        stored = json.loads((first / "record.json").read_text())
        assert "wall_time" not in stored and "artifacts" not in stored
        run = json.loads((first / "run.json").read_text())
        assert run["wall_time"] > 0
        assert ExperimentRecord.load(first / "record.json").artifacts == run["artifacts"]

    def test_discriminate_run(self, tmp_path, trine):
        ensemble = tmp_path / "trine.json"
        ensemble.write_text(
            json.dumps({"states": [state_to_json(s) for s in trine], "expected": 2 / 3})
        )
        code = main(["--output-dir", str(tmp_path / "out"), "discriminate", "--ensemble", str(ensemble)])
        assert code == 0
        record = _only_record(tmp_path / "out", "discriminate")
        assert record.values["ensemble"]["value"] == pytest.approx(2 / 3, abs=1e-7)
        assert record.targets["ensemble.value"] == pytest.approx(2 / 3)

    def test_invalid_input_exits_with_2(self, tmp_path, capsys):
        assert main(["--output-dir", str(tmp_path), "rac", "--n", "5"]) == 2
        err = capsys.readouterr().err.strip().splitlines()[-1]
        assert json.loads(err)["error"] == "ValueError"
        assert not (tmp_path / "rac").exists()

    def test_missing_ensemble_file(self, tmp_path):
        code = main(["--output-dir", str(tmp_path), "discriminate", "--ensemble", str(tmp_path / "nope.json")])
        assert code == 2

    def test_report_command(self, tmp_path, capsys):
        main(["--output-dir", str(tmp_path), "rac", "--n", "3"])
        path = next((tmp_path / "rac").glob("*/record.json"))
        summary = tmp_path / "summary.csv"
        capsys.readouterr()
        assert main(["report", str(path), "--csv", str(summary)]) == 0
        assert "1.464102" in capsys.readouterr().out
        assert list(pd.read_csv(summary).columns) == [
            "experiment",
            "quantity",
            "value",
            "target",
            "deviation",
            "status",
        ]
