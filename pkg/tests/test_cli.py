import json
from pathlib import Path

import pytest

from creativemdp.cli import main
from creativemdp.run import RunRecord

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def fixture(name):
    return str(FIXTURES / name)


def write_json(path, payload):
    path.write_text(json.dumps(payload) + "\n")
    return str(path)


@pytest.fixture
def chain2_files():
    return {
        "mdp": fixture("chain2.mdp.json"),
        "policy": fixture("chain2.policy.json"),
        "values": fixture("chain2.values.json"),
    }


class TestValidate:
    def test_valid_files_exit_zero(self, chain2_files, capsys):
        code = main(
            [
                "validate",
                "--mdp",
                chain2_files["mdp"],
                "--policy",
                chain2_files["policy"],
                "--values",
                chain2_files["values"],
            ]
        )
        assert code == 0
        assert "ok" in capsys.readouterr().out

    def test_row_sum_violation_exit_one_names_index(self, chain2_files, tmp_path, capsys):
        payload = json.load(open(chain2_files["mdp"]))
        payload["transitions"]["a0"]["s0"] = [0.5, 0.4]
        bad = write_json(tmp_path / "bad.json", payload)
        assert main(["validate", "--mdp", bad]) == 1
        assert "(a0,s0)" in capsys.readouterr().out

    def test_missing_file_exit_two(self, tmp_path, capsys):
        assert main(["validate", "--mdp", str(tmp_path / "absent.json")]) == 2

    def test_malformed_json_exit_one(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        assert main(["validate", "--mdp", str(path)]) == 1


class TestAnalyze:
    def test_summary_line(self, chain2_files, tmp_path, capsys):
        out = tmp_path / "report.json"
        code = main(
            [
                "analyze",
                "--mdp",
                chain2_files["mdp"],
                "--policy",
                chain2_files["policy"],
                "--values",
                chain2_files["values"],
                "--mapping",
                "sas",
                "--alpha",
                "0.5",
                "--beta",
                "0.5",
                "--out",
                str(out),
            ]
        )
        assert code == 0
        summary = capsys.readouterr().out.strip().splitlines()[-1]
        assert "mapping=sas" in summary and "C=2" in summary
        report = json.loads(out.read_text())
        assert report["schema"] == "creativemdp.report/1"

    def test_alpha_one_state_mapping_conceptually_uninspired(self, chain2_files, capsys):
        code = main(
            [
                "analyze",
                "--mdp",
                chain2_files["mdp"],
                "--policy",
                chain2_files["policy"],
                "--values",
                chain2_files["values"],
                "--mapping",
                "s",
                "--alpha",
                "1.0",
            ]
        )
        assert code == 0
        out = capsys.readouterr().out
        summary = out.strip().splitlines()[-1]
        assert "C=0" in summary
        assert "conceptual" in summary

    def test_text_and_json_agree_field_for_field(self, chain2_files, tmp_path, capsys):
        args = [
            "analyze",
            "--mdp",
            chain2_files["mdp"],
            "--policy",
            chain2_files["policy"],
            "--values",
            chain2_files["values"],
            "--mapping",
            "sas",
            "--alpha",
            "0.5",
        ]
        as_json = tmp_path / "r.json"
        as_text = tmp_path / "r.txt"
        assert main(args + ["--out", str(as_json), "--format", "json"]) == 0
        assert main(args + ["--out", str(as_text), "--format", "text"]) == 0

        def leaves(value, prefix=""):
            if isinstance(value, dict):
                for k in value:
                    yield from leaves(value[k], f"{prefix}.{k}" if prefix else k)
            elif isinstance(value, list):
                for i, item in enumerate(value):
                    yield from leaves(item, f"{prefix}[{i}]")
            else:
                yield f"{prefix} = {json.dumps(value)}"

        expected = sorted(leaves(json.loads(as_json.read_text())))
        got = sorted(line for line in as_text.read_text().splitlines() if line)
        assert got == expected

    def test_analyze_requires_inputs(self, capsys):
        assert main(["analyze", "--mapping", "sas"]) == 1

    def test_run_file_analysis(self, chain2_files, tmp_path, capsys):
        run_path = tmp_path / "run.json"
        assert (
            main(
                [
                    "learn",
                    "--mdp",
                    chain2_files["mdp"],
                    "--episodes",
                    "10",
                    "--seed",
                    "3",
                    "--out",
                    str(run_path),
                ]
            )
            == 0
        )
        code = main(
            ["analyze", "--run", str(run_path), "--mapping", "sas", "--alpha", "0.5"]
        )
        assert code == 0


class TestLearn:
    def test_seeded_runs_byte_identical(self, chain2_files, tmp_path, capsys):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        args = [
            "learn",
            "--mdp",
            chain2_files["mdp"],
            "--episodes",
            "15",
            "--seed",
            "7",
            "--start",
            "s0",
        ]
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_zero_episodes_single_snapshot(self, chain2_files, tmp_path, capsys):
        out = tmp_path / "run.json"
        assert (
            main(
                [
                    "learn",
                    "--mdp",
                    chain2_files["mdp"],
                    "--episodes",
                    "0",
                    "--out",
                    str(out),
                ]
            )
            == 0
        )
        record = json.loads(out.read_text())
        assert len(record["snapshots"]) == 1
        assert record["experience"] == []

    def test_run_round_trips_to_identical_record(self, chain2_files, tmp_path, capsys):
        out = tmp_path / "run.json"
        assert (
            main(
                [
                    "learn",
                    "--mdp",
                    chain2_files["mdp"],
                    "--episodes",
                    "10",
                    "--seed",
                    "1",
                    "--out",
                    str(out),
                ]
            )
            == 0
        )
        text = out.read_text()
        record = RunRecord.from_json(text)
        assert record.to_json() == text

    def test_learn_then_analyze_reports_policy_change(self, chain2_files, tmp_path, capsys):
        run_path = tmp_path / "run.json"
        report_path = tmp_path / "report.json"
        code = main(
            [
                "learn",
                "--mdp",
                chain2_files["mdp"],
                "--episodes",
                "60",
                "--snapshot-every",
                "20",
                "--seed",
                "0",
                "--start",
                "s0",
                "--out",
                str(run_path),
                "--analyze",
                "--mapping",
                "sas",
                "--alpha",
                "0.5",
                "--beta",
                "0.5",
                "--report-out",
                str(report_path),
            ]
        )
        assert code == 0
        report = json.loads(report_path.read_text())
        kinds = {t["kind"] for t in report["transformations"]}
        assert kinds - {"none"}  # the epsilon-greedy policy moved at least once

    def test_invalid_mdp_exit_one(self, tmp_path, capsys):
        payload = json.load(open(fixture("chain2.mdp.json")))
        payload["transitions"]["a0"]["s0"] = [0.7, 0.7]
        bad = write_json(tmp_path / "bad.json", payload)
        assert main(["learn", "--mdp", bad, "--episodes", "1"]) == 1
