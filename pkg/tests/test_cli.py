from __future__ import annotations

import csv
import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from partialmerge.cli import main
from partialmerge.logio import read_log

SAMPLES = Path(__file__).resolve().parent.parent / "data" / "samples"


@pytest.fixture()
def runner() -> CliRunner:
    return CliRunner()


@pytest.fixture(scope="module")
def sim_log(tmp_path_factory) -> Path:
    path = tmp_path_factory.mktemp("cli") / "sim.jsonl"
    result = CliRunner().invoke(
        main, ["simulate", "--synthetic", "4", "--out", str(path), "--seed", "9"]
    )
    assert result.exit_code == 0, result.output
    return path


class TestSimulate:
    def test_from_reference_file(self, runner, tmp_path):
        refs = tmp_path / "refs.txt"
        refs.write_text("my-utt\thello there world\nsecond utterance here\n")
        out = tmp_path / "sim.jsonl"
        result = runner.invoke(main, ["simulate", str(refs), "--out", str(out)])
        assert result.exit_code == 0, result.output
        logs = read_log(out)
        assert [log.utterance_id for log in logs] == ["my-utt", "utt-0001"]

    def test_requires_refs_or_synthetic(self, runner, tmp_path):
        result = runner.invoke(
            main, ["simulate", "--out", str(tmp_path / "x.jsonl")]
        )
        assert result.exit_code != 0

    def test_bad_error_mix(self, runner, tmp_path):
        result = runner.invoke(
            main,
            ["simulate", "--synthetic", "1", "--out", str(tmp_path / "x.jsonl"),
             "--error-mix", "1,2"],
        )
        assert result.exit_code != 0


class TestMerge:
    def test_writes_merged_log_and_stats(self, runner, sim_log, tmp_path):
        out = tmp_path / "merged.jsonl"
        result = runner.invoke(main, ["merge", str(sim_log), "--out", str(out)])
        assert result.exit_code == 0, result.output
        assert "accepted=" in result.output
        assert "mean" in result.output
        merged = read_log(out)
        original = read_log(sim_log)
        assert len(merged) == len(original)
        for m, o in zip(merged, original):
            assert m.final() == o.final()

    def test_golden_scenario(self, runner, tmp_path):
        out = tmp_path / "merged.jsonl"
        result = runner.invoke(
            main,
            ["merge", str(SAMPLES / "rosalie.jsonl"), "--out", str(out),
             "--trim-t", "0", "--window-m", "inf", "--recent-k", "5", "--rho-r", "0.7"],
        )
        assert result.exit_code == 0, result.output
        partials = read_log(out)[0].partials()
        assert partials[-1].text == "_ro sa l ie _how _are _you"

    def test_gate_zero_reproduces_causal(self, runner, sim_log, tmp_path):
        out = tmp_path / "merged.jsonl"
        result = runner.invoke(
            main, ["merge", str(sim_log), "--out", str(out), "--rho-r", "0"]
        )
        assert result.exit_code == 0
        from partialmerge.events import Origin

        for merged, original in zip(read_log(out), read_log(sim_log)):
            assert [e.text for e in merged.partials()] == [
                e.text for e in original.partials(Origin.CAUSAL)
            ]

    def test_invalid_log_fails(self, runner, tmp_path):
        bad = tmp_path / "bad.jsonl"
        bad.write_text('{"record": "event", "utterance_id": "u"}\n')
        result = runner.invoke(
            main, ["merge", str(bad), "--out", str(tmp_path / "out.jsonl")]
        )
        assert result.exit_code != 0
        assert "line 1" in result.output

    def test_bad_window_flag(self, runner, sim_log, tmp_path):
        result = runner.invoke(
            main,
            ["merge", str(sim_log), "--out", str(tmp_path / "x.jsonl"),
             "--window-m", "wide"],
        )
        assert result.exit_code != 0


class TestMetrics:
    def test_stdout_jsonl(self, runner, sim_log):
        result = runner.invoke(main, ["metrics", str(sim_log)])
        assert result.exit_code == 0, result.output
        records = [json.loads(line) for line in result.output.strip().splitlines()]
        kinds = [r["record"] for r in records]
        assert kinds.count("utterance") == 4
        assert kinds[-1] == "corpus"

    def test_report_file_with_baseline(self, runner, sim_log, tmp_path):
        merged = tmp_path / "merged.jsonl"
        assert runner.invoke(
            main, ["merge", str(sim_log), "--out", str(merged)]
        ).exit_code == 0
        report = tmp_path / "report.jsonl"
        result = runner.invoke(
            main,
            ["metrics", str(merged), "--baseline", str(sim_log), "--out", str(report)],
        )
        assert result.exit_code == 0, result.output
        records = [json.loads(line) for line in report.read_text().splitlines()]
        by_kind = {r["record"]: r for r in records}
        assert by_kind["delta"]["finals_match"] is True
        assert by_kind["delta"]["timestamps_match"] is True
        assert by_kind["corpus"]["pwer"] <= by_kind["baseline_corpus"]["pwer"]

    def test_final_mismatch_fails(self, runner, sim_log, tmp_path):
        logs = read_log(sim_log)
        tampered = tmp_path / "tampered.jsonl"
        final = logs[0].final()
        assert final is not None
        from dataclasses import replace

        from partialmerge.logio import write_log

        logs[0].events[-1] = replace(final, text=final.text + " _extra")
        write_log(logs, tampered)
        result = runner.invoke(
            main, ["metrics", str(tampered), "--baseline", str(sim_log)]
        )
        assert result.exit_code != 0
        assert "FINAL" in result.output

    def test_missing_reference_fails(self, runner, tmp_path):
        log = tmp_path / "noref.jsonl"
        log.write_text(
            '{"record": "event", "utterance_id": "u", "time_ms": 1, "origin": "CAUSAL", "kind": "PARTIAL", "text": "_a"}\n'
            '{"record": "event", "utterance_id": "u", "time_ms": 9, "origin": "CASCADED", "kind": "FINAL", "text": "_a"}\n'
        )
        result = runner.invoke(main, ["metrics", str(log)])
        assert result.exit_code != 0


class TestSweep:
    def test_csv_columns_fixed(self, runner, sim_log, tmp_path):
        out = tmp_path / "sweep.csv"
        result = runner.invoke(
            main,
            ["sweep", str(sim_log), "--param", "T", "--values", "0,1", "--out", str(out)],
        )
        assert result.exit_code == 0, result.output
        with open(out, newline="") as handle:
            rows = list(csv.DictReader(handle))
        assert list(rows[0]) == [
            "param_value", "pwer", "upwr_partials", "upwr_transition",
            "upwr_all", "delta_pl_ms", "final_wer",
        ]
        assert [r["param_value"] for r in rows] == ["0", "1"]

    def test_inf_value(self, runner, sim_log, tmp_path):
        out = tmp_path / "sweep.csv"
        result = runner.invoke(
            main,
            ["sweep", str(sim_log), "--param", "rho_r", "--values", "0,inf",
             "--out", str(out)],
        )
        assert result.exit_code == 0, result.output
        with open(out, newline="") as handle:
            rows = list(csv.DictReader(handle))
        assert [r["param_value"] for r in rows] == ["0", "inf"]

    def test_empty_values_usage_error(self, runner, sim_log, tmp_path):
        result = runner.invoke(
            main,
            ["sweep", str(sim_log), "--param", "K", "--values", " , ",
             "--out", str(tmp_path / "x.csv")],
        )
        assert result.exit_code != 0

    def test_unknown_parameter(self, runner, sim_log, tmp_path):
        result = runner.invoke(
            main,
            ["sweep", str(sim_log), "--param", "alpha", "--values", "1",
             "--out", str(tmp_path / "x.csv")],
        )
        assert result.exit_code != 0


class TestDeterminism:
    def test_merge_byte_deterministic(self, runner, sim_log, tmp_path):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        for target in (a, b):
            assert runner.invoke(
                main, ["merge", str(sim_log), "--out", str(target)]
            ).exit_code == 0
        assert a.read_bytes() == b.read_bytes()
