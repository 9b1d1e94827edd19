from __future__ import annotations

import json
from pathlib import Path

import pytest

from partialmerge.events import Origin, ResultEvent, ResultKind
from partialmerge.logio import (
    LogFormatError,
    LogValidationError,
    UtteranceLog,
    parse_log_lines,
    read_log,
    write_log,
)

SAMPLES = Path(__file__).resolve().parent.parent / "data" / "samples"


def two_utterance_logs() -> list[UtteranceLog]:
    return [
        UtteranceLog(
            utterance_id="u1",
            reference=["how", "are", "you"],
            events=[
                ResultEvent(100, Origin.CAUSAL, ResultKind.PARTIAL, "_how"),
                ResultEvent(200, Origin.CASCADED, ResultKind.PARTIAL, "_how"),
                ResultEvent(900, Origin.CASCADED, ResultKind.FINAL, "_how _are _you"),
            ],
        ),
        UtteranceLog(
            utterance_id="u2",
            reference=None,
            events=[ResultEvent(50, Origin.CAUSAL, ResultKind.PARTIAL, "_ok")],
        ),
    ]


class TestRoundTrip:
    def test_read_back_equals_input(self, tmp_path):
        path = tmp_path / "log.jsonl"
        logs = two_utterance_logs()
        write_log(logs, path)
        assert read_log(path) == logs

    def test_empty_list_gives_empty_file(self, tmp_path):
        path = tmp_path / "log.jsonl"
        write_log([], path)
        assert path.read_text() == ""
        assert read_log(path) == []

    def test_unicode_pieces_round_trip(self, tmp_path):
        path = tmp_path / "log.jsonl"
        logs = [
            UtteranceLog(
                utterance_id="ü-1",
                reference=["héllo", "wörld"],
                events=[
                    ResultEvent(10, Origin.CAUSAL, ResultKind.PARTIAL, "_héllo"),
                    ResultEvent(90, Origin.CASCADED, ResultKind.FINAL, "_héllo _wörld"),
                ],
            )
        ]
        write_log(logs, path)
        assert read_log(path) == logs
        first_write = path.read_bytes()
        write_log(read_log(path), path)
        assert path.read_bytes() == first_write

    def test_writes_are_deterministic(self, tmp_path):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        write_log(two_utterance_logs(), a)
        write_log(two_utterance_logs(), b)
        assert a.read_bytes() == b.read_bytes()


class TestParsing:
    def test_two_utterances(self, tmp_path):
        path = tmp_path / "log.jsonl"
        write_log(two_utterance_logs(), path)
        logs = read_log(path)
        assert [log.utterance_id for log in logs] == ["u1", "u2"]
        assert logs[0].reference == ["how", "are", "you"]
        assert logs[1].reference is None

    def test_blank_lines_skipped(self):
        lines = [
            "",
            '{"record": "event", "utterance_id": "u", "time_ms": 1, "origin": "CAUSAL", "kind": "PARTIAL", "text": "_a"}',
            "   ",
        ]
        logs = parse_log_lines(lines)
        assert len(logs) == 1 and len(logs[0].events) == 1

    def test_missing_origin_reports_line(self):
        lines = [
            '{"record": "event", "utterance_id": "u", "time_ms": 1, "origin": "CAUSAL", "kind": "PARTIAL", "text": "_a"}',
            '{"record": "event", "utterance_id": "u", "time_ms": 2, "kind": "PARTIAL", "text": "_a _b"}',
        ]
        with pytest.raises(LogFormatError) as err:
            parse_log_lines(lines)
        assert err.value.line_no == 2
        assert "origin" in str(err.value)

    def test_invalid_json_reports_line(self):
        with pytest.raises(LogFormatError) as err:
            parse_log_lines(["{not json"])
        assert err.value.line_no == 1

    def test_unknown_record_kind(self):
        with pytest.raises(LogFormatError):
            parse_log_lines(['{"record": "mystery", "utterance_id": "u"}'])

    def test_bad_origin_value(self):
        line = '{"record": "event", "utterance_id": "u", "time_ms": 1, "origin": "SIDEWAYS", "kind": "PARTIAL", "text": "_a"}'
        with pytest.raises(LogFormatError):
            parse_log_lines([line])

    def test_negative_time_rejected(self):
        line = '{"record": "event", "utterance_id": "u", "time_ms": -5, "origin": "CAUSAL", "kind": "PARTIAL", "text": "_a"}'
        with pytest.raises(LogFormatError):
            parse_log_lines([line])

    def test_interleaved_utterances_rejected(self):
        def line(utt, t):
            return json.dumps(
                {
                    "record": "event",
                    "utterance_id": utt,
                    "time_ms": t,
                    "origin": "CAUSAL",
                    "kind": "PARTIAL",
                    "text": "_a",
                }
            )

        with pytest.raises(LogFormatError):
            parse_log_lines([line("u1", 1), line("u2", 1), line("u1", 2)])


class TestValidation:
    def event_line(self, t, origin="CAUSAL", kind="PARTIAL", utt="u1"):
        return json.dumps(
            {
                "record": "event",
                "utterance_id": utt,
                "time_ms": t,
                "origin": origin,
                "kind": kind,
                "text": "_a",
            }
        )

    def test_out_of_order_names_utterance(self):
        with pytest.raises(LogValidationError) as err:
            parse_log_lines([self.event_line(200), self.event_line(100)])
        assert err.value.utterance_id == "u1"

    def test_causal_before_cascaded_at_same_time_rejected(self):
        lines = [
            self.event_line(100, origin="CAUSAL"),
            self.event_line(100, origin="CASCADED"),
        ]
        with pytest.raises(LogValidationError):
            parse_log_lines(lines)

    def test_duplicate_final_rejected(self):
        lines = [
            self.event_line(100, origin="CASCADED", kind="FINAL"),
            self.event_line(200, origin="CASCADED", kind="FINAL"),
        ]
        with pytest.raises(LogValidationError):
            parse_log_lines(lines)

    def test_duplicate_reference_rejected(self):
        ref = json.dumps({"record": "reference", "utterance_id": "u1", "text": "a b"})
        with pytest.raises(LogValidationError):
            parse_log_lines([ref, ref])

    def test_write_validates(self, tmp_path):
        bad = UtteranceLog(
            utterance_id="u1",
            events=[
                ResultEvent(200, Origin.CAUSAL, ResultKind.PARTIAL, "_a"),
                ResultEvent(100, Origin.CAUSAL, ResultKind.PARTIAL, "_a"),
            ],
        )
        with pytest.raises(LogValidationError):
            write_log([bad], tmp_path / "x.jsonl")


class TestSamples:
    @pytest.mark.parametrize("name", ["rosalie.jsonl", "noise_free.jsonl", "noisy.jsonl"])
    def test_samples_parse_and_validate(self, name):
        logs = read_log(SAMPLES / name)
        assert logs
        for log in logs:
            assert log.reference
            assert log.final() is not None

    @pytest.mark.parametrize("name", ["rosalie.jsonl", "noise_free.jsonl", "noisy.jsonl"])
    def test_samples_match_schema(self, name):
        jsonschema = pytest.importorskip("jsonschema")
        schema = json.loads(
            (SAMPLES.parent.parent / "docs" / "log_format_schema.json").read_text()
        )
        validator = jsonschema.Draft202012Validator(schema)
        for raw in (SAMPLES / name).read_text().splitlines():
            if raw.strip():
                validator.validate(json.loads(raw))

    def test_generated_samples_are_reproducible(self, tmp_path):
        # Locks simulator determinism to the checked-in bytes.
        from partialmerge.pipeline import simulate_corpus
        from partialmerge.simgen import SimConfig

        refs = [
            ("demo-clean-01", "the quick brown fox jumps over the lazy dog today".split()),
            ("demo-clean-02", "please play some quiet music in the living room".split()),
        ]
        config = SimConfig(causal_error_rate=0.0, cascaded_error_rate=0.0, seed=0)
        out = tmp_path / "regen.jsonl"
        write_log(simulate_corpus(refs, config), out)
        assert out.read_bytes() == (SAMPLES / "noise_free.jsonl").read_bytes()
