"""Reading and writing line-delimited result-event logs.

One JSON object per line. A ``reference`` record carries the ground-truth
transcript for an utterance; ``event`` records carry the timestamped
results with word-piece texts. Utterances appear as contiguous blocks and
events must already be sorted; files that violate the ordering are
rejected, never silently re-sorted.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, TextIO

from .events import Origin, ResultEvent, ResultKind, events_in_order


class LogFormatError(ValueError):
    """A line could not be parsed; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class LogValidationError(ValueError):
    """A parsed utterance violates the log invariants."""

    def __init__(self, utterance_id: str, message: str):
        super().__init__(f"utterance {utterance_id!r}: {message}")
        self.utterance_id = utterance_id


@dataclass(slots=True)
class UtteranceLog:
    utterance_id: str
    reference: list[str] | None = None
    events: list[ResultEvent] = field(default_factory=list)

    def partials(self, origin: Origin | None = None) -> list[ResultEvent]:
        return [
            e
            for e in self.events
            if e.kind is ResultKind.PARTIAL and (origin is None or e.origin is origin)
        ]

    def final(self) -> ResultEvent | None:
        finals = [e for e in self.events if e.kind is ResultKind.FINAL]
        return finals[0] if finals else None

    def validate(self) -> None:
        if not events_in_order(self.events):
            raise LogValidationError(
                self.utterance_id, "events out of (time_ms, origin, kind) order"
            )
        n_finals = sum(1 for e in self.events if e.kind is ResultKind.FINAL)
        if n_finals > 1:
            raise LogValidationError(self.utterance_id, f"{n_finals} FINAL events")


_EVENT_FIELDS = ("utterance_id", "time_ms", "origin", "kind", "text")


def _parse_line(line_no: int, raw: str) -> tuple[str, dict]:
    try:
        record = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise LogFormatError(line_no, f"invalid JSON ({exc.msg})") from exc
    if not isinstance(record, dict):
        raise LogFormatError(line_no, "record must be a JSON object")
    kind = record.get("record", "event")
    if kind not in ("event", "reference"):
        raise LogFormatError(line_no, f"unknown record kind {kind!r}")
    if "utterance_id" not in record or not isinstance(record["utterance_id"], str):
        raise LogFormatError(line_no, "missing utterance_id")
    return kind, record


def _parse_event(line_no: int, record: dict) -> ResultEvent:
    for name in _EVENT_FIELDS:
        if name not in record:
            raise LogFormatError(line_no, f"missing field {name!r}")
    time_ms = record["time_ms"]
    if isinstance(time_ms, bool) or not isinstance(time_ms, int) or time_ms < 0:
        raise LogFormatError(line_no, "time_ms must be a non-negative integer")
    try:
        origin = Origin(record["origin"])
        kind = ResultKind(record["kind"])
    except ValueError as exc:
        raise LogFormatError(line_no, str(exc)) from exc
    if not isinstance(record["text"], str):
        raise LogFormatError(line_no, "text must be a string")
    return ResultEvent(time_ms, origin, kind, record["text"])


def parse_log_lines(lines: Iterable[str]) -> list[UtteranceLog]:
    logs: list[UtteranceLog] = []
    by_id: dict[str, UtteranceLog] = {}
    for line_no, raw in enumerate(lines, start=1):
        if not raw.strip():
            continue
        kind, record = _parse_line(line_no, raw)
        utt_id = record["utterance_id"]
        log = by_id.get(utt_id)
        if log is None:
            log = UtteranceLog(utterance_id=utt_id)
            by_id[utt_id] = log
            logs.append(log)
        elif logs[-1].utterance_id != utt_id:
            raise LogFormatError(
                line_no, f"utterance {utt_id!r} reappears after a different utterance"
            )
        if kind == "reference":
            if "text" not in record or not isinstance(record["text"], str):
                raise LogFormatError(line_no, "reference record needs a text field")
            if log.reference is not None:
                raise LogValidationError(utt_id, "duplicate reference record")
            log.reference = record["text"].split()
        else:
            log.events.append(_parse_event(line_no, record))
    for log in logs:
        log.validate()
    return logs


def read_log(path: str | Path) -> list[UtteranceLog]:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_log_lines(handle)


def _dump_logs(logs: Iterable[UtteranceLog], handle: TextIO) -> None:
    for log in logs:
        if log.reference is not None:
            handle.write(
                json.dumps(
                    {
                        "record": "reference",
                        "utterance_id": log.utterance_id,
                        "text": " ".join(log.reference),
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )
        for event in log.events:
            handle.write(
                json.dumps(
                    {
                        "record": "event",
                        "utterance_id": log.utterance_id,
                        "time_ms": event.time_ms,
                        "origin": event.origin.value,
                        "kind": event.kind.value,
                        "text": event.text,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )


def write_log(logs: Iterable[UtteranceLog], path: str | Path) -> None:
    """Write logs so that read_log(write_log(x)) == x."""
    logs = list(logs)
    for log in logs:
        log.validate()
    with open(path, "w", encoding="utf-8") as handle:
        _dump_logs(logs, handle)


def log_to_lines(logs: Iterable[UtteranceLog]) -> str:
    buffer = io.StringIO()
    _dump_logs(logs, buffer)
    return buffer.getvalue()
