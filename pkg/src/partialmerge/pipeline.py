"""Corpus-level drivers: merge whole logs, score them, and sweep parameters."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, replace
from typing import Sequence

from .events import Origin, ResultKind
from .logio import UtteranceLog
from .merge import MergeParams, MergeStats, merge_events
from .metrics import MetricsReport, aggregate_reports, score_stream
from .simgen import SimConfig, generate_streams
from .tokens import text_to_words

SWEEPABLE = ("T", "rho_r", "K", "M")


def simulate_corpus(
    references: Sequence[tuple[str, list[str]]], config: SimConfig
) -> list[UtteranceLog]:
    """One generated utterance log per (utterance_id, reference words) pair."""
    logs = []
    for utterance_id, words in references:
        generated = generate_streams(list(words), config, utterance_id)
        logs.append(
            UtteranceLog(
                utterance_id=utterance_id,
                reference=list(words),
                events=generated.events,
            )
        )
    return logs


@dataclass(slots=True)
class UtteranceMerge:
    log: UtteranceLog
    stats: MergeStats


@dataclass(slots=True)
class TimingSummary:
    rewrites: int
    mean_ms: float | None
    p99_ms: float | None
    max_ms: float | None

    @classmethod
    def from_samples(cls, samples: Sequence[float]) -> "TimingSummary":
        if not samples:
            return cls(0, None, None, None)
        ordered = sorted(samples)
        p99_index = min(len(ordered) - 1, math.ceil(0.99 * len(ordered)) - 1)
        return cls(
            rewrites=len(ordered),
            mean_ms=sum(ordered) / len(ordered),
            p99_ms=ordered[p99_index],
            max_ms=ordered[-1],
        )


def merge_log(log: UtteranceLog, params: MergeParams) -> UtteranceMerge:
    merged_events, stats = merge_events(log.events, params)
    merged = UtteranceLog(
        utterance_id=log.utterance_id,
        reference=list(log.reference) if log.reference is not None else None,
        events=merged_events,
    )
    return UtteranceMerge(merged, stats)


def merge_corpus(
    logs: Sequence[UtteranceLog], params: MergeParams
) -> tuple[list[UtteranceMerge], TimingSummary]:
    merges = [merge_log(log, params) for log in logs]
    samples: list[float] = []
    for m in merges:
        samples.extend(m.stats.rewrite_times_ms)
    return merges, TimingSummary.from_samples(samples)


class MissingDataError(ValueError):
    """Utterances lack the reference or final needed for scoring."""

    def __init__(self, what: str, utterance_ids: list[str]):
        ids = ", ".join(utterance_ids)
        super().__init__(f"missing {what} for utterances: {ids}")
        self.utterance_ids = utterance_ids


def score_log(log: UtteranceLog, stream: Origin = Origin.CAUSAL) -> MetricsReport:
    """Score the displayed partial stream of one utterance.

    ``stream`` selects which origin's partials form the displayed stream
    (after merging all partials carry the causal origin). The reference and
    the final result are both required.
    """
    if log.reference is None:
        raise MissingDataError("reference", [log.utterance_id])
    final = log.final()
    if final is None:
        raise MissingDataError("final", [log.utterance_id])
    return score_stream(log.partials(stream), text_to_words(final.text), log.reference)


def score_corpus(
    logs: Sequence[UtteranceLog], stream: Origin = Origin.CAUSAL
) -> tuple[list[MetricsReport], MetricsReport]:
    no_reference = [log.utterance_id for log in logs if log.reference is None]
    if no_reference:
        raise MissingDataError("reference", no_reference)
    no_final = [log.utterance_id for log in logs if log.final() is None]
    if no_final:
        raise MissingDataError("final", no_final)
    reports = [score_log(log, stream) for log in logs]
    return reports, aggregate_reports(reports)


@dataclass(slots=True)
class BaselineComparison:
    """Changes of a test corpus against a baseline corpus (negative = better)."""

    pwer_pct: float | None
    upwr_partials_pct: float | None
    upwr_transition_pct: float | None
    upwr_all_pct: float | None
    final_wer_pct: float | None
    delta_pl_ms: float | None
    finals_match: bool
    timestamps_match: bool


def _pct_change(test: float, base: float) -> float | None:
    if base == 0:
        return None
    return (test - base) / base * 100.0


def compare_corpora(
    test_logs: Sequence[UtteranceLog],
    base_logs: Sequence[UtteranceLog],
    test: MetricsReport,
    base: MetricsReport,
    stream: Origin = Origin.CAUSAL,
) -> BaselineComparison:
    delta_pl: float | None = None
    if test.partial_latency_ms is not None and base.partial_latency_ms is not None:
        delta_pl = test.partial_latency_ms - base.partial_latency_ms

    by_id = {log.utterance_id: log for log in base_logs}
    finals_match = True
    timestamps_match = True
    for log in test_logs:
        other = by_id.get(log.utterance_id)
        if other is None:
            finals_match = timestamps_match = False
            continue
        a, b = log.final(), other.final()
        if (a is None) != (b is None) or (a is not None and b is not None and a.text != b.text):
            finals_match = False
        ours = Counter(e.time_ms for e in log.partials(stream))
        theirs = Counter(e.time_ms for e in other.partials(stream))
        if ours != theirs:
            timestamps_match = False

    return BaselineComparison(
        pwer_pct=_pct_change(test.pwer, base.pwer),
        upwr_partials_pct=_pct_change(test.upwr_partials, base.upwr_partials),
        upwr_transition_pct=_pct_change(test.upwr_transition, base.upwr_transition),
        upwr_all_pct=_pct_change(test.upwr_all, base.upwr_all),
        final_wer_pct=_pct_change(test.final_wer, base.final_wer),
        delta_pl_ms=delta_pl,
        finals_match=finals_match,
        timestamps_match=timestamps_match,
    )


@dataclass(slots=True)
class SweepRow:
    param_value: str
    pwer: float
    upwr_partials: float
    upwr_transition: float
    upwr_all: float
    delta_pl_ms: float | None
    final_wer: float


def apply_sweep_value(
    params: MergeParams, parameter: str, value: float | None
) -> MergeParams:
    """New params with one swept knob changed; None means inf/unlimited."""
    if parameter == "T":
        if value is None:
            raise ValueError("T cannot be unlimited")
        return replace(params, trim_t=int(value))
    if parameter == "rho_r":
        return replace(params, rho_r_threshold=math.inf if value is None else float(value))
    if parameter == "K":
        if value is None:
            raise ValueError("K cannot be unlimited")
        return replace(params, recent_k=int(value))
    if parameter == "M":
        return replace(params, window_m=None if value is None else int(value))
    raise ValueError(f"unknown sweep parameter {parameter!r}; expected one of {SWEEPABLE}")


def format_sweep_value(parameter: str, value: float | None) -> str:
    if value is None or (isinstance(value, float) and math.isinf(value)):
        return "inf"
    if parameter in ("T", "K", "M"):
        return str(int(value))
    return format(float(value), "g")


def sweep(
    logs: Sequence[UtteranceLog],
    parameter: str,
    values: Sequence[float | None],
    base_params: MergeParams,
) -> list[SweepRow]:
    """Merge+score the corpus once per value, reporting PL change vs causal."""
    if not values:
        raise ValueError("sweep needs at least one value")
    _, causal_corpus = score_corpus(logs, Origin.CAUSAL)
    rows: list[SweepRow] = []
    for value in values:
        params = apply_sweep_value(base_params, parameter, value)
        merges, _ = merge_corpus(logs, params)
        _, corpus = score_corpus([m.log for m in merges], Origin.CAUSAL)
        delta_pl: float | None = None
        if corpus.partial_latency_ms is not None and causal_corpus.partial_latency_ms is not None:
            delta_pl = corpus.partial_latency_ms - causal_corpus.partial_latency_ms
        rows.append(
            SweepRow(
                param_value=format_sweep_value(parameter, value),
                pwer=corpus.pwer,
                upwr_partials=corpus.upwr_partials,
                upwr_transition=corpus.upwr_transition,
                upwr_all=corpus.upwr_all,
                delta_pl_ms=delta_pl,
                final_wer=corpus.final_wer,
            )
        )
    return rows
