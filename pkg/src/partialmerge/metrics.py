"""Evaluation of partial-result streams against a reference transcript.

All metrics score whole words; word pieces are joined at the ``_`` marker
before anything is counted. Quality of a partial is measured against its
best-matching reference prefix (missing words at the end of a partial are
not errors), latency is the stabilized appearance time of correct words,
and flicker is the fraction of already-shown words changed later.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .align import EditOp, lev_align
from .events import ResultEvent
from .tokens import text_to_words


def partial_prefix_errors(
    partial: Sequence[str], reference: Sequence[str]
) -> tuple[int, int]:
    """Edit errors of a partial against its best-matching reference prefix.

    Sweeps every reference prefix length and returns (errors, matched
    length); ties pick the longest prefix, which maximizes the error-rate
    denominator.
    """
    outcome = lev_align(partial, reference)
    return outcome.best_cost, outcome.best_j


def pwer(partials: Sequence[Sequence[str]], reference: Sequence[str]) -> float:
    """Word error rate pooled over all partials, each scored vs its best prefix."""
    errors, matched = pwer_counts(partials, reference)
    return errors / matched if matched else 0.0


def pwer_counts(
    partials: Sequence[Sequence[str]], reference: Sequence[str]
) -> tuple[int, int]:
    errors = 0
    matched = 0
    for partial in partials:
        e, r = partial_prefix_errors(partial, reference)
        errors += e
        matched += r
    return errors, matched


def _correct_from_path(outcome) -> set[int]:
    correct: set[int] = set()
    ref_pos = 0
    for op in outcome.path:
        if op is EditOp.CORRECT:
            ref_pos += 1
            correct.add(ref_pos)
        elif op is EditOp.SUBSTITUTE or op is EditOp.DELETE:
            ref_pos += 1
        # INSERT consumes a hypothesis token only
    return correct


def correct_reference_positions(
    partial: Sequence[str], reference: Sequence[str]
) -> set[int]:
    """1-based reference positions matched exactly by this partial's prefix alignment."""
    return _correct_from_path(lev_align(partial, reference))


def _stabilized_latency(
    times: Sequence[int], correct_sets: Sequence[set[int]]
) -> tuple[float, int]:
    if not times:
        return 0.0, 0
    appearance: dict[int, int] = {}
    running = set(correct_sets[-1])
    for time_ms, correct in zip(reversed(times), reversed(correct_sets)):
        running &= correct
        if not running:
            break
        for pos in running:
            appearance[pos] = time_ms
    return float(sum(appearance.values())), len(appearance)


def partial_latency_counts(
    stream: Sequence[tuple[int, Sequence[str]]], reference: Sequence[str]
) -> tuple[float, int]:
    """(sum of stabilized appearance times, number of stabilized words).

    A reference word counts when it is correct in the last partial; its
    appearance time is the earliest partial from which it stays correct at
    its aligned position through the end of the stream. Only differences
    between configurations are meaningful, never the absolute value.
    """
    correct_sets = [
        correct_reference_positions(words, reference) for _, words in stream
    ]
    return _stabilized_latency([t for t, _ in stream], correct_sets)


def partial_latency(
    stream: Sequence[ResultEvent], reference: Sequence[str]
) -> float | None:
    """Mean stabilized appearance time in ms, or None for an empty stream."""
    timed = [(e.time_ms, _event_words(e)) for e in stream]
    total, count = partial_latency_counts(timed, reference)
    if count == 0:
        return None
    return total / count


def _event_words(event: ResultEvent) -> list[str]:
    return text_to_words(event.text)


def _lcp_len(a: Sequence[str], b: Sequence[str]) -> int:
    n = 0
    for wa, wb in zip(a, b):
        if wa != wb:
            break
        n += 1
    return n


def upwr(results: Sequence[Sequence[str]]) -> float:
    """Fraction of already-decoded words changed by a subsequent result."""
    unstable, total = upwr_counts(results)
    return unstable / total if total else 0.0


def upwr_counts(results: Sequence[Sequence[str]]) -> tuple[int, int]:
    unstable = 0
    total = 0
    for cur, nxt in zip(results, results[1:]):
        unstable += len(cur) - _lcp_len(cur, nxt)
        total += len(cur)
    return unstable, total


def upwr_three_way(
    partials: Sequence[Sequence[str]], final: Sequence[str]
) -> tuple[float, float, float]:
    """UPWR over the partials, over the last-partial-to-final transition, and overall."""
    if not partials:
        raise ValueError("upwr_three_way needs at least one partial")
    only_partials = upwr(partials)
    transition = upwr([partials[-1], final])
    overall = upwr(list(partials) + [final])
    return only_partials, transition, overall


def wer(hypothesis: Sequence[str], reference: Sequence[str]) -> float:
    """Standard word error rate: edit errors over reference length."""
    if not reference:
        raise ValueError("wer needs a non-empty reference")
    outcome = lev_align(hypothesis, reference)
    return outcome.last_row[-1] / len(reference)


@dataclass(slots=True)
class MetricsCounts:
    """Numerators and denominators backing every reported ratio."""

    pwer_errors: int = 0
    pwer_matched: int = 0
    latency_time_sum_ms: float = 0.0
    latency_words: int = 0
    upwr_partials_unstable: int = 0
    upwr_partials_total: int = 0
    upwr_transition_unstable: int = 0
    upwr_transition_total: int = 0
    upwr_all_unstable: int = 0
    upwr_all_total: int = 0
    final_wer_errors: int = 0
    reference_words: int = 0
    partial_events: int = 0
    utterances: int = 0

    def add(self, other: "MetricsCounts") -> None:
        self.pwer_errors += other.pwer_errors
        self.pwer_matched += other.pwer_matched
        self.latency_time_sum_ms += other.latency_time_sum_ms
        self.latency_words += other.latency_words
        self.upwr_partials_unstable += other.upwr_partials_unstable
        self.upwr_partials_total += other.upwr_partials_total
        self.upwr_transition_unstable += other.upwr_transition_unstable
        self.upwr_transition_total += other.upwr_transition_total
        self.upwr_all_unstable += other.upwr_all_unstable
        self.upwr_all_total += other.upwr_all_total
        self.final_wer_errors += other.final_wer_errors
        self.reference_words += other.reference_words
        self.partial_events += other.partial_events
        self.utterances += other.utterances


@dataclass(slots=True)
class MetricsReport:
    """All stream-quality ratios for one utterance or one pooled corpus."""

    pwer: float
    partial_latency_ms: float | None
    upwr_partials: float
    upwr_transition: float
    upwr_all: float
    final_wer: float
    counts: MetricsCounts = field(default_factory=MetricsCounts)

    @classmethod
    def from_counts(cls, counts: MetricsCounts) -> "MetricsReport":
        def ratio(num: float, den: float) -> float:
            return num / den if den else 0.0

        latency = (
            counts.latency_time_sum_ms / counts.latency_words
            if counts.latency_words
            else None
        )
        return cls(
            pwer=ratio(counts.pwer_errors, counts.pwer_matched),
            partial_latency_ms=latency,
            upwr_partials=ratio(counts.upwr_partials_unstable, counts.upwr_partials_total),
            upwr_transition=ratio(
                counts.upwr_transition_unstable, counts.upwr_transition_total
            ),
            upwr_all=ratio(counts.upwr_all_unstable, counts.upwr_all_total),
            final_wer=ratio(counts.final_wer_errors, counts.reference_words),
            counts=counts,
        )


def score_stream(
    partial_events: Sequence[ResultEvent],
    final_words: Sequence[str],
    reference: Sequence[str],
) -> MetricsReport:
    """Score one utterance's displayed partial stream plus its final."""
    partial_words = [_event_words(e) for e in partial_events]

    counts = MetricsCounts(utterances=1, partial_events=len(partial_events))
    # One prefix alignment per partial feeds both PWER and latency.
    outcomes = [lev_align(words, reference) for words in partial_words]
    counts.pwer_errors = sum(o.best_cost for o in outcomes)
    counts.pwer_matched = sum(o.best_j for o in outcomes)
    counts.latency_time_sum_ms, counts.latency_words = _stabilized_latency(
        [e.time_ms for e in partial_events],
        [_correct_from_path(o) for o in outcomes],
    )
    counts.upwr_partials_unstable, counts.upwr_partials_total = upwr_counts(partial_words)
    if partial_words:
        counts.upwr_transition_unstable, counts.upwr_transition_total = upwr_counts(
            [partial_words[-1], list(final_words)]
        )
    counts.upwr_all_unstable, counts.upwr_all_total = upwr_counts(
        partial_words + [list(final_words)]
    )
    outcome = lev_align(final_words, reference)
    counts.final_wer_errors = outcome.last_row[-1]
    counts.reference_words = len(reference)
    return MetricsReport.from_counts(counts)


def aggregate_reports(reports: Sequence[MetricsReport]) -> MetricsReport:
    """Pool per-utterance counts into one corpus-level report."""
    total = MetricsCounts()
    for report in reports:
        total.add(report.counts)
    return MetricsReport.from_counts(total)
