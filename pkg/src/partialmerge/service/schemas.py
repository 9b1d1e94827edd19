"""Pydantic request/response models for the HTTP service.

Infinity is not valid JSON, so disabled gates and the unlimited window
travel as ``null`` on the wire and are mapped to ``math.inf`` / ``None``
at the domain boundary.
"""

from __future__ import annotations

import math
from typing import Literal, Optional

from pydantic import BaseModel, Field

from ..events import Origin, ResultEvent, ResultKind
from ..logio import UtteranceLog
from ..merge import MergeParams, MergeStats
from ..metrics import MetricsReport
from ..pipeline import BaselineComparison, SweepRow, TimingSummary
from ..simgen import SimConfig


class EventModel(BaseModel):
    time_ms: int = Field(ge=0)
    origin: Literal["CASCADED", "CAUSAL"]
    kind: Literal["PARTIAL", "FINAL"]
    text: str

    @classmethod
    def from_domain(cls, event: ResultEvent) -> "EventModel":
        return cls(
            time_ms=event.time_ms,
            origin=event.origin.value,
            kind=event.kind.value,
            text=event.text,
        )

    def to_domain(self) -> ResultEvent:
        return ResultEvent(
            self.time_ms, Origin(self.origin), ResultKind(self.kind), self.text
        )


class UtteranceModel(BaseModel):
    utterance_id: str
    reference: Optional[list[str]] = None
    events: list[EventModel] = Field(default_factory=list)

    @classmethod
    def from_domain(cls, log: UtteranceLog) -> "UtteranceModel":
        return cls(
            utterance_id=log.utterance_id,
            reference=log.reference,
            events=[EventModel.from_domain(e) for e in log.events],
        )

    def to_domain(self) -> UtteranceLog:
        return UtteranceLog(
            utterance_id=self.utterance_id,
            reference=list(self.reference) if self.reference is not None else None,
            events=[e.to_domain() for e in self.events],
        )


class MergeParamsModel(BaseModel):
    trim_t: int = Field(default=1, ge=0)
    window_m: Optional[int] = Field(default=25, ge=1, description="null = unlimited")
    recent_k: int = Field(default=10, ge=0)
    rho_r: Optional[float] = Field(default=0.5, ge=0, description="null = gate disabled")
    rho_f: Optional[float] = Field(default=None, ge=0, description="null = gate disabled")

    def to_domain(self) -> MergeParams:
        return MergeParams(
            trim_t=self.trim_t,
            window_m=self.window_m,
            recent_k=self.recent_k,
            rho_r_threshold=math.inf if self.rho_r is None else self.rho_r,
            rho_f_threshold=math.inf if self.rho_f is None else self.rho_f,
        )


class UtteranceStatsModel(BaseModel):
    utterance_id: str
    causal_partials: int
    cascaded_partials: int
    accepted: int
    rejected: int
    fallback_rewrites: int
    passthroughs: int
    finals: int

    @classmethod
    def from_domain(cls, utterance_id: str, stats: MergeStats) -> "UtteranceStatsModel":
        return cls(
            utterance_id=utterance_id,
            causal_partials=stats.causal_partials,
            cascaded_partials=stats.cascaded_partials,
            accepted=stats.accepted,
            rejected=stats.rejected,
            fallback_rewrites=stats.fallback_rewrites,
            passthroughs=stats.passthroughs,
            finals=stats.finals,
        )


class TimingModel(BaseModel):
    rewrites: int
    mean_ms: Optional[float]
    p99_ms: Optional[float]
    max_ms: Optional[float]

    @classmethod
    def from_domain(cls, timing: TimingSummary) -> "TimingModel":
        return cls(
            rewrites=timing.rewrites,
            mean_ms=timing.mean_ms,
            p99_ms=timing.p99_ms,
            max_ms=timing.max_ms,
        )


class MergeRequest(BaseModel):
    utterances: list[UtteranceModel]
    params: MergeParamsModel = Field(default_factory=MergeParamsModel)


class MergeResponse(BaseModel):
    utterances: list[UtteranceModel]
    stats: list[UtteranceStatsModel]
    timing: TimingModel


class MetricsRecordModel(BaseModel):
    utterance_id: Optional[str] = None
    pwer: float
    partial_latency_ms: Optional[float]
    upwr_partials: float
    upwr_transition: float
    upwr_all: float
    final_wer: float
    pwer_errors: int
    pwer_matched: int
    latency_time_sum_ms: float
    latency_words: int
    upwr_partials_unstable: int
    upwr_partials_total: int
    upwr_transition_unstable: int
    upwr_transition_total: int
    upwr_all_unstable: int
    upwr_all_total: int
    final_wer_errors: int
    reference_words: int
    partial_events: int
    utterances: int

    @classmethod
    def from_domain(
        cls, report: MetricsReport, utterance_id: str | None = None
    ) -> "MetricsRecordModel":
        c = report.counts
        return cls(
            utterance_id=utterance_id,
            pwer=report.pwer,
            partial_latency_ms=report.partial_latency_ms,
            upwr_partials=report.upwr_partials,
            upwr_transition=report.upwr_transition,
            upwr_all=report.upwr_all,
            final_wer=report.final_wer,
            pwer_errors=c.pwer_errors,
            pwer_matched=c.pwer_matched,
            latency_time_sum_ms=c.latency_time_sum_ms,
            latency_words=c.latency_words,
            upwr_partials_unstable=c.upwr_partials_unstable,
            upwr_partials_total=c.upwr_partials_total,
            upwr_transition_unstable=c.upwr_transition_unstable,
            upwr_transition_total=c.upwr_transition_total,
            upwr_all_unstable=c.upwr_all_unstable,
            upwr_all_total=c.upwr_all_total,
            final_wer_errors=c.final_wer_errors,
            reference_words=c.reference_words,
            partial_events=c.partial_events,
            utterances=c.utterances,
        )


class DeltaModel(BaseModel):
    """Percent changes vs the baseline corpus; PL change in milliseconds."""

    pwer_pct: Optional[float]
    upwr_partials_pct: Optional[float]
    upwr_transition_pct: Optional[float]
    upwr_all_pct: Optional[float]
    final_wer_pct: Optional[float]
    delta_pl_ms: Optional[float]
    finals_match: bool
    timestamps_match: bool

    @classmethod
    def from_domain(cls, comparison: BaselineComparison) -> "DeltaModel":
        return cls(
            pwer_pct=comparison.pwer_pct,
            upwr_partials_pct=comparison.upwr_partials_pct,
            upwr_transition_pct=comparison.upwr_transition_pct,
            upwr_all_pct=comparison.upwr_all_pct,
            final_wer_pct=comparison.final_wer_pct,
            delta_pl_ms=comparison.delta_pl_ms,
            finals_match=comparison.finals_match,
            timestamps_match=comparison.timestamps_match,
        )


class MetricsRequest(BaseModel):
    utterances: list[UtteranceModel]
    baseline: Optional[list[UtteranceModel]] = None
    stream: Literal["CAUSAL", "CASCADED"] = "CAUSAL"


class MetricsResponse(BaseModel):
    per_utterance: list[MetricsRecordModel]
    corpus: MetricsRecordModel
    baseline_corpus: Optional[MetricsRecordModel] = None
    delta: Optional[DeltaModel] = None


class SimConfigModel(BaseModel):
    causal_word_interval_ms: int = Field(default=300, gt=0)
    causal_jitter_ms: int = Field(default=0, ge=0)
    cascaded_delay_ms: int = Field(default=900, ge=0)
    causal_error_rate: float = Field(default=0.08, ge=0, le=1)
    cascaded_error_rate: float = Field(default=0.02, ge=0, le=1)
    error_mix: tuple[float, float, float] = (0.8, 0.1, 0.1)
    monotone: bool = True
    seed: int = 0

    def to_domain(self) -> SimConfig:
        return SimConfig(
            causal_word_interval_ms=self.causal_word_interval_ms,
            causal_jitter_ms=self.causal_jitter_ms,
            cascaded_delay_ms=self.cascaded_delay_ms,
            causal_error_rate=self.causal_error_rate,
            cascaded_error_rate=self.cascaded_error_rate,
            error_mix=self.error_mix,
            monotone=self.monotone,
            seed=self.seed,
        )


class ReferenceModel(BaseModel):
    utterance_id: str
    text: str


class SimulateRequest(BaseModel):
    references: list[ReferenceModel]
    config: SimConfigModel = Field(default_factory=SimConfigModel)


class SimulateResponse(BaseModel):
    utterances: list[UtteranceModel]


class SweepRequest(BaseModel):
    utterances: list[UtteranceModel]
    parameter: Literal["T", "rho_r", "K", "M"]
    values: list[Optional[float]]
    params: MergeParamsModel = Field(default_factory=MergeParamsModel)


class SweepRowModel(BaseModel):
    param_value: str
    pwer: float
    upwr_partials: float
    upwr_transition: float
    upwr_all: float
    delta_pl_ms: Optional[float]
    final_wer: float

    @classmethod
    def from_domain(cls, row: SweepRow) -> "SweepRowModel":
        return cls(
            param_value=row.param_value,
            pwer=row.pwer,
            upwr_partials=row.upwr_partials,
            upwr_transition=row.upwr_transition,
            upwr_all=row.upwr_all,
            delta_pl_ms=row.delta_pl_ms,
            final_wer=row.final_wer,
        )


class SweepResponse(BaseModel):
    rows: list[SweepRowModel]


class HealthResponse(BaseModel):
    status: str
    version: str
