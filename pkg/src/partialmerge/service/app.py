"""FastAPI service exposing the merge engine, metrics, simulator, and sweeps.

All endpoints are batch-style and stateless: a request carries whole
utterance logs, the response carries the merged logs, scores, or sweep
rows. Domain validation failures (unsorted events, missing references)
map to 400; schema violations are rejected by pydantic with 422.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..events import Origin
from ..pipeline import (
    MissingDataError,
    compare_corpora,
    merge_corpus,
    score_corpus,
    simulate_corpus,
    sweep,
)
from .schemas import (
    DeltaModel,
    HealthResponse,
    MergeRequest,
    MergeResponse,
    MetricsRecordModel,
    MetricsRequest,
    MetricsResponse,
    SimulateRequest,
    SimulateResponse,
    SweepRequest,
    SweepResponse,
    SweepRowModel,
    TimingModel,
    UtteranceModel,
    UtteranceStatsModel,
)


def create_app() -> FastAPI:
    app = FastAPI(
        title="partialmerge",
        version=__version__,
        description="Composite partial results for two-stream streaming recognition",
    )

    @app.get("/healthz", response_model=HealthResponse)
    def healthz() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.post("/v1/merge", response_model=MergeResponse)
    def merge(request: MergeRequest) -> MergeResponse:
        logs = [u.to_domain() for u in request.utterances]
        params = request.params.to_domain()
        try:
            merges, timing = merge_corpus(logs, params)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return MergeResponse(
            utterances=[UtteranceModel.from_domain(m.log) for m in merges],
            stats=[
                UtteranceStatsModel.from_domain(m.log.utterance_id, m.stats)
                for m in merges
            ],
            timing=TimingModel.from_domain(timing),
        )

    @app.post("/v1/metrics", response_model=MetricsResponse)
    def metrics(request: MetricsRequest) -> MetricsResponse:
        logs = [u.to_domain() for u in request.utterances]
        stream = Origin(request.stream)
        try:
            reports, corpus = score_corpus(logs, stream)
            baseline_corpus = None
            delta = None
            if request.baseline is not None:
                base_logs = [u.to_domain() for u in request.baseline]
                _, base_report = score_corpus(base_logs, stream)
                baseline_corpus = MetricsRecordModel.from_domain(base_report)
                delta = DeltaModel.from_domain(
                    compare_corpora(logs, base_logs, corpus, base_report, stream)
                )
        except MissingDataError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return MetricsResponse(
            per_utterance=[
                MetricsRecordModel.from_domain(report, log.utterance_id)
                for report, log in zip(reports, logs)
            ],
            corpus=MetricsRecordModel.from_domain(corpus),
            baseline_corpus=baseline_corpus,
            delta=delta,
        )

    @app.post("/v1/simulate", response_model=SimulateResponse)
    def simulate(request: SimulateRequest) -> SimulateResponse:
        config = request.config.to_domain()
        references = []
        for reference in request.references:
            words = reference.text.split()
            if not words:
                raise HTTPException(
                    status_code=400,
                    detail=f"utterance {reference.utterance_id!r} has an empty reference",
                )
            references.append((reference.utterance_id, words))
        logs = simulate_corpus(references, config)
        return SimulateResponse(utterances=[UtteranceModel.from_domain(l) for l in logs])

    @app.post("/v1/sweep", response_model=SweepResponse)
    def run_sweep(request: SweepRequest) -> SweepResponse:
        logs = [u.to_domain() for u in request.utterances]
        try:
            rows = sweep(
                logs, request.parameter, request.values, request.params.to_domain()
            )
        except (MissingDataError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return SweepResponse(rows=[SweepRowModel.from_domain(r) for r in rows])

    return app


app = create_app()
