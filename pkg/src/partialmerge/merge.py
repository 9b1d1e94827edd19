"""Streaming rewriting engine.

Cascaded partials are suppressed and remembered; every causal partial is
rewritten into a composite that adopts the freshest cascaded text whose
alignment cost passes the gates. When the latest cascaded partial is too
far from the causal one, the engine falls back to the last cascaded partial
that was accepted, so rewriting never stops abruptly mid-utterance. Final
results pass through byte-identical.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .align import AlignmentOutcome, EditOp, cost_full, lev_align, windowed_align
from .events import Origin, ResultEvent, ResultKind, events_in_order
from .tokens import detokenize, tokenize

Tokenizer = Callable[[str], list[str]]


@dataclass(frozen=True, slots=True)
class MergeParams:
    """Knobs of the rewriting engine.

    ``window_m=None`` aligns the full sequences; ``math.inf`` thresholds
    disable the corresponding gate. Both gates compare strictly, so a
    threshold of 0 never rewrites and recovers the causal-only stream.
    """

    trim_t: int = 1
    window_m: int | None = 25
    recent_k: int = 10
    rho_r_threshold: float = 0.5
    rho_f_threshold: float = math.inf

    def __post_init__(self) -> None:
        if self.trim_t < 0:
            raise ValueError(f"trim_t must be >= 0, got {self.trim_t}")
        if self.window_m is not None and self.window_m < 1:
            raise ValueError(f"window_m must be >= 1 or None, got {self.window_m}")
        if self.recent_k < 0:
            raise ValueError(f"recent_k must be >= 0, got {self.recent_k}")
        if self.rho_r_threshold < 0 or self.rho_f_threshold < 0:
            raise ValueError("cost thresholds must be >= 0")


@dataclass(frozen=True, slots=True)
class MergeState:
    """Per-utterance hysteresis state; starts empty."""

    latest_cascaded_partial: tuple[str, ...] = ()
    latest_partial_used_for_rewriting: tuple[str, ...] = ()


@dataclass(frozen=True, slots=True)
class CompositeResult:
    composite: list[str]
    recent_cost: float
    full_cost: float
    outcome: AlignmentOutcome | None  # None when the cascaded side was empty


def trim_cascaded(cascaded: Sequence[str], trim_t: int) -> list[str]:
    """Drop the last ``trim_t`` tokens but never below one (empty stays empty)."""
    if not cascaded:
        return []
    return list(cascaded[: max(len(cascaded) - trim_t, 1)])


def compose_with_costs(
    causal: Sequence[str], cascaded: Sequence[str], params: MergeParams
) -> CompositeResult:
    """Build the composite and the two gate statistics in one pass.

    The composite copies the windowed cascaded prefix verbatim, walks the
    alignment path consuming every remaining cascaded token, then appends
    the causal tokens past the best endpoint. The recent cost is computed
    during that walk: over path steps whose cascaded position falls in the
    last ``recent_k`` tokens, it is errors / steps (0 when nothing counted).
    """
    trimmed = trim_cascaded(cascaded, params.trim_t)
    if not trimmed:
        return CompositeResult(list(causal), 0.0, 0.0, None)

    if params.window_m is None:
        outcome = lev_align(trimmed, causal)
    else:
        outcome = windowed_align(trimmed, causal, params.window_m)

    m = len(trimmed)
    offset = outcome.window_offset
    composite = trimmed[:offset]
    jc = offset  # next cascaded token to consume
    ic = offset  # next causal token to consume
    errors = 0
    counted = 0
    recent_floor = m - params.recent_k  # 1-based positions above this count
    for op in outcome.path:
        in_window = jc + 1 > recent_floor
        if op is EditOp.CORRECT or op is EditOp.SUBSTITUTE:
            composite.append(trimmed[jc])
            if in_window:
                counted += 1
                if op is EditOp.SUBSTITUTE:
                    errors += 1
            jc += 1
            ic += 1
        elif op is EditOp.INSERT:
            composite.append(trimmed[jc])
            if in_window:
                counted += 1
                errors += 1
            jc += 1
        else:  # DELETE skips a causal token; still gated by the cascaded position
            if in_window:
                counted += 1
                errors += 1
            ic += 1
    composite.extend(causal[ic:])

    recent_cost = errors / counted if counted else 0.0
    return CompositeResult(composite, recent_cost, cost_full(outcome, m - offset), outcome)


def create_composite(
    causal: Sequence[str], cascaded: Sequence[str], params: MergeParams
) -> tuple[float, list[str]]:
    """Recent path-local cost and composite token sequence."""
    result = compose_with_costs(causal, cascaded, params)
    return result.recent_cost, result.composite


@dataclass(frozen=True, slots=True)
class RewriteOutcome:
    text: str
    state: MergeState
    accepted: bool
    used_fallback: bool
    passthrough: bool  # the chosen cascaded source was empty
    recent_cost: float
    full_cost: float


def attempt_rewrite(
    causal_text: str,
    state: MergeState,
    params: MergeParams,
    tokenizer: Tokenizer = tokenize,
) -> RewriteOutcome:
    """Rewrite one causal partial, falling back to the last accepted cascaded text.

    A rewrite is accepted iff the recent path cost and the full cost are
    each strictly below their thresholds; acceptance records the cascaded
    partial for future fallbacks. When the chosen cascaded source is empty
    the causal text passes through verbatim.
    """
    causal = tokenizer(causal_text)
    result = compose_with_costs(causal, state.latest_cascaded_partial, params)
    accepted = (
        result.recent_cost < params.rho_r_threshold
        and result.full_cost < params.rho_f_threshold
    )
    if accepted:
        new_state = MergeState(
            latest_cascaded_partial=state.latest_cascaded_partial,
            latest_partial_used_for_rewriting=state.latest_cascaded_partial,
        )
        if not state.latest_cascaded_partial:
            return RewriteOutcome(
                causal_text, new_state, True, False, True,
                result.recent_cost, result.full_cost,
            )
        return RewriteOutcome(
            detokenize(result.composite), new_state, True, False, False,
            result.recent_cost, result.full_cost,
        )

    if not state.latest_partial_used_for_rewriting:
        return RewriteOutcome(
            causal_text, state, False, False, True,
            result.recent_cost, result.full_cost,
        )
    fallback = compose_with_costs(
        causal, state.latest_partial_used_for_rewriting, params
    )
    return RewriteOutcome(
        detokenize(fallback.composite), state, False, True, False,
        result.recent_cost, result.full_cost,
    )


def rewrite_result(
    causal_text: str,
    state: MergeState,
    params: MergeParams,
    tokenizer: Tokenizer = tokenize,
) -> tuple[str, MergeState]:
    outcome = attempt_rewrite(causal_text, state, params, tokenizer)
    return outcome.text, outcome.state


def process_event(
    event: ResultEvent,
    state: MergeState,
    params: MergeParams,
    tokenizer: Tokenizer = tokenize,
) -> tuple[ResultEvent | None, MergeState]:
    """One step of the streaming loop.

    Cascaded partials are suppressed (only remembered), causal partials are
    rewritten and re-emitted at the same time_ms, and the cascaded final is
    passed through unchanged. A final from the causal stream is rejected:
    only the cascaded model produces finals in this architecture.
    """
    if event.kind is ResultKind.FINAL:
        if event.origin is not Origin.CASCADED:
            raise ValueError("FINAL results must come from the CASCADED stream")
        return event, state

    if event.origin is Origin.CASCADED:
        new_state = MergeState(
            latest_cascaded_partial=tuple(tokenizer(event.text)),
            latest_partial_used_for_rewriting=state.latest_partial_used_for_rewriting,
        )
        return None, new_state

    text, new_state = rewrite_result(event.text, state, params, tokenizer)
    emitted = ResultEvent(
        time_ms=event.time_ms, origin=event.origin, kind=ResultKind.PARTIAL, text=text
    )
    return emitted, new_state


@dataclass(slots=True)
class MergeStats:
    """Per-utterance rewrite accounting collected while merging."""

    causal_partials: int = 0
    cascaded_partials: int = 0
    accepted: int = 0
    rejected: int = 0
    fallback_rewrites: int = 0
    passthroughs: int = 0
    finals: int = 0
    rewrite_times_ms: list[float] = field(default_factory=list)

    @property
    def mean_rewrite_ms(self) -> float | None:
        if not self.rewrite_times_ms:
            return None
        return sum(self.rewrite_times_ms) / len(self.rewrite_times_ms)


def merge_events(
    events: Sequence[ResultEvent],
    params: MergeParams,
    tokenizer: Tokenizer = tokenize,
) -> tuple[list[ResultEvent], MergeStats]:
    """Drive :func:`process_event` over a whole utterance, collecting stats.

    Input events must already be sorted by (time, cascaded-first,
    partial-first); unsorted input is rejected rather than re-sorted.
    """
    if not events_in_order(list(events)):
        raise ValueError("events are not in (time_ms, origin, kind) order")
    finals = [e for e in events if e.kind is ResultKind.FINAL]
    if len(finals) > 1:
        raise ValueError(f"expected at most one FINAL event, got {len(finals)}")

    state = MergeState()
    output: list[ResultEvent] = []
    stats = MergeStats()
    for event in events:
        if event.kind is ResultKind.FINAL:
            stats.finals += 1
        elif event.origin is Origin.CASCADED:
            stats.cascaded_partials += 1
        else:
            stats.causal_partials += 1
            started = time.perf_counter()
            outcome = attempt_rewrite(event.text, state, params, tokenizer)
            stats.rewrite_times_ms.append((time.perf_counter() - started) * 1e3)
            if outcome.accepted:
                stats.accepted += 1
            else:
                stats.rejected += 1
            if outcome.used_fallback:
                stats.fallback_rewrites += 1
            if outcome.passthrough:
                stats.passthroughs += 1
            output.append(
                ResultEvent(event.time_ms, event.origin, ResultKind.PARTIAL, outcome.text)
            )
            state = outcome.state
            continue
        emitted, state = process_event(event, state, params, tokenizer)
        if emitted is not None:
            output.append(emitted)
    return output, stats


def merge_stream(
    events: Sequence[ResultEvent],
    params: MergeParams,
    tokenizer: Tokenizer = tokenize,
) -> list[ResultEvent]:
    """Merged event stream: one partial per causal partial plus the final."""
    merged, _ = merge_events(events, params, tokenizer)
    return merged
