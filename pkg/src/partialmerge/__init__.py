"""Composite partial results for two-stream streaming speech recognition.

Merges a low-latency causal partial-result stream with a delayed,
higher-quality cascaded stream via variable-endpoint edit-distance
alignment, and ships the metrics (PWER, partial latency, UPWR) and the
deterministic stream simulator needed to evaluate the merge end to end.
"""

from .align import (
    AlignmentOutcome,
    EditOp,
    compose,
    cost_full,
    cost_recent_grid,
    lev_align,
    windowed_align,
)
from .events import Origin, ResultEvent, ResultKind
from .logio import LogFormatError, LogValidationError, UtteranceLog, read_log, write_log
from .merge import (
    MergeParams,
    MergeState,
    MergeStats,
    create_composite,
    merge_stream,
    process_event,
    rewrite_result,
)
from .metrics import (
    MetricsReport,
    partial_latency,
    partial_prefix_errors,
    pwer,
    upwr,
    upwr_three_way,
    wer,
)
from .simgen import SimConfig, generate_streams, synth_references

__version__ = "0.1.0"

__all__ = [
    "AlignmentOutcome",
    "EditOp",
    "LogFormatError",
    "LogValidationError",
    "MergeParams",
    "MergeState",
    "MergeStats",
    "MetricsReport",
    "Origin",
    "ResultEvent",
    "ResultKind",
    "SimConfig",
    "UtteranceLog",
    "compose",
    "cost_full",
    "cost_recent_grid",
    "create_composite",
    "generate_streams",
    "lev_align",
    "merge_stream",
    "partial_latency",
    "partial_prefix_errors",
    "process_event",
    "pwer",
    "read_log",
    "rewrite_result",
    "synth_references",
    "upwr",
    "upwr_three_way",
    "wer",
    "windowed_align",
    "write_log",
]
