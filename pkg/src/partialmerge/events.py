"""Timestamped recognition-result events shared by the whole package."""

from __future__ import annotations

import enum
from dataclasses import dataclass


class Origin(str, enum.Enum):
    """Which recognizer a result came from."""

    CASCADED = "CASCADED"
    CAUSAL = "CAUSAL"


class ResultKind(str, enum.Enum):
    PARTIAL = "PARTIAL"
    FINAL = "FINAL"


# At equal time_ms the cascaded result is processed first so a causal partial
# always sees the freshest cascaded context; partials sort before finals.
_ORIGIN_PRIORITY = {Origin.CASCADED: 0, Origin.CAUSAL: 1}
_KIND_PRIORITY = {ResultKind.PARTIAL: 0, ResultKind.FINAL: 1}


@dataclass(frozen=True, slots=True)
class ResultEvent:
    """One partial or final result emitted by one stream at one time."""

    time_ms: int
    origin: Origin
    kind: ResultKind
    text: str

    def __post_init__(self) -> None:
        if self.time_ms < 0:
            raise ValueError(f"time_ms must be non-negative, got {self.time_ms}")

    @property
    def sort_key(self) -> tuple[int, int, int]:
        return (self.time_ms, _ORIGIN_PRIORITY[self.origin], _KIND_PRIORITY[self.kind])


def events_in_order(events: list[ResultEvent]) -> bool:
    """True when events are sorted by (time, cascaded-first, partial-first)."""
    keys = [e.sort_key for e in events]
    return all(a <= b for a, b in zip(keys, keys[1:]))
