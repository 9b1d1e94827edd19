"""Levenshtein alignment with a variable causal-side endpoint.

The cascaded hypothesis ``x`` (delayed, higher quality) must be consumed in
full, while the causal hypothesis ``y`` (fresh, lower quality) is consumed
only up to the endpoint ``j*`` that minimizes the cost of the last DP row.
The leftover causal suffix ``y[j*:]`` is what the cascaded model has not
decoded yet, and appending it to ``x`` yields the composite hypothesis.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Sequence


class EditOp(str, enum.Enum):
    """One step of an alignment path.

    INSERT consumes a cascaded token only, DELETE a causal token only;
    CORRECT and SUBSTITUTE consume one of each.
    """

    CORRECT = "C"
    SUBSTITUTE = "S"
    INSERT = "I"
    DELETE = "D"


@dataclass(frozen=True, slots=True)
class AlignmentOutcome:
    """Result of aligning a cascaded sequence against causal prefixes.

    ``last_row`` holds the cost of aligning all of ``x`` against ``y[:j]``
    for every j; ``best_j`` is the cheapest endpoint (ties go to the largest
    j so the appended causal suffix is as short as possible). When the
    alignment ran on windowed suffixes, ``window_offset`` is the number of
    leading tokens that were skipped on both sides, and ``best_j`` and
    ``path`` are relative to the windowed grid.
    """

    last_row: tuple[int, ...]
    best_j: int
    best_cost: int
    path: tuple[EditOp, ...]
    window_offset: int = 0


def lev_align(x: Sequence[str], y: Sequence[str]) -> AlignmentOutcome:
    """Full unit-cost DP of cascaded ``x`` against causal ``y``.

    Either sequence may be empty. The path ends at cell (len(x), best_j);
    on cost ties the backtrace prefers CORRECT/SUBSTITUTE over DELETE over
    INSERT, which keeps outcomes deterministic.
    """
    m, n = len(x), len(y)
    rows: list[list[int]] = [list(range(n + 1))]
    for i in range(1, m + 1):
        prev = rows[i - 1]
        cur = [i] + [0] * n
        xi = x[i - 1]
        for j in range(1, n + 1):
            sub = prev[j - 1] + (0 if xi == y[j - 1] else 1)
            cur[j] = min(sub, prev[j] + 1, cur[j - 1] + 1)
        rows.append(cur)

    last = rows[m]
    best_cost = min(last)
    # Largest endpoint among the minima: consume as much causal as possible.
    best_j = max(j for j, c in enumerate(last) if c == best_cost)

    path = _backtrace(rows, x, y, m, best_j)
    return AlignmentOutcome(
        last_row=tuple(last),
        best_j=best_j,
        best_cost=best_cost,
        path=path,
        window_offset=0,
    )


def _backtrace(
    rows: list[list[int]], x: Sequence[str], y: Sequence[str], i: int, j: int
) -> tuple[EditOp, ...]:
    ops: list[EditOp] = []
    while i > 0 or j > 0:
        cost = rows[i][j]
        if i > 0 and j > 0:
            match = x[i - 1] == y[j - 1]
            if rows[i - 1][j - 1] + (0 if match else 1) == cost:
                ops.append(EditOp.CORRECT if match else EditOp.SUBSTITUTE)
                i -= 1
                j -= 1
                continue
        if j > 0 and rows[i][j - 1] + 1 == cost:
            ops.append(EditOp.DELETE)
            j -= 1
            continue
        ops.append(EditOp.INSERT)
        i -= 1
    ops.reverse()
    return tuple(ops)


def compose(x: Sequence[str], y: Sequence[str], j_star: int) -> list[str]:
    """All of the cascaded tokens followed by the causal suffix past ``j_star``."""
    if not 0 <= j_star <= len(y):
        raise ValueError(f"j_star {j_star} outside [0, {len(y)}]")
    return list(x) + list(y[j_star:])


def windowed_align(x: Sequence[str], y: Sequence[str], window: int) -> AlignmentOutcome:
    """Align only the trailing tokens so each call stays linear-time.

    Skips the first ``P = max(min(m, n) - window, 1)`` tokens of both
    sequences (``P = 0`` when either side is empty, where the formula would
    index out of range). Callers rebuild the composite as
    ``x[:P] + x[P:] + y[P + best_j:]``.
    """
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    if not x or not y:
        offset = 0
    else:
        offset = max(min(len(x), len(y)) - window, 1)
    inner = lev_align(x[offset:], y[offset:])
    return replace(inner, window_offset=offset)


def cost_full(outcome: AlignmentOutcome, m: int) -> float:
    """Full-endpoint alignment cost ratio C(m, n) / m.

    Uses the cost at the rightmost cell of the last row, not at ``best_j``.
    ``m = 0`` disables the statistic (returns 0 so an empty cascaded side
    never blocks rewriting).
    """
    if m == 0:
        return 0.0
    return outcome.last_row[-1] / m


def cost_recent_grid(x: Sequence[str], y: Sequence[str], k: int) -> float:
    """Alignment cost accumulated over the last ``k`` tokens, from the grid.

    (C(m, n) - C(max(m - k, 0), max(n - k, 0))) / min(k, m), with the
    empty-cascaded case disabled to 0 like :func:`cost_full`.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    m, n = len(x), len(y)
    if m == 0:
        return 0.0
    grid = _full_grid(x, y)
    recent = grid[m][n] - grid[max(m - k, 0)][max(n - k, 0)]
    return recent / min(k, m)


def _full_grid(x: Sequence[str], y: Sequence[str]) -> list[list[int]]:
    m, n = len(x), len(y)
    rows = [list(range(n + 1))]
    for i in range(1, m + 1):
        prev = rows[i - 1]
        cur = [i] + [0] * n
        xi = x[i - 1]
        for j in range(1, n + 1):
            sub = prev[j - 1] + (0 if xi == y[j - 1] else 1)
            cur[j] = min(sub, prev[j] + 1, cur[j - 1] + 1)
        rows.append(cur)
    return rows
