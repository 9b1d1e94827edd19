from __future__ import annotations

import random

import pytest

from partialmerge.logio import UtteranceLog
from partialmerge.pipeline import simulate_corpus
from partialmerge.simgen import SimConfig, synth_references


def edit_distance(a: list[str], b: list[str]) -> int:
    """Independent quadratic Levenshtein oracle (deliberately not the library's)."""
    distances = list(range(len(a) + 1))
    for j, tok_b in enumerate(b, start=1):
        next_row = [j]
        for i, tok_a in enumerate(a, start=1):
            if tok_a == tok_b:
                next_row.append(distances[i - 1])
            else:
                next_row.append(1 + min(distances[i - 1], distances[i], next_row[-1]))
        distances = next_row
    return distances[-1]


def best_prefix_cost(x: list[str], y: list[str]) -> tuple[int, int]:
    """Brute force: edit distance of x against every prefix of y, largest tie wins."""
    best_cost = None
    best_j = 0
    for j in range(len(y) + 1):
        cost = edit_distance(x, y[:j])
        if best_cost is None or cost <= best_cost:
            best_cost = cost
            best_j = j
    return best_cost, best_j


def random_tokens(rng: random.Random, max_len: int, alphabet: int = 10) -> list[str]:
    return [f"t{rng.randrange(alphabet)}" for _ in range(rng.randint(0, max_len))]


CORPUS_SEED = 1234
CORPUS_CONFIG = SimConfig(
    causal_word_interval_ms=300,
    cascaded_delay_ms=900,
    causal_error_rate=0.08,
    cascaded_error_rate=0.02,
    seed=CORPUS_SEED,
)


def build_corpus(count: int = 200) -> list[UtteranceLog]:
    references = synth_references(count, seed=CORPUS_SEED, min_words=20, max_words=60)
    return simulate_corpus(references, CORPUS_CONFIG)


@pytest.fixture(scope="session")
def sim_corpus() -> list[UtteranceLog]:
    """The fixed-seed synthetic corpus used by the acceptance checks."""
    return build_corpus(200)


@pytest.fixture(scope="session")
def small_corpus() -> list[UtteranceLog]:
    return build_corpus(12)
