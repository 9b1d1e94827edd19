"""Deterministic generator of paired causal/cascaded partial-result streams.

Given a reference transcript, emits the event log a two-recognizer setup
would produce: the causal stream reveals one (possibly corrupted) word per
pacing interval, the cascaded stream reveals the same timeline delayed and
with a lower error rate, and a single final carries the full cascaded
hypothesis. Corruption is a pure function of (seed, utterance, stream,
word index), so logs are byte-identical across runs and each stream's own
partials grow without self-flicker unless that is explicitly disabled.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .events import Origin, ResultEvent, ResultKind
from .tokens import detokenize, pieces_from_words


@dataclass(frozen=True, slots=True)
class SimConfig:
    causal_word_interval_ms: int = 300
    causal_jitter_ms: int = 0
    cascaded_delay_ms: int = 900
    causal_error_rate: float = 0.08
    cascaded_error_rate: float = 0.02
    error_mix: tuple[float, float, float] = (0.8, 0.1, 0.1)  # substitute, delete, insert
    monotone: bool = True
    seed: int = 0

    def __post_init__(self) -> None:
        if self.causal_word_interval_ms <= 0:
            raise ValueError("causal_word_interval_ms must be positive")
        if self.causal_jitter_ms < 0 or self.cascaded_delay_ms < 0:
            raise ValueError("jitter and delay must be non-negative")
        for rate in (self.causal_error_rate, self.cascaded_error_rate):
            if not 0.0 <= rate <= 1.0:
                raise ValueError(f"error rates must be in [0, 1], got {rate}")
        if len(self.error_mix) != 3 or any(p < 0 for p in self.error_mix):
            raise ValueError("error_mix needs three non-negative weights")
        if abs(sum(self.error_mix) - 1.0) > 1e-9:
            raise ValueError("error_mix must sum to 1")


def _rng(seed: int, *scope: object) -> random.Random:
    # String seeding hashes via sha512, so draws are stable across runs
    # and platforms and independent of PYTHONHASHSEED.
    return random.Random("|".join(str(part) for part in (seed, *scope)))


def _perturb(word: str, rng: random.Random) -> str:
    """Deterministically alter one character, always producing a new word."""
    pos = rng.randrange(len(word))
    old = word[pos]
    alphabet = "abcdefghijklmnopqrstuvwxyz"
    choices = [c for c in alphabet if c != old] or ["x"]
    return word[:pos] + rng.choice(choices) + word[pos:][1:]


def _corrupt_word(
    word: str, rate: float, config: SimConfig, *scope: object
) -> list[str]:
    """Expansion of one reference word in one stream's hypothesis."""
    rng = _rng(config.seed, *scope)
    if rng.random() >= rate:
        return [word]
    p_sub, p_del, _ = config.error_mix
    draw = rng.random()
    if draw < p_sub:
        return [_perturb(word, rng)]
    if draw < p_sub + p_del:
        return []
    return [word, _perturb(word, rng)]


@dataclass(slots=True)
class GeneratedStreams:
    events: list[ResultEvent]
    causal_hypothesis: str
    cascaded_hypothesis: str


def generate_streams(
    reference: list[str], config: SimConfig, utterance_id: str = "utt-0000"
) -> GeneratedStreams:
    """Event log for one utterance plus each stream's full hypothesis text.

    Word i is spoken at i * interval (plus optional jitter on the causal
    side, clamped so times never decrease). The cascaded stream reveals
    word i only delay ms after it was spoken, and the final fires when the
    delayed view covers the whole utterance.
    """
    if not reference:
        raise ValueError("reference must contain at least one word")

    def hypothesis(stream: str, rate: float, upto: int, emission: object) -> list[str]:
        words: list[str] = []
        for idx in range(upto):
            if config.monotone:
                scope: tuple[object, ...] = (utterance_id, stream, idx)
            else:
                scope = (utterance_id, stream, emission, idx)
            words.extend(_corrupt_word(reference[idx], rate, config, *scope))
        return words

    n = len(reference)
    spoken_at = [(i + 1) * config.causal_word_interval_ms for i in range(n)]

    causal_times: list[int] = []
    for i, base in enumerate(spoken_at):
        jitter = 0
        if config.causal_jitter_ms:
            jitter = _rng(config.seed, utterance_id, "jitter", i).randint(
                -config.causal_jitter_ms, config.causal_jitter_ms
            )
        t = max(base + jitter, 0)
        if causal_times and t < causal_times[-1]:
            t = causal_times[-1]
        causal_times.append(t)

    events: list[ResultEvent] = []
    for i in range(n):
        words = hypothesis("causal", config.causal_error_rate, i + 1, i)
        events.append(
            ResultEvent(
                time_ms=causal_times[i],
                origin=Origin.CAUSAL,
                kind=ResultKind.PARTIAL,
                text=detokenize(pieces_from_words(words)),
            )
        )
    for i in range(n - 1):
        words = hypothesis("cascaded", config.cascaded_error_rate, i + 1, i)
        events.append(
            ResultEvent(
                time_ms=spoken_at[i] + config.cascaded_delay_ms,
                origin=Origin.CASCADED,
                kind=ResultKind.PARTIAL,
                text=detokenize(pieces_from_words(words)),
            )
        )

    causal_full = hypothesis("causal", config.causal_error_rate, n, n - 1)
    cascaded_full = hypothesis("cascaded", config.cascaded_error_rate, n, "final")
    causal_text = detokenize(pieces_from_words(causal_full))
    cascaded_text = detokenize(pieces_from_words(cascaded_full))
    events.append(
        ResultEvent(
            time_ms=spoken_at[-1] + config.cascaded_delay_ms,
            origin=Origin.CASCADED,
            kind=ResultKind.FINAL,
            text=cascaded_text,
        )
    )
    events.sort(key=lambda e: e.sort_key)
    return GeneratedStreams(events, causal_text, cascaded_text)


_VOCABULARY = (
    "the be to of and a in that have it for not on with he as you do at this "
    "but his by from they we say her she or an will my one all would there "
    "their what so up out if about who get which go me when make can like "
    "time no just him know take people into year your good some could them "
    "see other than then now look only come its over think also back after "
    "use two how our work first well way even new want because any these "
    "give day most us water long find here thing every under while might "
    "house world school still try last ask need too feel three state never "
    "become between high really something another much family own leave "
    "put old keep let great same big group begin seem country help talk where "
    "turn problem start hand show part against place such again few case "
    "week company system each right program hear question during play run "
    "small number off always move night live point believe hold today bring "
    "happen next without before large million must home room area"
).split()


def synth_references(
    count: int, seed: int = 0, min_words: int = 20, max_words: int = 60
) -> list[tuple[str, list[str]]]:
    """Deterministic synthetic reference transcripts for desk-scale corpora."""
    if count < 1 or min_words < 1 or max_words < min_words:
        raise ValueError("invalid corpus shape")
    references = []
    for i in range(count):
        rng = random.Random(f"ref|{seed}|{i}")
        length = rng.randint(min_words, max_words)
        words = [rng.choice(_VOCABULARY) for _ in range(length)]
        references.append((f"utt-{i:04d}", words))
    return references
