"""Tokenization helpers.

The rewriting engine works on word-piece tokens; a leading ``_`` inside a
token marks a word boundary and is compared literally. The evaluation
metrics work on whole words, so they join pieces back together first.
"""

from __future__ import annotations

from typing import Sequence

WORD_MARKER = "_"


def tokenize(text: str) -> list[str]:
    """Split a result text into tokens (one per whitespace-delimited piece)."""
    return text.split()


def detokenize(tokens: Sequence[str]) -> str:
    return " ".join(tokens)


def words_from_pieces(tokens: Sequence[str]) -> list[str]:
    """Join word pieces into whole words at ``_`` boundaries.

    A piece starting with the marker opens a new word; other pieces extend
    the current one. Pieces before the first marker still form a word.
    """
    words: list[str] = []
    for tok in tokens:
        if tok.startswith(WORD_MARKER):
            words.append(tok[len(WORD_MARKER):])
        elif words:
            words[-1] += tok
        else:
            words.append(tok)
    return [w for w in words if w]


def pieces_from_words(words: Sequence[str]) -> list[str]:
    """One single-piece token per word, each carrying the boundary marker."""
    return [WORD_MARKER + w for w in words]


def text_to_words(text: str) -> list[str]:
    return words_from_pieces(tokenize(text))
