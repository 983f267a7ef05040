"""Words over the symbols {1, *}.

A word of length k encodes a mixed product A^{e1} A^{e2} ... A^{ek} where
each symbol picks either the matrix itself (``1``) or its transpose (``*``).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

SYMBOLS = ("1", "*")


@dataclass(frozen=True)
class Word:
    """Immutable symbol sequence; parses from / prints to a bare string like ``1*1*``."""

    symbols: tuple[str, ...]

    def __post_init__(self):
        if not self.symbols:
            raise ValueError("word must be nonempty")
        bad = [s for s in self.symbols if s not in SYMBOLS]
        if bad:
            raise ValueError(f"invalid word symbols {bad!r}; allowed: '1' and '*'")

    @classmethod
    def from_string(cls, text: str) -> "Word":
        return cls(tuple(text))

    @classmethod
    def alternating(cls, length: int) -> "Word":
        """The word 1*1*... of the given length."""
        if length < 1:
            raise ValueError("length must be >= 1")
        return cls(tuple(SYMBOLS[i % 2] for i in range(length)))

    def __str__(self) -> str:
        return "".join(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __getitem__(self, i: int) -> str:
        return self.symbols[i]

    def reversed_flipped(self) -> "Word":
        """Reverse the word and swap 1 <-> * (the adjoint of the product)."""
        flip = {"1": "*", "*": "1"}
        return Word(tuple(flip[s] for s in reversed(self.symbols)))


def all_words(length: int) -> Iterator[Word]:
    """All 2^length words of the given length, in lexicographic order ('1' < '*')."""
    if length < 1:
        raise ValueError("length must be >= 1")
    for mask in range(2 ** length):
        yield Word(tuple(SYMBOLS[(mask >> (length - 1 - i)) & 1] for i in range(length)))


def as_word(w: "Word | str") -> Word:
    return w if isinstance(w, Word) else Word.from_string(w)
