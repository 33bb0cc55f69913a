"""Factual vs. troubleshooting query classification.

The rule: a query is Troubleshooting iff it contains a negation marker or a
negative-sense word, else Factual. Negation is detected lexically (marker set
plus the "n't" clitic) rather than via a dependency parse; the contract is a
boolean over tokens, so a parser-backed detector can be swapped in later.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .text import Token


class QueryCategory(str, Enum):
    FACTUAL = "factual"
    TROUBLESHOOTING = "troubleshooting"


NEGATION_MARKERS = frozenset({
    "not", "no", "never", "cannot", "can't", "won't", "doesn't", "don't",
    "didn't", "isn't", "aren't", "wasn't", "couldn't", "shouldn't",
    "wouldn't", "n't", "nothing", "none", "neither", "nor", "unable",
})


@dataclass(frozen=True)
class NegativeLexicon:
    """Set of lowercase negative-sense words; non-empty, no whitespace inside."""

    words: frozenset[str]

    def __post_init__(self):
        if not self.words:
            raise ValueError("negative lexicon must be non-empty")
        for word in self.words:
            if word != word.casefold() or any(c.isspace() for c in word):
                raise ValueError(f"bad lexicon entry {word!r}")


def load_negative_lexicon(path=None) -> NegativeLexicon:
    """Load negative_words.txt (one lowercase word per line, '#' comments)."""
    if path is None:
        path = resources.files("tuxqa.data").joinpath("negative_words.txt")
    words = set()
    for line in Path(str(path)).read_text(encoding="utf-8").splitlines():
        word = line.strip()
        if word and not word.startswith("#"):
            words.add(word)
    return NegativeLexicon(frozenset(words))


@lru_cache(maxsize=1)
def default_negative_lexicon() -> NegativeLexicon:
    return load_negative_lexicon()


def detect_negation(tokens: list[Token]) -> bool:
    """True iff any token is a negation marker or carries the "n't" clitic."""
    return any(
        t.normalized in NEGATION_MARKERS or t.normalized.endswith("n't")
        for t in tokens
    )


def contains_negative_word(tokens: list[Token], lexicon: NegativeLexicon) -> bool:
    return any(t.normalized in lexicon.words for t in tokens)


def classify(tokens: list[Token], lexicon: NegativeLexicon) -> QueryCategory:
    if detect_negation(tokens) or contains_negative_word(tokens, lexicon):
        return QueryCategory.TROUBLESHOOTING
    return QueryCategory.FACTUAL
