"""Tokenization, markup stripping, rule-based POS tagging, and keyword extraction.

Everything here is a pure function over immutable inputs. The tagger is a
deterministic lexicon-plus-suffix tagger: the retrieval pipeline only needs a
coarse content-word/function-word split plus verb identification, so a
statistical tagger would be overkill (and a nondeterminism hazard).
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass, replace
from enum import Enum
from functools import lru_cache
from html.parser import HTMLParser
from importlib import resources
from pathlib import Path


class Pos(Enum):
    NOUN = "noun"
    VERB = "verb"
    ADJECTIVE = "adjective"
    ADVERB = "adverb"
    PRONOUN = "pronoun"
    DETERMINER = "determiner"
    PREPOSITION = "preposition"
    CONJUNCTION = "conjunction"
    NUMBER = "number"
    OTHER = "other"


#: POS classes whose tokens carry content worth indexing. Numbers stay in
#: because version strings ("12.04") are highly discriminative in this domain.
CONTENT_POS = frozenset({Pos.NOUN, Pos.VERB, Pos.ADJECTIVE, Pos.NUMBER})


@dataclass(frozen=True)
class Token:
    """One token: raw surface form, normalized form, POS tag, stream position."""

    surface: str
    normalized: str
    pos: Pos
    index: int


# Punctuation stripped from token edges. '/' is kept so paths like /dev/sda1
# survive; internal characters are never touched ("12.04", "apt-get", "won't").
_STRIP_CHARS = string.punctuation.replace("/", "") + "“”‘’«»…—–¡¿"

_VERSION_RE = re.compile(r"^\d+(\.\d+)*$")

_SENTENCE_SPLIT_RE = re.compile(r"[.?!]+(?=\s|$)")


class _MarkupStripper(HTMLParser):
    """Best-effort HTML stripper that drops <code>/<pre> contents entirely."""

    _SKIP_TAGS = {"code", "pre", "script", "style"}

    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.parts: list[str] = []
        self._skip_depth = 0

    def handle_starttag(self, tag, attrs):
        if tag in self._SKIP_TAGS:
            self._skip_depth += 1
        else:
            self.parts.append(" ")

    def handle_endtag(self, tag):
        if tag in self._SKIP_TAGS and self._skip_depth > 0:
            self._skip_depth -= 1
        else:
            self.parts.append(" ")

    def handle_data(self, data):
        if self._skip_depth == 0:
            self.parts.append(data)


def strip_markup(body: str) -> str:
    """Remove HTML markup from ``body``, dropping code/pre blocks entirely.

    Entities are decoded and whitespace is collapsed. Malformed markup is
    handled by best-effort tag skipping; this never raises.
    """
    parser = _MarkupStripper()
    parser.feed(body)
    parser.close()
    return " ".join("".join(parser.parts).split())


def tokenize(text: str) -> list[Token]:
    """Split ``text`` on whitespace into Tokens with pos=OTHER.

    Leading/trailing punctuation is stripped per token; internal hyphens,
    dots, slashes, and apostrophes are preserved. Tokens that normalize to
    the empty string are dropped; indices are assigned in order.
    """
    tokens = []
    for chunk in text.split():
        normalized = chunk.strip(_STRIP_CHARS).replace("’", "'").casefold()
        if not normalized:
            continue
        tokens.append(Token(chunk, normalized, Pos.OTHER, len(tokens)))
    return tokens


def _data_path(name: str):
    return resources.files("tuxqa.data").joinpath(name)


@lru_cache(maxsize=1)
def default_stopwords() -> frozenset[str]:
    return load_stopwords(_data_path("stopwords.txt"))


def load_stopwords(path) -> frozenset[str]:
    """Load a stopword file: one lowercase word per line, '#' comments ignored."""
    words = set()
    for line in Path(str(path)).read_text(encoding="utf-8").splitlines():
        word = line.strip()
        if word and not word.startswith("#"):
            words.add(word.casefold())
    return frozenset(words)


@lru_cache(maxsize=1)
def default_pos_lexicon() -> dict[str, Pos]:
    return load_pos_lexicon(_data_path("pos_lexicon.csv"))


def load_pos_lexicon(path) -> dict[str, Pos]:
    """Load a "word,pos" lexicon file into a lookup dict."""
    lexicon: dict[str, Pos] = {}
    for line in Path(str(path)).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        word, _, pos_name = line.partition(",")
        lexicon[word.casefold()] = Pos(pos_name.strip())
    return lexicon


def _guess_pos(word: str, lexicon: dict[str, Pos]) -> Pos:
    if word in lexicon:
        return lexicon[word]
    if _VERSION_RE.match(word):
        return Pos.NUMBER
    if word.endswith(("ing", "ed")):
        return Pos.VERB
    if word.endswith("ly"):
        return Pos.ADVERB
    if word.endswith(("tion", "ness")):
        return Pos.NOUN
    return Pos.NOUN


def pos_tag(tokens: list[Token], lexicon: dict[str, Pos] | None = None) -> list[Token]:
    """Assign exactly one POS to every token: lexicon first, then suffix rules,
    defaulting to NOUN. Total on any input; never raises."""
    lex = lexicon if lexicon is not None else default_pos_lexicon()
    return [replace(t, pos=_guess_pos(t.normalized, lex)) for t in tokens]


def extract_keywords(tokens: list[Token], stopwords: frozenset[str] | None = None) -> list[str]:
    """Keep normalized forms of content-POS tokens not in ``stopwords``.

    Order and duplicates are preserved; term frequency matters downstream.
    """
    stop = stopwords if stopwords is not None else default_stopwords()
    return [t.normalized for t in tokens if t.pos in CONTENT_POS and t.normalized not in stop]


def split_sentences(text: str) -> list[str]:
    """Split on ./?/! followed by whitespace or end of string.

    The lookahead keeps version strings like "12.04" intact.
    """
    return [s.strip() for s in _SENTENCE_SPLIT_RE.split(text) if s.strip()]


def first_sentence(text: str) -> str:
    sentences = split_sentences(text)
    return sentences[0] if sentences else ""
