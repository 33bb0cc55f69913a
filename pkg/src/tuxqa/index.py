"""Field-weighted tf-idf inverted index over the question corpus.

Weighting is the plain baseline: raw term frequency x ln(n_docs / df), with
per-field document frequencies (title and body are scored separately and the
cosines combined as a weighted sum, which beat single-document treatment).
Vectors are L2-normalized, so scoring reduces to dot products over postings.

Float determinism: every sum that feeds a stored or reported score iterates
terms in sorted order, so an independent re-computation that follows the same
convention reproduces scores bit-for-bit.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field

from .corpus import Corpus
from .text import extract_keywords, pos_tag, strip_markup, tokenize

FORMAT_VERSION = 1

FIELDS = ("title", "body")


class EmptyCorpus(ValueError):
    pass


class IndexFormatError(ValueError):
    pass


@dataclass(frozen=True)
class ScoredDoc:
    question_id: int
    tfidf_score: float


@dataclass
class FieldIndex:
    """Per-field statistics: document frequencies and normalized doc vectors."""

    df: dict[str, int] = field(default_factory=dict)
    doc_vectors: dict[int, dict[str, float]] = field(default_factory=dict)
    postings: dict[str, list[tuple[int, float]]] = field(default_factory=dict, repr=False)

    def build_postings(self) -> None:
        self.postings = {}
        for doc_id, vector in self.doc_vectors.items():
            for term, weight in vector.items():
                self.postings.setdefault(term, []).append((doc_id, weight))


@dataclass
class TfIdfIndex:
    n_docs: int
    field_weights: tuple[float, float]  # (title, body), non-negative, sum 1
    fields: dict[str, FieldIndex]

    def to_dict(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "n_docs": self.n_docs,
            "field_weights": list(self.field_weights),
            "fields": {
                name: {
                    "df": fi.df,
                    "doc_vectors": {str(doc_id): vec for doc_id, vec in fi.doc_vectors.items()},
                }
                for name, fi in self.fields.items()
            },
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TfIdfIndex":
        version = data.get("format_version")
        if version != FORMAT_VERSION:
            raise IndexFormatError(
                f"index format version {version!r} unsupported (expected {FORMAT_VERSION})"
            )
        fields = {}
        for name, raw in data["fields"].items():
            fi = FieldIndex(
                df=dict(raw["df"]),
                doc_vectors={int(doc_id): dict(vec) for doc_id, vec in raw["doc_vectors"].items()},
            )
            fi.build_postings()
            fields[name] = fi
        w_title, w_body = data["field_weights"]
        return cls(n_docs=int(data["n_docs"]), field_weights=(w_title, w_body), fields=fields)

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(self.to_dict(), handle, separators=(",", ":"))

    @classmethod
    def load(cls, path) -> "TfIdfIndex":
        with open(path, encoding="utf-8") as handle:
            return cls.from_dict(json.load(handle))


def _check_weights(weights: tuple[float, float]) -> tuple[float, float]:
    w_title, w_body = weights
    if w_title < 0 or w_body < 0 or abs(w_title + w_body - 1.0) > 1e-9:
        raise ValueError(f"field weights must be non-negative and sum to 1, got {weights}")
    return (w_title, w_body)


def _weigh_and_normalize(counts: Counter, df: dict[str, int], n_docs: int) -> dict[str, float]:
    """tf x ln(n/df) per term, L2-normalized; zero vector stays zero."""
    raw = {}
    for term in sorted(counts):
        term_df = df.get(term)
        if term_df is None:
            continue
        raw[term] = counts[term] * math.log(n_docs / term_df)
    norm = math.sqrt(sum(raw[t] * raw[t] for t in sorted(raw)))
    if norm == 0.0:
        return {t: 0.0 for t in raw} if raw else {}
    return {t: w / norm for t, w in raw.items()}


def field_keywords(question, field_name: str, stopwords=None) -> list[str]:
    """Keyword stream for one field of a question; bodies are markup-stripped."""
    text = question.title if field_name == "title" else strip_markup(question.body)
    return extract_keywords(pos_tag(tokenize(text)), stopwords)


def build_index(corpus: Corpus, weights: tuple[float, float] = (0.5, 0.5),
                stopwords=None) -> TfIdfIndex:
    """Index every question's title and body keywords."""
    weights = _check_weights(weights)
    if not corpus.question_ids:
        raise EmptyCorpus("cannot index a corpus with no questions")

    n_docs = corpus.n_questions
    fields: dict[str, FieldIndex] = {}
    for field_name in FIELDS:
        keywords_by_doc = {
            qid: field_keywords(corpus.posts[qid], field_name, stopwords)
            for qid in corpus.question_ids
        }
        df: dict[str, int] = {}
        for keywords in keywords_by_doc.values():
            for term in set(keywords):
                df[term] = df.get(term, 0) + 1
        fi = FieldIndex(df=df)
        for qid, keywords in keywords_by_doc.items():
            fi.doc_vectors[qid] = _weigh_and_normalize(Counter(keywords), df, n_docs)
        fi.build_postings()
        fields[field_name] = fi

    return TfIdfIndex(n_docs=n_docs, field_weights=weights, fields=fields)


def query_vector(index: TfIdfIndex, field_name: str, keywords: list[str]) -> dict[str, float]:
    """Weigh a keyword list against one field's df; unknown terms contribute nothing."""
    fi = index.fields[field_name]
    return _weigh_and_normalize(Counter(keywords), fi.df, index.n_docs)


def _accumulate(fi: FieldIndex, qvec: dict[str, float]) -> dict[int, float]:
    scores: dict[int, float] = {}
    for term in sorted(qvec):
        weight = qvec[term]
        if weight == 0.0:
            continue
        for doc_id, doc_weight in fi.postings.get(term, ()):
            scores[doc_id] = scores.get(doc_id, 0.0) + weight * doc_weight
    return scores


def score_questions(index: TfIdfIndex, keywords: list[str]) -> list[ScoredDoc]:
    """Weighted sum of per-field cosines for every question sharing a term.

    Zero-scoring questions are omitted; results sort by score descending,
    ties by ascending question id.
    """
    w_title, w_body = index.field_weights
    title_dots = _accumulate(index.fields["title"], query_vector(index, "title", keywords))
    body_dots = _accumulate(index.fields["body"], query_vector(index, "body", keywords))

    scored = []
    for qid in title_dots.keys() | body_dots.keys():
        cos_title = min(1.0, max(0.0, title_dots.get(qid, 0.0)))
        cos_body = min(1.0, max(0.0, body_dots.get(qid, 0.0)))
        score = w_title * cos_title + w_body * cos_body
        if score > 0.0:
            scored.append(ScoredDoc(qid, score))
    scored.sort(key=lambda d: (-d.tfidf_score, d.question_id))
    return scored


def top_k(scored: list[ScoredDoc], k: int = 20) -> list[ScoredDoc]:
    """First min(k, len) entries of an already-sorted score list.

    20 is the default cut because lower-ranked retrieval scores are too weak
    to be worth the semantic pass.
    """
    if k <= 0:
        raise ValueError("k must be positive")
    return scored[:k]
