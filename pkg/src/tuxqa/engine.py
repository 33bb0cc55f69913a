"""Query pipeline: keywords -> top-K tf-idf candidates -> category filter ->
root-distance semantic re-rank -> first candidate with a non-empty answer.

An Engine is immutable once built; answer_query is reentrant. Candidate
categories and word vectors depend only on the question titles, so they are
precomputed at build time.
"""

from __future__ import annotations

import gzip
import json
import time
from dataclasses import dataclass, field, replace

from . import index as index_mod
from .classify import NegativeLexicon, QueryCategory, classify, default_negative_lexicon
from .corpus import Corpus, Post, TagCatalog, corpus_from_posts, post_from_dict, post_to_dict
from .semvec import SimilarityScore, WordVector, build_word_vector, cosine, find_root, fuse
from .text import default_stopwords, extract_keywords, first_sentence, pos_tag, tokenize

BUNDLE_FORMAT_VERSION = 1


class EngineError(ValueError):
    pass


class EmptyQuery(EngineError):
    pass


class IndexNotBuilt(EngineError):
    pass


class BundleFormatError(EngineError):
    pass


@dataclass(frozen=True)
class Candidate:
    question_id: int
    tfidf_score: float
    category: QueryCategory
    word_vector: WordVector
    score: SimilarityScore | None = None


@dataclass
class QueryResult:
    query_category: QueryCategory
    selected: tuple[Post, Post] | None  # (question, accepted answer)
    candidates: list[Candidate]
    fallback_steps: int
    timings: dict[str, float] = field(default_factory=dict)


def filter_by_category(candidates: list[Candidate], query_category: QueryCategory) -> list[Candidate]:
    """Keep candidates matching the query's category.

    Falls back to the unfiltered list when nothing matches: a degraded answer
    beats no answer.
    """
    matching = [c for c in candidates if c.category is query_category]
    return matching if matching else list(candidates)


def rank(candidates: list[Candidate]) -> list[Candidate]:
    """Fused score descending, ties by tf-idf descending, then ascending id."""
    return sorted(
        candidates,
        key=lambda c: (-c.score.fused, -c.tfidf_score, c.question_id),
    )


class Engine:
    def __init__(self, corpus: Corpus, catalog: TagCatalog,
                 tfidf_index: index_mod.TfIdfIndex | None,
                 stopwords=None, negative_lexicon: NegativeLexicon | None = None,
                 root_finder=find_root):
        self.corpus = corpus
        self.catalog = catalog
        self.index = tfidf_index
        self.stopwords = stopwords if stopwords is not None else default_stopwords()
        self.negative_lexicon = negative_lexicon or default_negative_lexicon()
        self.root_finder = root_finder
        self._question_category: dict[int, QueryCategory] = {}
        self._question_vector: dict[int, WordVector] = {}
        for qid in corpus.question_ids:
            category, vector = self._analyze_title(corpus.posts[qid].title)
            self._question_category[qid] = category
            self._question_vector[qid] = vector

    @classmethod
    def build(cls, corpus: Corpus, catalog: TagCatalog | None = None,
              weights: tuple[float, float] = (0.5, 0.5), stopwords=None,
              negative_lexicon: NegativeLexicon | None = None) -> "Engine":
        if catalog is None:
            catalog = TagCatalog.from_corpus(corpus)
        tfidf_index = index_mod.build_index(corpus, weights, stopwords)
        return cls(corpus, catalog, tfidf_index, stopwords, negative_lexicon)

    def _analyze_title(self, title: str) -> tuple[QueryCategory, WordVector]:
        tokens = pos_tag(tokenize(title))
        category = classify(tokens, self.negative_lexicon)
        vector = self._sentence_vector(title)
        return category, vector

    def _sentence_vector(self, text: str) -> WordVector:
        """Word vector of the first sentence; empty when nothing tokenizes."""
        tokens = pos_tag(tokenize(first_sentence(text)))
        if not tokens:
            return {}
        root = self.root_finder(tokens, self.catalog)
        return build_word_vector(tokens, root, self.catalog)

    def question_category(self, question_id: int) -> QueryCategory:
        return self._question_category[question_id]

    def question_vector(self, question_id: int) -> WordVector:
        return self._question_vector[question_id]

    def retrieve(self, query_text: str) -> list[index_mod.ScoredDoc]:
        """IR stage only: full sorted tf-idf score list for a query."""
        if self.index is None:
            raise IndexNotBuilt("engine has no index")
        tokens = pos_tag(tokenize(query_text))
        keywords = extract_keywords(tokens, self.stopwords)
        return index_mod.score_questions(self.index, keywords)

    def answer_query(self, query_text: str, k: int = 20) -> QueryResult:
        if self.index is None:
            raise IndexNotBuilt("engine has no index")
        query_text = query_text.strip()
        if not query_text:
            raise EmptyQuery("query is empty")

        t_start = time.perf_counter()
        tokens = pos_tag(tokenize(query_text))
        keywords = extract_keywords(tokens, self.stopwords)
        t_tokenized = time.perf_counter()

        scored = index_mod.score_questions(self.index, keywords)
        top = index_mod.top_k(scored, k)
        t_retrieved = time.perf_counter()

        query_category = classify(tokens, self.negative_lexicon)
        candidates = [
            Candidate(
                question_id=doc.question_id,
                tfidf_score=doc.tfidf_score,
                category=self._question_category[doc.question_id],
                word_vector=self._question_vector[doc.question_id],
            )
            for doc in top
        ]
        retained = filter_by_category(candidates, query_category)
        t_classified = time.perf_counter()

        query_vector = self._sentence_vector(query_text)
        fused = [
            replace(c, score=fuse(cosine(query_vector, c.word_vector), c.tfidf_score))
            for c in retained
        ]
        ranked = rank(fused)
        t_semantic = time.perf_counter()

        selected = None
        fallback_steps = len(ranked)
        for position, candidate in enumerate(ranked):
            answer = self.corpus.answer_of(candidate.question_id)
            if answer is not None:
                selected = (self.corpus.posts[candidate.question_id], answer)
                fallback_steps = position
                break
        t_done = time.perf_counter()

        timings = {
            "tokenize_ms": (t_tokenized - t_start) * 1000,
            "retrieve_ms": (t_retrieved - t_tokenized) * 1000,
            "classify_ms": (t_classified - t_retrieved) * 1000,
            "semantic_ms": (t_semantic - t_classified) * 1000,
            "select_ms": (t_done - t_semantic) * 1000,
            "total_ms": (t_done - t_start) * 1000,
        }
        return QueryResult(query_category, selected, ranked, fallback_steps, timings)

    # -- persistence ---------------------------------------------------------
    # The bundle embeds corpus, catalog, and index so `tuxqa query <bundle>`
    # needs no other files.

    def save(self, path) -> None:
        if self.index is None:
            raise IndexNotBuilt("refusing to save an engine without an index")
        bundle = {
            "format_version": BUNDLE_FORMAT_VERSION,
            "posts": [post_to_dict(p) for p in self.corpus.posts.values()],
            "catalog": {
                "tags": sorted(self.catalog.canonical_tags),
                "synonyms": dict(sorted(self.catalog.synonyms.items())),
            },
            "index": self.index.to_dict(),
        }
        with gzip.open(path, "wt", encoding="utf-8") as handle:
            json.dump(bundle, handle, separators=(",", ":"))

    @classmethod
    def load(cls, path) -> "Engine":
        with gzip.open(path, "rt", encoding="utf-8") as handle:
            bundle = json.load(handle)
        version = bundle.get("format_version")
        if version != BUNDLE_FORMAT_VERSION:
            raise BundleFormatError(
                f"bundle format version {version!r} unsupported (expected {BUNDLE_FORMAT_VERSION})"
            )
        corpus = corpus_from_posts([post_from_dict(obj) for obj in bundle["posts"]])
        catalog = TagCatalog(bundle["catalog"]["tags"], bundle["catalog"]["synonyms"])
        tfidf_index = index_mod.TfIdfIndex.from_dict(bundle["index"])
        return cls(corpus, catalog, tfidf_index)
