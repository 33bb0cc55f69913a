"""Independent reference implementations used to cross-check the real ones.

The tf-idf oracle re-derives every score with a direct double loop (no
inverted index, no reuse of the index module). The pipeline oracle re-runs
the whole query flow straight-line, recomputing candidate categories and
word vectors from scratch instead of using the engine's caches.

Both follow the same summation convention as the production code (terms in
sorted order) so that equality can be asserted exactly, not approximately.
"""

from __future__ import annotations

import math
from collections import Counter

from tuxqa.classify import classify
from tuxqa.semvec import build_word_vector, cosine, find_root, fuse
from tuxqa.text import (
    default_stopwords,
    extract_keywords,
    first_sentence,
    pos_tag,
    strip_markup,
    tokenize,
)


def field_text(post, field_name):
    return post.title if field_name == "title" else strip_markup(post.body)


def keywords_of(text, stopwords):
    return extract_keywords(pos_tag(tokenize(text)), stopwords)


def brute_field_stats(corpus, field_name, stopwords):
    """(df, per-doc keyword Counters) for one field, computed directly."""
    counters = {}
    for qid in corpus.question_ids:
        counters[qid] = Counter(keywords_of(field_text(corpus.posts[qid], field_name), stopwords))
    df = Counter()
    for counter in counters.values():
        for term in counter:
            df[term] += 1
    return df, counters


def normalize(weights):
    norm = math.sqrt(sum(weights[t] * weights[t] for t in sorted(weights)))
    if norm == 0.0:
        return {t: 0.0 for t in weights}
    return {t: w / norm for t, w in weights.items()}


def tfidf_vector(counts, df, n_docs):
    raw = {}
    for term in sorted(counts):
        if term in df:
            raw[term] = counts[term] * math.log(n_docs / df[term])
    return normalize(raw)


def dot(a, b):
    total = 0.0
    for term in sorted(a):
        if term in b:
            total += a[term] * b[term]
    return total


def brute_corpus_stats(corpus, stopwords=None):
    """Per-field (df, normalized doc vectors), computed once per corpus."""
    stopwords = stopwords if stopwords is not None else default_stopwords()
    n_docs = corpus.n_questions
    stats = {}
    for field_name in ("title", "body"):
        df, counters = brute_field_stats(corpus, field_name, stopwords)
        doc_vectors = {qid: tfidf_vector(counts, df, n_docs) for qid, counts in counters.items()}
        stats[field_name] = (df, doc_vectors)
    return stats


def brute_scores_from_stats(corpus, stats, keywords, weights=(0.5, 0.5)):
    n_docs = corpus.n_questions
    w_title, w_body = weights
    query_vectors = {
        field_name: tfidf_vector(Counter(keywords), df, n_docs)
        for field_name, (df, _) in stats.items()
    }
    results = []
    for qid in corpus.question_ids:
        cos_title = min(1.0, max(0.0, dot(query_vectors["title"], stats["title"][1][qid])))
        cos_body = min(1.0, max(0.0, dot(query_vectors["body"], stats["body"][1][qid])))
        score = w_title * cos_title + w_body * cos_body
        if score > 0.0:
            results.append((qid, score))
    results.sort(key=lambda pair: (-pair[1], pair[0]))
    return results


def brute_scores(corpus, keywords, weights=(0.5, 0.5), stopwords=None):
    """All question scores for a keyword query: list of (qid, score), sorted."""
    stats = brute_corpus_stats(corpus, stopwords)
    return brute_scores_from_stats(corpus, stats, keywords, weights)


def run_pipeline(corpus, catalog, query_text, k=20, weights=(0.5, 0.5),
                 stopwords=None, lexicon=None):
    """Straight-line re-implementation of answer_query.

    Returns (query_category, selected_ids_or_None, candidate rows, fallback_steps)
    where each candidate row is (qid, tfidf, cosine, fused, category).
    """
    from tuxqa.classify import default_negative_lexicon

    stopwords = stopwords if stopwords is not None else default_stopwords()
    lexicon = lexicon or default_negative_lexicon()

    tokens = pos_tag(tokenize(query_text.strip()))
    keywords = extract_keywords(tokens, stopwords)
    top = brute_scores(corpus, keywords, weights, stopwords)[:k]

    query_category = classify(tokens, lexicon)

    def title_category(qid):
        return classify(pos_tag(tokenize(corpus.posts[qid].title)), lexicon)

    def title_vector(qid):
        sent_tokens = pos_tag(tokenize(first_sentence(corpus.posts[qid].title)))
        if not sent_tokens:
            return {}
        return build_word_vector(sent_tokens, find_root(sent_tokens, catalog), catalog)

    candidates = [(qid, score, title_category(qid), title_vector(qid)) for qid, score in top]
    retained = [c for c in candidates if c[2] is query_category] or candidates

    query_tokens = pos_tag(tokenize(first_sentence(query_text.strip())))
    if query_tokens:
        query_vector = build_word_vector(query_tokens, find_root(query_tokens, catalog), catalog)
    else:
        query_vector = {}

    rows = []
    for qid, tfidf, category, vector in retained:
        score = fuse(cosine(query_vector, vector), tfidf)
        rows.append((qid, tfidf, score.cosine, score.fused, category))
    rows.sort(key=lambda row: (-row[3], -row[1], row[0]))

    selected = None
    fallback_steps = len(rows)
    for position, row in enumerate(rows):
        answer = corpus.answer_of(row[0])
        if answer is not None:
            selected = (row[0], answer.id)
            fallback_steps = position
            break
    return query_category, selected, rows, fallback_steps
