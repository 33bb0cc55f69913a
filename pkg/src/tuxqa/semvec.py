"""Root-distance tag vectors and the fused semantic similarity score.

A sentence's word vector maps each canonical tag it mentions to that tag's
absolute token-index distance from the sentence's root word. The fused score
is cosine(query vector, candidate vector) x tf-idf score.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .corpus import TagCatalog
from .text import Pos, Token

#: Sparse vector: canonical tag -> token distance from the root (>= 1).
WordVector = dict[str, int]


class EmptyInput(ValueError):
    pass


class DomainError(ValueError):
    pass


#: Verbs never chosen as a sentence root; they carry tense, not theme.
AUXILIARIES = frozenset({
    "is", "are", "was", "were", "be", "been", "being", "do", "does", "did",
    "have", "has", "had", "can", "could", "will", "would", "should", "may",
    "might", "must", "won't", "can't", "doesn't", "don't",
})


def find_root(tokens: list[Token], catalog: TagCatalog | None = None) -> int:
    """Heuristic stand-in for a dependency-tree root.

    First non-auxiliary verb; failing that, the first noun that is not itself
    a catalog tag (needs ``catalog``); failing that, index 0. Pluggable: any
    callable with this signature can replace it in the engine.
    """
    if not tokens:
        raise EmptyInput("cannot find the root of an empty token list")
    for token in tokens:
        if token.pos is Pos.VERB and token.normalized not in AUXILIARIES:
            return token.index
    for token in tokens:
        if token.pos is Pos.NOUN:
            if catalog is None or catalog.canonical(token.normalized) is None:
                return token.index
    return 0


def build_word_vector(tokens: list[Token], root: int, catalog: TagCatalog) -> WordVector:
    """Distances of every catalog tag from the root token.

    The root token is excluded even if it is itself a tag; a tag occurring at
    several positions keeps its minimum distance (closest mention is the most
    thematic).
    """
    vector: WordVector = {}
    for token in tokens:
        if token.index == root:
            continue
        tag = catalog.canonical(token.normalized)
        if tag is None:
            continue
        distance = abs(token.index - root)
        if tag not in vector or distance < vector[tag]:
            vector[tag] = distance
    return vector


def cosine(q: WordVector, c: WordVector) -> float:
    """Cosine over shared tags; 0.0 when either vector is empty.

    Sums run in sorted-key order so repeated computation is bit-identical.
    """
    if not q or not c:
        return 0.0
    dot = 0.0
    for tag in sorted(q.keys() & c.keys()):
        dot += q[tag] * c[tag]
    if dot == 0.0:
        return 0.0
    norm_q = math.sqrt(sum(q[t] * q[t] for t in sorted(q)))
    norm_c = math.sqrt(sum(c[t] * c[t] for t in sorted(c)))
    return min(1.0, dot / (norm_q * norm_c))


@dataclass(frozen=True)
class SimilarityScore:
    cosine: float
    tfidf_score: float
    fused: float


def fuse(cosine_value: float, tfidf_score: float) -> SimilarityScore:
    """Combine the semantic cosine with the retrieval score: fused = product."""
    if not 0.0 <= cosine_value <= 1.0:
        raise DomainError(f"cosine {cosine_value} outside [0, 1]")
    if not 0.0 <= tfidf_score <= 1.0:
        raise DomainError(f"tf-idf score {tfidf_score} outside [0, 1]")
    return SimilarityScore(cosine_value, tfidf_score, cosine_value * tfidf_score)
