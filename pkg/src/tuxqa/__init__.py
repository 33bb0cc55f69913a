"""tuxqa: answer natural-language questions from an indexed Q&A corpus.

Pipeline: keyword extraction -> field-weighted tf-idf retrieval (top 20) ->
factual/troubleshooting category filter -> root-distance tag-vector re-rank
-> first candidate with a non-empty accepted answer.
"""

from .classify import QueryCategory
from .corpus import Corpus, Post, PostKind, TagCatalog, load_jsonl, load_stackexchange_xml
from .engine import Engine, QueryResult
from .index import TfIdfIndex, build_index

__version__ = "0.1.0"

__all__ = [
    "Corpus",
    "Engine",
    "Post",
    "PostKind",
    "QueryCategory",
    "QueryResult",
    "TagCatalog",
    "TfIdfIndex",
    "build_index",
    "load_jsonl",
    "load_stackexchange_xml",
    "__version__",
]
