"""Corpus loading and validation: Q&A posts, tag catalog, duplicate pairs.

Loaders fail fast: any invariant violation rejects the whole file, so
downstream evaluation never silently depends on dropped records. Corpus and
TagCatalog are immutable after load and safe for concurrent reads.
"""

from __future__ import annotations

import json
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .text import strip_markup


class CorpusError(ValueError):
    """Base for corpus file problems."""


class ParseError(CorpusError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class InvariantError(CorpusError):
    def __init__(self, post_id: int | None, reason: str, line: int | None = None):
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"post {post_id}: {reason}{where}")
        self.post_id = post_id
        self.reason = reason
        self.line = line


class UnknownQuestion(CorpusError):
    def __init__(self, question_id: int):
        super().__init__(f"no question with id {question_id}")
        self.question_id = question_id


class PostKind(str, Enum):
    QUESTION = "question"
    ANSWER = "answer"


@dataclass
class Post:
    id: int
    kind: PostKind
    title: str
    body: str
    tags: list[str]
    score: int = 0
    accepted_answer_id: int | None = None
    parent_id: int | None = None


@dataclass
class DuplicatePair:
    duplicate_question_id: int
    original_question_id: int


@dataclass
class Corpus:
    """Validated, id-keyed post collection. Do not mutate after load."""

    posts: dict[int, Post] = field(default_factory=dict)
    question_ids: list[int] = field(default_factory=list)

    @property
    def n_questions(self) -> int:
        return len(self.question_ids)

    def post(self, post_id: int) -> Post:
        return self.posts[post_id]

    def question(self, question_id: int) -> Post:
        post = self.posts.get(question_id)
        if post is None or post.kind is not PostKind.QUESTION:
            raise UnknownQuestion(question_id)
        return post

    def questions(self):
        return (self.posts[qid] for qid in self.question_ids)

    def answer_of(self, question_id: int) -> Post | None:
        """The accepted answer, or None when absent or effectively empty.

        "Effectively empty" means the body contains nothing after stripping
        markup and trimming whitespace (e.g. "<p> </p>").
        """
        question = self.question(question_id)
        if question.accepted_answer_id is None:
            return None
        answer = self.posts.get(question.accepted_answer_id)
        if answer is None:
            return None
        if not strip_markup(answer.body).strip():
            return None
        return answer


def _validate(posts: list[tuple[int, Post]]) -> Corpus:
    """Cross-record validation; raises InvariantError on the first violation."""
    by_id: dict[int, Post] = {}
    lines: dict[int, int] = {}
    for line, post in posts:
        if post.id <= 0:
            raise InvariantError(post.id, "id must be a positive integer", line)
        if post.id in by_id:
            raise InvariantError(post.id, "duplicate post id", line)
        if post.kind is PostKind.QUESTION:
            if post.parent_id is not None:
                raise InvariantError(post.id, "question must not have parent_id", line)
        else:
            if post.parent_id is None:
                raise InvariantError(post.id, "answer must have parent_id", line)
            if post.title:
                raise InvariantError(post.id, "answer must have empty title", line)
            if post.tags:
                raise InvariantError(post.id, "answer must have no tags", line)
            if post.accepted_answer_id is not None:
                raise InvariantError(post.id, "answer must not have accepted_answer_id", line)
        by_id[post.id] = post
        lines[post.id] = line

    for post in by_id.values():
        if post.kind is PostKind.QUESTION and post.accepted_answer_id is not None:
            answer = by_id.get(post.accepted_answer_id)
            if answer is None:
                raise InvariantError(
                    post.id,
                    f"dangling accepted_answer_id {post.accepted_answer_id}",
                    lines[post.id],
                )
            if answer.kind is not PostKind.ANSWER or answer.parent_id != post.id:
                raise InvariantError(
                    post.id,
                    f"accepted_answer_id {post.accepted_answer_id} is not an answer to this question",
                    lines[post.id],
                )

    question_ids = [p.id for _, p in posts if p.kind is PostKind.QUESTION]
    return Corpus(posts={p.id: p for _, p in posts}, question_ids=question_ids)


def post_from_dict(obj: dict) -> Post:
    """Build a Post from a JSONL-schema dict; raises ValueError on bad fields."""
    try:
        kind = PostKind(obj["kind"])
        tags = obj["tags"]
        if not isinstance(tags, list) or not all(isinstance(t, str) for t in tags):
            raise ValueError("tags must be a list of strings")
        return Post(
            id=int(obj["id"]),
            kind=kind,
            title=str(obj["title"]),
            body=str(obj["body"]),
            tags=[t.casefold() for t in tags],
            score=int(obj["score"]),
            accepted_answer_id=(None if obj.get("accepted_answer_id") is None
                                else int(obj["accepted_answer_id"])),
            parent_id=(None if obj.get("parent_id") is None else int(obj["parent_id"])),
        )
    except KeyError as exc:
        raise ValueError(f"missing field {exc.args[0]!r}") from exc


def post_to_dict(post: Post) -> dict:
    obj = {
        "id": post.id,
        "kind": post.kind.value,
        "title": post.title,
        "body": post.body,
        "tags": post.tags,
    }
    if post.accepted_answer_id is not None:
        obj["accepted_answer_id"] = post.accepted_answer_id
    if post.parent_id is not None:
        obj["parent_id"] = post.parent_id
    obj["score"] = post.score
    return obj


def corpus_from_posts(posts: list[Post]) -> Corpus:
    """Validate an in-memory post list into a Corpus (positions as line numbers)."""
    return _validate(list(enumerate(posts, start=1)))


def load_jsonl(path) -> Corpus:
    """Load a corpus from a JSONL file (one Post object per line)."""
    posts: list[tuple[int, Post]] = []
    with open(path, encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            if not raw.strip():
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise ParseError(line_no, f"invalid JSON: {exc.msg}") from exc
            try:
                posts.append((line_no, post_from_dict(obj)))
            except (TypeError, ValueError) as exc:
                raise ParseError(line_no, str(exc)) from exc
    return _validate(posts)


def save_jsonl(corpus: Corpus, path) -> None:
    """Write a corpus back out in the JSONL schema; load_jsonl round-trips it."""
    with open(path, "w", encoding="utf-8") as handle:
        for post in corpus.posts.values():
            handle.write(json.dumps(post_to_dict(post), ensure_ascii=False) + "\n")


_TAG_LIST_RE = re.compile(r"<([^<>]+)>")


def load_stackexchange_xml(path) -> Corpus:
    """Load a Stack Exchange Posts.xml-style dump.

    Rows with PostTypeId outside {1, 2} (tag wikis etc.) are structurally out
    of scope and skipped; everything else validates exactly like load_jsonl.
    XML attribute entities are decoded by the parser itself.
    """
    posts: list[tuple[int, Post]] = []
    row_no = 0
    try:
        for _, elem in ET.iterparse(str(path), events=("end",)):
            if elem.tag != "row":
                continue
            row_no += 1
            attrs = elem.attrib
            post_type = attrs.get("PostTypeId", "")
            if post_type not in ("1", "2"):
                elem.clear()
                continue
            try:
                kind = PostKind.QUESTION if post_type == "1" else PostKind.ANSWER
                tags = [t.casefold() for t in _TAG_LIST_RE.findall(attrs.get("Tags", ""))]
                post = Post(
                    id=int(attrs["Id"]),
                    kind=kind,
                    title=attrs.get("Title", ""),
                    body=attrs.get("Body", ""),
                    tags=tags,
                    score=int(attrs.get("Score", "0")),
                    accepted_answer_id=(int(attrs["AcceptedAnswerId"])
                                        if "AcceptedAnswerId" in attrs else None),
                    parent_id=int(attrs["ParentId"]) if "ParentId" in attrs else None,
                )
            except (KeyError, ValueError) as exc:
                raise ParseError(row_no, f"bad row attributes: {exc}") from exc
            posts.append((row_no, post))
            elem.clear()
    except ET.ParseError as exc:
        raise ParseError(exc.position[0], f"malformed XML: {exc.msg}") from exc
    return _validate(posts)


class TagCatalog:
    """Canonical tag set plus alias -> canonical synonym map.

    Lookups are case-insensitive; aliases never leak out of lookups.
    """

    def __init__(self, canonical_tags, synonyms: dict[str, str] | None = None):
        self.canonical_tags = frozenset(t.casefold() for t in canonical_tags)
        self.synonyms: dict[str, str] = {}
        for alias, target in (synonyms or {}).items():
            alias = alias.casefold()
            target = target.casefold()
            if target not in self.canonical_tags:
                raise InvariantError(None, f"synonym target {target!r} is not a canonical tag")
            if alias in self.canonical_tags:
                raise InvariantError(None, f"alias {alias!r} collides with a canonical tag")
            if self.synonyms.get(alias, target) != target:
                raise InvariantError(None, f"alias {alias!r} mapped to conflicting targets")
            self.synonyms[alias] = target

    def canonical(self, token: str) -> str | None:
        """Canonical tag for ``token`` (direct hit or alias), else None."""
        folded = token.casefold()
        if folded in self.canonical_tags:
            return folded
        return self.synonyms.get(folded)

    @classmethod
    def from_corpus(cls, corpus: Corpus) -> "TagCatalog":
        """Catalog of every tag observed on the corpus's questions, no synonyms."""
        tags = set()
        for question in corpus.questions():
            tags.update(question.tags)
        return cls(tags)


def _data_lines(path) -> list[str]:
    lines = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            lines.append(line)
    return lines


def load_tag_catalog(tags_path, synonyms_path) -> TagCatalog:
    """Load tags.txt (one tag per line) and tag_synonyms.csv ("alias,canonical")."""
    tags = {line.casefold() for line in _data_lines(tags_path)}
    synonyms: dict[str, str] = {}
    for line in _data_lines(synonyms_path):
        alias, _, target = line.partition(",")
        alias = alias.strip().casefold()
        target = target.strip().casefold()
        if not alias or not target:
            raise InvariantError(None, f"bad synonym line {line!r}")
        if synonyms.get(alias, target) != target:
            raise InvariantError(None, f"alias {alias!r} mapped to conflicting targets")
        synonyms[alias] = target
    return TagCatalog(tags, synonyms)


def load_duplicates(path, corpus: Corpus) -> list[DuplicatePair]:
    """Load duplicates.csv ("duplicate_id,original_id"), validated against corpus."""
    pairs = []
    for line in _data_lines(path):
        dup_raw, _, orig_raw = line.partition(",")
        try:
            dup_id, orig_id = int(dup_raw), int(orig_raw)
        except ValueError as exc:
            raise ParseError(0, f"bad duplicate line {line!r}") from exc
        corpus.question(dup_id)
        corpus.question(orig_id)
        if dup_id == orig_id:
            raise InvariantError(dup_id, "duplicate and original are the same question")
        pairs.append(DuplicatePair(dup_id, orig_id))
    return pairs
