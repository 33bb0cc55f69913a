from __future__ import annotations

import random
from pathlib import Path

import pytest

from tuxqa import synth
from tuxqa.corpus import Post, PostKind, TagCatalog, corpus_from_posts, load_jsonl, load_tag_catalog
from tuxqa.engine import Engine

DATA_DIR = Path(__file__).resolve().parents[1] / "data"


@pytest.fixture(scope="session")
def demo_dir() -> Path:
    return DATA_DIR / "demo"


@pytest.fixture(scope="session")
def demo_corpus(demo_dir):
    return load_jsonl(demo_dir / "corpus.jsonl")


@pytest.fixture(scope="session")
def demo_catalog(demo_dir):
    return load_tag_catalog(demo_dir / "tags.txt", demo_dir / "tag_synonyms.csv")


@pytest.fixture(scope="session")
def demo_engine(demo_corpus, demo_catalog):
    return Engine.build(demo_corpus, demo_catalog)


def make_question(qid, title, body="", tags=(), answer=None, answer_id=None, score=0):
    """One question Post plus (optionally) its accepted answer Post."""
    posts = []
    accepted = None
    if answer is not None:
        accepted = answer_id if answer_id is not None else qid + 1000
        posts.append(Post(id=accepted, kind=PostKind.ANSWER, title="", body=answer,
                          tags=[], parent_id=qid))
    posts.insert(0, Post(id=qid, kind=PostKind.QUESTION, title=title, body=body,
                         tags=list(tags), accepted_answer_id=accepted, score=score))
    return posts


def build_corpus(*question_specs):
    posts = []
    for spec in question_specs:
        posts.extend(make_question(**spec))
    return corpus_from_posts(posts)


@pytest.fixture
def tiny_corpus():
    """Three answered questions with overlapping vocabulary."""
    return build_corpus(
        dict(qid=1, title="install ubuntu on windows", body="dual boot setup guide",
             tags=["ubuntu", "windows"], answer="use the installer"),
        dict(qid=2, title="wireless driver broken", body="wifi fails after kernel update",
             tags=["wireless"], answer="reload the module"),
        dict(qid=3, title="upgrade ubuntu release", body="run the release upgrade tool",
             tags=["ubuntu", "upgrade"], answer="sudo do-release-upgrade"),
    )


WORDS = [
    "ubuntu", "windows", "kernel", "grub2", "wireless", "driver", "sound",
    "battery", "monitor", "usb", "partition", "upgrade", "install", "boot",
    "mount", "update", "remove", "configure", "laptop", "desktop", "server",
    "screen", "package", "terminal", "network", "printer", "keyboard",
    "touchpad", "bluetooth", "firmware", "12.04", "18.04", "22.04", "disk",
    "swap", "memory", "panel", "session", "login", "display",
]


def random_corpus(rng: random.Random, n_questions: int):
    """Randomized corpus over a fixed vocabulary; term overlap is heavy."""
    posts = []
    next_id = 1
    for _ in range(n_questions):
        qid = next_id
        next_id += 1
        title = " ".join(rng.choices(WORDS, k=rng.randint(2, 7)))
        body = " ".join(rng.choices(WORDS, k=rng.randint(4, 30)))
        answered = rng.random() < 0.9
        accepted = next_id if answered else None
        posts.append(Post(id=qid, kind=PostKind.QUESTION, title=title, body=body,
                          tags=[], accepted_answer_id=accepted))
        if answered:
            posts.append(Post(id=next_id, kind=PostKind.ANSWER, title="",
                              body="try " + " ".join(rng.choices(WORDS, k=3)),
                              tags=[], parent_id=qid))
            next_id += 1
    return corpus_from_posts(posts)


@pytest.fixture(scope="session")
def synth_fixture():
    """The 200-question paraphrase-duplicate set (deterministic, seed 7)."""
    return synth.generate(n=200, seed=7)


@pytest.fixture(scope="session")
def synth_engine(synth_fixture):
    corpus, _, catalog = synth_fixture
    return Engine.build(corpus, catalog)
