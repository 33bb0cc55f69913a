"""Deterministic synthetic Q&A corpus with paraphrase-duplicate gold queries.

Construction: each question is built from a unique (action, subject, context)
triple drawn from fixed vocabularies. Roughly a quarter are troubleshooting
questions ("<subject> crashes after <action> on <context>"), the rest factual
("How do I <action> <subject> on <context>?"). Bodies restate the triple with
filler prose, a version string, and some HTML. The gold query for a question
is a paraphrase built from a different template over the same triple, so a
content-word retriever should place the source question high in the ranking.

Everything is seeded; the same (n, seed) always yields byte-identical files.
Regenerate the committed fixture with:  python -m tuxqa.synth data/synth
"""

from __future__ import annotations

import csv
import random
from pathlib import Path

from .corpus import Corpus, Post, PostKind, TagCatalog, corpus_from_posts, save_jsonl
from .evaluate import GoldQuery

SUBJECTS = [
    "wireless", "bluetooth", "grub2", "kernel", "nvidia", "sound", "usb",
    "ssh", "cups", "unity", "gnome", "compiz", "xorg", "pulseaudio", "samba",
    "nautilus", "firefox", "chromium", "libreoffice", "thunderbird", "apt",
    "dpkg", "snapd", "docker", "python", "java", "mysql", "apache2", "nginx",
    "vpn", "firewall", "swap", "raid", "lvm", "ext4", "btrfs", "touchpad",
    "keyboard", "webcam", "printer", "scanner", "monitor", "battery",
    "hibernate", "systemd", "cron", "bash", "vim",
]

ACTIONS = [
    "install", "remove", "configure", "update", "upgrade", "enable",
    "disable", "mount", "format", "partition", "compile", "download",
    "restore", "resize",
]

CONTEXTS = [
    "12.04", "14.04", "16.04", "18.04", "20.04", "22.04", "laptop",
    "desktop", "server", "virtualbox", "chromebook", "macbook", "netbook",
    "thinkpad", "raspberry", "xps", "zenbook", "aspire", "pavilion",
    "inspiron",
]

SYMPTOMS = [("crashes", "crashing"), ("freezes", "freezing"),
            ("hangs", "hanging"), ("fails", "failing")]

TAG_SYNONYMS = {"wifi": "wireless", "grub": "grub2", "audio": "sound"}


def _triples(n: int, rng: random.Random):
    all_triples = [
        (a, s, c) for a in ACTIONS for s in SUBJECTS for c in CONTEXTS
    ]
    if n > len(all_triples):
        raise ValueError(f"cannot build {n} unique questions from the vocabularies")
    rng.shuffle(all_triples)
    return all_triples[:n]


def generate(n: int = 200, seed: int = 7,
             answered_fraction: float = 0.95) -> tuple[Corpus, list[GoldQuery], TagCatalog]:
    """Build a corpus of ``n`` questions plus one paraphrase gold query each."""
    rng = random.Random(seed)
    posts: list[Post] = []
    gold: list[GoldQuery] = []
    next_id = 1

    for ordinal, (action, subject, context) in enumerate(_triples(n, rng)):
        qid = next_id
        next_id += 1
        troubleshooting = ordinal % 4 == 0
        # Every fifth paraphrase drops the context term so retrieval has to
        # disambiguate between questions sharing (action, subject); keeps the
        # recall curve non-trivial.
        vague = ordinal % 5 == 2
        if troubleshooting:
            present, gerund = SYMPTOMS[ordinal % len(SYMPTOMS)]
            title = f"{subject} {present} after {action} on {context}"
            body = (
                f"<p>Every time I try to {action} {subject} on my {context} machine "
                f"it just keeps {gerund}. I already rebooted twice and checked the "
                f"logs but nothing obvious shows up.</p>"
                f"<pre>dmesg | tail</pre>"
            )
            if vague:
                query = f"{subject} constantly {present} whenever i {action} things"
            else:
                query = f"my {subject} is {gerund} after {action} on {context}"
        else:
            title = f"How do I {action} {subject} on {context}?"
            body = (
                f"<p>I would like to {action} {subject} on a {context} system. "
                f"What is the recommended procedure to {action} it safely? "
                f"Running release {CONTEXTS[ordinal % 6]} here.</p>"
                f"<code>uname -a</code>"
            )
            if vague:
                query = f"simple guide to {action} {subject}"
            else:
                query = f"what is the best way to {action} {subject} with {context}"

        answered = rng.random() < answered_fraction
        accepted_id = next_id if answered else None
        posts.append(Post(
            id=qid, kind=PostKind.QUESTION, title=title, body=body,
            tags=[subject] + ([context] if context.isalpha() else []),
            score=rng.randint(0, 40), accepted_answer_id=accepted_id,
        ))
        if answered:
            posts.append(Post(
                id=next_id, kind=PostKind.ANSWER, title="",
                body=f"<p>Open a terminal and run <code>sudo apt install {subject}</code>, "
                     f"then {action} it from the settings panel.</p>",
                tags=[], score=rng.randint(0, 25), parent_id=qid,
            ))
            next_id += 1
        gold.append(GoldQuery(query, qid))

    corpus = corpus_from_posts(posts)
    tags = set(SUBJECTS) | {c for c in CONTEXTS if c.isalpha()}
    catalog = TagCatalog(tags, TAG_SYNONYMS)
    return corpus, gold, catalog


def write_fixture(outdir, n: int = 200, seed: int = 7) -> None:
    """Dump corpus.jsonl, gold_queries.csv, tags.txt, tag_synonyms.csv."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    corpus, gold, catalog = generate(n, seed)
    save_jsonl(corpus, outdir / "corpus.jsonl")
    with open(outdir / "gold_queries.csv", "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        for item in gold:
            writer.writerow([item.query_text, item.gold_question_id])
    (outdir / "tags.txt").write_text(
        "\n".join(sorted(catalog.canonical_tags)) + "\n", encoding="utf-8"
    )
    (outdir / "tag_synonyms.csv").write_text(
        "\n".join(f"{a},{t}" for a, t in sorted(catalog.synonyms.items())) + "\n",
        encoding="utf-8",
    )


if __name__ == "__main__":
    import sys

    write_fixture(sys.argv[1] if len(sys.argv) > 1 else "data/synth")
