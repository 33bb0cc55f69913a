"""Command-line interface: build-index, query, serve, eval."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import corpus as corpus_mod
from . import evaluate as eval_mod
from .engine import BUNDLE_FORMAT_VERSION, Engine
from .service import create_app


def _parse_weights(raw: str) -> tuple[float, float]:
    try:
        title_w, body_w = (float(part) for part in raw.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'title,body' weights, got {raw!r}")
    return (title_w, body_w)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tuxqa",
                                     description="Q&A retrieval over a question corpus")
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build-index", help="index a corpus into a query bundle")
    p_build.add_argument("corpus", help="corpus file (.jsonl, or .xml for a posts dump)")
    p_build.add_argument("out", help="output bundle path (gzipped JSON)")
    p_build.add_argument("--weights", type=_parse_weights, default=(0.5, 0.5),
                         help="title,body field weights (default 0.5,0.5)")
    p_build.add_argument("--tags", help="tags.txt (default: tags observed in the corpus)")
    p_build.add_argument("--synonyms", help="tag_synonyms.csv (requires --tags)")

    p_query = sub.add_parser("query", help="answer a single query from a bundle")
    p_query.add_argument("index", help="bundle built by build-index")
    p_query.add_argument("text", help="the question to ask")
    p_query.add_argument("--debug", action="store_true", help="print the candidate table")
    p_query.add_argument("--k", type=int, default=20, help="candidate count (default 20)")

    p_serve = sub.add_parser("serve", help="run the HTTP API")
    p_serve.add_argument("index", help="bundle built by build-index")
    p_serve.add_argument("--port", type=int, default=8080,
                         help="port (TUX_PORT env var overrides)")
    p_serve.add_argument("--static", help="directory with the built web UI")
    p_serve.add_argument("--log-file", help="append-only JSONL query log")

    p_eval = sub.add_parser("eval", help="recall/latency evaluation against gold queries")
    p_eval.add_argument("index", help="bundle built by build-index")
    p_eval.add_argument("gold", help="gold_queries.csv")
    p_eval.add_argument("--judgments", help="judgments.csv with 0/1/2 grades")
    p_eval.add_argument("--ks", default="1,5,20", help="comma-separated k values")
    p_eval.add_argument("--json-out", help="also write the report as JSON here")
    return parser


def _load_corpus(path: str) -> corpus_mod.Corpus:
    if path.endswith(".xml"):
        return corpus_mod.load_stackexchange_xml(path)
    return corpus_mod.load_jsonl(path)


def cmd_build_index(args) -> int:
    corpus = _load_corpus(args.corpus)
    catalog = None
    if args.tags:
        synonyms = args.synonyms
        if synonyms:
            catalog = corpus_mod.load_tag_catalog(args.tags, synonyms)
        else:
            catalog = corpus_mod.TagCatalog(
                {line.casefold() for line in Path(args.tags).read_text(encoding="utf-8").split()}
            )
    engine = Engine.build(corpus, catalog, weights=args.weights)
    engine.save(args.out)
    print(f"indexed {corpus.n_questions} questions -> {args.out}")
    return 0


def cmd_query(args) -> int:
    engine = Engine.load(args.index)
    result = engine.answer_query(args.text, k=args.k)
    print(f"category: {result.query_category.value}")
    if result.selected is None:
        print("no matching answered question found")
    else:
        question, answer = result.selected
        print(f"matched question [{question.id}]: {question.title}")
        if result.fallback_steps:
            print(f"(skipped {result.fallback_steps} answerless candidate(s))")
        print()
        print(answer.body)
    if args.debug:
        print()
        print(f"{'id':>8}  {'tfidf':>8}  {'cosine':>8}  {'fused':>8}  title")
        for c in result.candidates:
            title = engine.corpus.posts[c.question_id].title
            print(f"{c.question_id:>8}  {c.tfidf_score:>8.4f}  {c.score.cosine:>8.4f}  "
                  f"{c.score.fused:>8.4f}  {title}")
        print()
        timing_bits = "  ".join(f"{k}={v:.1f}" for k, v in result.timings.items())
        print(f"timings: {timing_bits}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    try:
        engine = Engine.load(args.index)
    except Exception as exc:  # noqa: BLE001 - startup failures all exit 2
        print(f"failed to load index bundle: {exc}", file=sys.stderr)
        return 2
    port = int(os.environ.get("TUX_PORT", args.port))
    static_dir = args.static
    if static_dir is None:
        default_static = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        if default_static.is_dir():
            static_dir = default_static
    app = create_app(engine, static_dir=static_dir, log_path=args.log_file,
                     index_version=BUNDLE_FORMAT_VERSION)
    try:
        uvicorn.run(app, host="127.0.0.1", port=port, log_level="info")
    except (OSError, SystemExit) as exc:
        print(f"server failed to start: {exc}", file=sys.stderr)
        return 2
    return 0


def cmd_eval(args) -> int:
    engine = Engine.load(args.index)
    gold = eval_mod.load_gold_queries(args.gold, engine.corpus)
    judgments = eval_mod.load_judgments(args.judgments) if args.judgments else None
    ks = tuple(int(part) for part in args.ks.split(","))
    report = eval_mod.evaluate(engine, gold, ks=ks, judgments=judgments)
    print(eval_mod.report_table(report))
    if args.json_out:
        Path(args.json_out).write_text(eval_mod.report_json(report), encoding="utf-8")
        print(f"\nwrote {args.json_out}")
    return 0


_COMMANDS = {
    "build-index": cmd_build_index,
    "query": cmd_query,
    "serve": cmd_serve,
    "eval": cmd_eval,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (corpus_mod.CorpusError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
