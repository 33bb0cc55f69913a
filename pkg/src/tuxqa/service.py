"""HTTP JSON API over the engine, plus the salutation mini-dialogue.

POST /api/query accepts {"text": str, "debug": bool?} and returns an
ApiQueryResponse; GET /api/health reports readiness. When a static directory
is configured (the built web UI), it is served at '/'. Engine state is shared
read-only across requests; there is no per-request state.
"""

from __future__ import annotations

import json
import time
from functools import lru_cache
from importlib import resources
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .engine import Engine, QueryResult

NO_RESULT_REPLY = ("Sorry, I could not find a question matching yours. "
                   "Try rephrasing with more specific terms.")


def load_salutations(path=None) -> dict[str, str]:
    """Load the "greeting,reply" table; keys are trimmed and case-folded."""
    if path is None:
        path = resources.files("tuxqa.data").joinpath("salutations.csv")
    table = {}
    for line in Path(str(path)).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        greeting, _, reply = line.partition(",")
        table[greeting.strip().casefold()] = reply.strip()
    return table


@lru_cache(maxsize=1)
def default_salutations() -> dict[str, str]:
    return load_salutations()


def salutation_reply(text: str, table: dict[str, str] | None = None) -> str | None:
    """Canned reply for exact-match greetings, else None.

    Exact match only: fuzzy matching would swallow real queries that happen
    to start with a greeting word ("hibernate fails").
    """
    table = table if table is not None else default_salutations()
    return table.get(text.strip().casefold())


class QueryRequest(BaseModel):
    text: str
    debug: bool = False


def _response_from_result(engine: Engine, result: QueryResult, debug: bool) -> dict:
    response: dict = {
        "kind": "no_result",
        "reply_text": NO_RESULT_REPLY,
        "question": None,
        "answer": None,
        "category": result.query_category.value,
        "timings_ms": result.timings,
    }
    if result.selected is not None:
        question, answer = result.selected
        response["kind"] = "answer"
        response["question"] = {"id": question.id, "title": question.title}
        response["answer"] = answer.body
        response["reply_text"] = answer.body
    if debug:
        response["candidates"] = [
            {
                "id": c.question_id,
                "title": engine.corpus.posts[c.question_id].title,
                "tfidf": c.score.tfidf_score,
                "cosine": c.score.cosine,
                "fused": c.score.fused,
            }
            for c in result.candidates
        ]
    return response


def create_app(engine: Engine | None = None, static_dir=None,
               log_path=None, index_version: int | None = None) -> FastAPI:
    app = FastAPI(title="tuxqa")
    app.state.engine = engine
    app.state.index_version = index_version
    salutations = default_salutations()

    def log_query(record: dict) -> None:
        if log_path is None:
            return
        record["ts"] = time.time()
        with open(log_path, "a", encoding="utf-8") as handle:
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")

    @app.get("/api/health")
    def health():
        current = app.state.engine
        if current is None:
            return {"status": "loading", "n_questions": 0, "index_version": None}
        return {
            "status": "ok",
            "n_questions": current.corpus.n_questions,
            "index_version": app.state.index_version,
        }

    @app.post("/api/query")
    def query(request: QueryRequest):
        if not request.text.strip():
            raise HTTPException(status_code=400, detail="query text is empty")

        canned = salutation_reply(request.text, salutations)
        if canned is not None:
            return {
                "kind": "salutation",
                "reply_text": canned,
                "question": None,
                "answer": None,
                "category": None,
                "timings_ms": {},
            }

        current = app.state.engine
        if current is None:
            raise HTTPException(status_code=503, detail="index not loaded")
        result = current.answer_query(request.text)
        response = _response_from_result(current, result, request.debug)
        log_query({
            "text": request.text,
            "kind": response["kind"],
            "question_id": response["question"]["id"] if response["question"] else None,
        })
        return response

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
