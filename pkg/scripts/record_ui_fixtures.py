#!/usr/bin/env python3
"""Record real API responses for the web UI test suite.

Runs the demo corpus through the actual FastAPI service and captures the raw
response text (not a re-serialization), so the UI tests can assert that every
number they display appears verbatim in a response body.

Usage: python scripts/record_ui_fixtures.py
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi.testclient import TestClient

from tuxqa.corpus import load_jsonl, load_tag_catalog
from tuxqa.engine import Engine
from tuxqa.service import create_app

ROOT = Path(__file__).resolve().parents[1]
OUT = ROOT / "frontend" / "tests" / "fixtures"

RECORDINGS = {
    "salutation": {"text": "hi", "debug": False},
    "answer_plain": {"text": "How do I install Ubuntu on Windows?", "debug": False},
    "answer_debug": {"text": "How do I install Ubuntu on Windows?", "debug": True},
    "answer_debug_trouble": {"text": "sound is broken after the upgrade", "debug": True},
    "no_result": {"text": "zebra quagga okapi", "debug": True},
    "empty_text": {"text": "   ", "debug": False},
}


def main() -> None:
    corpus = load_jsonl(ROOT / "data" / "demo" / "corpus.jsonl")
    catalog = load_tag_catalog(ROOT / "data" / "demo" / "tags.txt",
                               ROOT / "data" / "demo" / "tag_synonyms.csv")
    engine = Engine.build(corpus, catalog)
    client = TestClient(create_app(engine, index_version=1))
    OUT.mkdir(parents=True, exist_ok=True)

    for name, request in RECORDINGS.items():
        response = client.post("/api/query", json=request)
        fixture = {"request": request, "status": response.status_code,
                   "body": response.text}
        (OUT / f"{name}.json").write_text(
            json.dumps(fixture, indent=2, ensure_ascii=False), encoding="utf-8")
        print(f"recorded {name}: HTTP {response.status_code}, {len(response.text)} bytes")

    health = client.get("/api/health")
    (OUT / "health.json").write_text(
        json.dumps({"status": health.status_code, "body": health.text},
                   indent=2, ensure_ascii=False), encoding="utf-8")
    print(f"recorded health: HTTP {health.status_code}")


if __name__ == "__main__":
    main()
