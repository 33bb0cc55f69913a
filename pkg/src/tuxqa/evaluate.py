"""Offline evaluation: recall@K against gold query->question pairs, 0/1/2
judgment aggregation, and latency statistics.

Recall is measured at the IR stage (position in the raw tf-idf ranking) and,
separately, after the semantic re-rank; queries whose gold question survived
retrieval but was dropped by the category filter are counted so that
misclassification losses stay visible.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass, field

from .classify import QueryCategory, classify
from .corpus import Corpus, DuplicatePair, InvariantError, UnknownQuestion
from .engine import Engine
from .index import top_k
from .text import pos_tag, tokenize


class EmptyGoldSet(ValueError):
    pass


class EmptySamples(ValueError):
    pass


@dataclass(frozen=True)
class GoldQuery:
    query_text: str
    gold_question_id: int


@dataclass(frozen=True)
class Judgment:
    query_text: str
    grade: int  # 0 unacceptable, 1 fair, 2 acceptable

    def __post_init__(self):
        if self.grade not in (0, 1, 2):
            raise ValueError(f"grade must be 0, 1, or 2, got {self.grade}")


GRADE_NAMES = {0: "unacceptable", 1: "fair", 2: "acceptable"}


@dataclass
class JudgmentTotals:
    counts: dict[int, int]
    total: int
    max_possible: int


@dataclass
class LatencyStats:
    mean: float
    median: float
    p95: float


@dataclass
class RecallReport:
    ir: dict[int, float]
    reranked: dict[int, float]
    category_filter_losses: int
    n_queries: int


@dataclass
class EvalReport:
    recall: RecallReport
    latency: LatencyStats
    judgments: JudgmentTotals | None
    per_category: dict[str, dict] = field(default_factory=dict)


def load_gold_queries(path, corpus: Corpus) -> list[GoldQuery]:
    """Read gold_queries.csv ('"query text",gold_question_id'); ids must resolve."""
    gold = []
    with open(path, newline="", encoding="utf-8") as handle:
        for row in csv.reader(handle):
            if not row or row[0].lstrip().startswith("#"):
                continue
            text, qid_raw = row[0], row[1]
            try:
                qid = int(qid_raw)
            except ValueError as exc:
                raise InvariantError(None, f"bad gold id {qid_raw!r}") from exc
            try:
                corpus.question(qid)
            except UnknownQuestion as exc:
                raise InvariantError(qid, "gold question id not in corpus") from exc
            gold.append(GoldQuery(text, qid))
    return gold


def load_judgments(path) -> list[Judgment]:
    """Read judgments.csv ('"query text",grade')."""
    judgments = []
    with open(path, newline="", encoding="utf-8") as handle:
        for row in csv.reader(handle):
            if not row or row[0].lstrip().startswith("#"):
                continue
            judgments.append(Judgment(row[0], int(row[1])))
    return judgments


def gold_from_duplicates(corpus: Corpus, pairs: list[DuplicatePair]) -> list[GoldQuery]:
    """Turn moderation duplicate links into gold queries: the duplicate's title
    should retrieve the original question."""
    return [
        GoldQuery(corpus.posts[p.duplicate_question_id].title, p.original_question_id)
        for p in pairs
    ]


def _recall_positions(engine: Engine, item: GoldQuery, max_k: int):
    """(ir position, reranked position, lost-to-filter) for one gold query."""
    scored = engine.retrieve(item.query_text)
    ir_position = next(
        (i for i, doc in enumerate(scored) if doc.question_id == item.gold_question_id),
        None,
    )
    result = engine.answer_query(item.query_text, k=max_k)
    rr_position = next(
        (i for i, c in enumerate(result.candidates)
         if c.question_id == item.gold_question_id),
        None,
    )
    in_top = any(d.question_id == item.gold_question_id for d in top_k(scored, max_k))
    return ir_position, rr_position, in_top and rr_position is None


def recall_at_k(engine: Engine, gold: list[GoldQuery], ks=(1, 5, 20),
                parallel: bool = False) -> RecallReport:
    """Fraction of gold queries whose target appears in the first k candidates,
    measured on the raw tf-idf ranking and on the re-ranked candidate list.

    ``parallel`` fans queries out over a thread pool (the engine is read-only,
    so this is safe); use it only when latency is not being measured.
    """
    if not gold:
        raise EmptyGoldSet("gold query set is empty")
    ks = sorted(set(ks))
    max_k = max(ks)

    if parallel:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor() as pool:
            positions = list(pool.map(lambda g: _recall_positions(engine, g, max_k), gold))
    else:
        positions = [_recall_positions(engine, item, max_k) for item in gold]

    ir_hits = {k: 0 for k in ks}
    rr_hits = {k: 0 for k in ks}
    filter_losses = 0
    for ir_position, rr_position, lost in positions:
        for k in ks:
            if ir_position is not None and ir_position < k:
                ir_hits[k] += 1
            if rr_position is not None and rr_position < k:
                rr_hits[k] += 1
        if lost:
            filter_losses += 1

    n = len(gold)
    return RecallReport(
        ir={k: ir_hits[k] / n for k in ks},
        reranked={k: rr_hits[k] / n for k in ks},
        category_filter_losses=filter_losses,
        n_queries=n,
    )


def aggregate_judgments(judgments: list[Judgment]) -> JudgmentTotals:
    counts = {0: 0, 1: 0, 2: 0}
    for j in judgments:
        counts[j.grade] += 1
    total = sum(grade * n for grade, n in counts.items())
    return JudgmentTotals(counts=counts, total=total, max_possible=2 * len(judgments))


def latency_stats(samples: list[float]) -> LatencyStats:
    """Mean, median (lower of the middle two for even counts), nearest-rank p95."""
    if not samples:
        raise EmptySamples("no latency samples")
    ordered = sorted(samples)
    n = len(ordered)
    mean = sum(ordered) / n
    median = ordered[(n - 1) // 2]
    p95_rank = max(1, -(-95 * n // 100))  # ceil(0.95 * n) without floats
    p95 = ordered[p95_rank - 1]
    return LatencyStats(mean=mean, median=median, p95=p95)


def _query_category(engine: Engine, text: str) -> QueryCategory:
    return classify(pos_tag(tokenize(text)), engine.negative_lexicon)


def evaluate(engine: Engine, gold: list[GoldQuery], ks=(1, 5, 20),
             judgments: list[Judgment] | None = None) -> EvalReport:
    """Run the full harness sequentially (uncontended latency samples)."""
    if not gold:
        raise EmptyGoldSet("gold query set is empty")
    recall = recall_at_k(engine, gold, ks)

    latencies: list[float] = []
    by_category: dict[QueryCategory, list[GoldQuery]] = {}
    latency_by_category: dict[QueryCategory, list[float]] = {}
    for item in gold:
        start = time.perf_counter()
        engine.answer_query(item.query_text)
        elapsed_ms = (time.perf_counter() - start) * 1000
        latencies.append(elapsed_ms)
        category = _query_category(engine, item.query_text)
        by_category.setdefault(category, []).append(item)
        latency_by_category.setdefault(category, []).append(elapsed_ms)

    per_category: dict[str, dict] = {}
    for category, items in by_category.items():
        entry: dict = {
            "queries": len(items),
            "recall_ir": recall_at_k(engine, items, ks).ir,
            "latency": latency_stats(latency_by_category[category]),
        }
        if judgments:
            in_cat = [j for j in judgments if _query_category(engine, j.query_text) is category]
            entry["judgments"] = aggregate_judgments(in_cat) if in_cat else None
        per_category[category.value] = entry

    return EvalReport(
        recall=recall,
        latency=latency_stats(latencies),
        judgments=aggregate_judgments(judgments) if judgments is not None else None,
        per_category=per_category,
    )


def report_to_dict(report: EvalReport) -> dict:
    def latency_dict(stats: LatencyStats) -> dict:
        return {"mean_ms": stats.mean, "median_ms": stats.median, "p95_ms": stats.p95}

    data: dict = {
        "n_queries": report.recall.n_queries,
        "recall_at_k": {
            "ir": {str(k): v for k, v in report.recall.ir.items()},
            "reranked": {str(k): v for k, v in report.recall.reranked.items()},
            "category_filter_losses": report.recall.category_filter_losses,
        },
        "latency": latency_dict(report.latency),
        "per_category": {},
    }
    if report.judgments is not None:
        data["judgments"] = {
            "counts": {GRADE_NAMES[g]: n for g, n in report.judgments.counts.items()},
            "total": report.judgments.total,
            "max_possible": report.judgments.max_possible,
        }
    for name, entry in report.per_category.items():
        cat_data = {
            "queries": entry["queries"],
            "recall_ir": {str(k): v for k, v in entry["recall_ir"].items()},
            "latency": latency_dict(entry["latency"]),
        }
        totals = entry.get("judgments")
        if totals is not None:
            cat_data["judgments"] = {
                "counts": {GRADE_NAMES[g]: n for g, n in totals.counts.items()},
                "total": totals.total,
                "max_possible": totals.max_possible,
            }
        data["per_category"][name] = cat_data
    return data


def report_json(report: EvalReport) -> str:
    return json.dumps(report_to_dict(report), indent=2)


def report_table(report: EvalReport) -> str:
    """Plain-text summary table."""
    lines = [f"queries: {report.recall.n_queries}", ""]
    lines.append(f"{'k':>4}  {'recall@k (ir)':>14}  {'recall@k (reranked)':>20}")
    for k in sorted(report.recall.ir):
        lines.append(
            f"{k:>4}  {report.recall.ir[k]:>14.3f}  {report.recall.reranked[k]:>20.3f}"
        )
    lines.append(f"category-filter losses: {report.recall.category_filter_losses}")
    lines.append("")
    lines.append(
        f"latency ms: mean {report.latency.mean:.1f}  "
        f"median {report.latency.median:.1f}  p95 {report.latency.p95:.1f}"
    )
    if report.judgments is not None:
        lines.append("")
        lines.append("judgments:")
        for grade in (0, 1, 2):
            lines.append(f"  {GRADE_NAMES[grade]:>12}: {report.judgments.counts[grade]}")
        lines.append(f"  {'total':>12}: {report.judgments.total} of {report.judgments.max_possible}")
    for name, entry in sorted(report.per_category.items()):
        lines.append("")
        lines.append(f"[{name}] queries: {entry['queries']}")
        recall_bits = "  ".join(
            f"r@{k}={v:.3f}" for k, v in sorted(entry["recall_ir"].items())
        )
        lines.append(f"  recall (ir): {recall_bits}")
        lines.append(f"  latency ms: mean {entry['latency'].mean:.1f}")
        totals = entry.get("judgments")
        if totals is not None:
            lines.append(f"  judgment total: {totals.total} of {totals.max_possible}")
    return "\n".join(lines)
