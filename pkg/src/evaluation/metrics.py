"""
TREC-style effectiveness metrics over a ranked run.

Every metric is computed per query and averaged over the union of judged
and ranked queries: judged queries missing from the run score 0, ranked
queries without judgments count as having no relevant documents.
Unjudged documents are irrelevant.
"""

import math
from collections.abc import Callable
from dataclasses import dataclass, field
from enum import Enum

from config.settings import METRIC_CUTOFF
from evaluation.qrels import BinaryQrels, Qrels, binarize_qrels
from evaluation.run import RankedRun
from utils.errors import ValidationError
from utils.structured_logger import get_logger

logger = get_logger(__name__)

__all__ = [
    "Gain",
    "MetricResult",
    "MetricReport",
    "precision_at_k",
    "ndcg_at_k",
    "mean_average_precision",
    "mean_reciprocal_rank",
    "evaluate_run",
]


class Gain(Enum):
    EXP = "exp"  # 2^rel - 1
    LINEAR = "linear"  # rel

    def __call__(self, grade: int) -> float:
        return float(2**grade - 1) if self is Gain.EXP else float(grade)


@dataclass(frozen=True)
class MetricResult:
    name: str
    per_query: dict[str, float]
    mean: float

    @classmethod
    def from_per_query(cls, name: str, per_query: dict[str, float]) -> "MetricResult":
        mean = sum(per_query.values()) / len(per_query) if per_query else 0.0
        return cls(name, per_query, mean)


@dataclass
class MetricReport:
    """Per-metric results for one run, in evaluation order."""

    results: dict[str, MetricResult] = field(default_factory=dict)

    @property
    def means(self) -> dict[str, float]:
        return {name: result.mean for name, result in self.results.items()}

    def __getitem__(self, name: str) -> MetricResult:
        return self.results[name]


def _evaluated_queries(run: RankedRun, judged: list[str]) -> list[str]:
    queries = list(judged) + [qid for qid in run.queries() if qid not in set(judged)]
    if not queries:
        raise ValidationError("neither the run nor the qrels contain any query")
    for qid in run.queries():
        if qid not in set(judged):
            logger.warning(f"Query {qid} is ranked but has no judgments; scoring it with zero relevant")
    return queries


def _per_query(
    run: RankedRun, binary: BinaryQrels, name: str, fn: Callable[[list[str], frozenset[str]], float]
) -> MetricResult:
    per_query = {qid: fn(run.docids(qid), binary.relevant_for(qid)) for qid in _evaluated_queries(run, binary.queries())}
    return MetricResult.from_per_query(name, per_query)


def precision_at_k(run: RankedRun, qrels: Qrels | BinaryQrels, k: int = METRIC_CUTOFF) -> MetricResult:
    """Relevant documents in the top k divided by k, even when fewer than k are ranked."""
    if k < 1:
        raise ValidationError(f"cutoff k must be >= 1, got {k}")

    def precision(docids, relevant):
        return sum(1 for d in docids[:k] if d in relevant) / k

    return _per_query(run, binarize_qrels(qrels), f"P@{k}", precision)


def ndcg_at_k(run: RankedRun, qrels: Qrels, k: int = METRIC_CUTOFF, gain: Gain | str = Gain.EXP) -> MetricResult:
    """
    Normalized discounted cumulative gain at cutoff k on graded judgments.

    DCG@k = sum_{i=1..k} gain(rel_i) / log2(i + 1); the ideal ranking uses
    the same gain. Queries without any positive grade score 0.
    """
    if k < 1:
        raise ValidationError(f"cutoff k must be >= 1, got {k}")
    if not isinstance(qrels, Qrels):
        raise ValidationError("nDCG needs graded judgments, not binarized ones")
    gain = Gain(gain)

    def dcg(grades: list[int]) -> float:
        return sum(gain(g) / math.log2(i + 2) for i, g in enumerate(grades[:k]))

    per_query = {}
    for qid in _evaluated_queries(run, qrels.queries()):
        judged = qrels.grades(qid)
        ideal = dcg(sorted(judged.values(), reverse=True))
        if ideal == 0.0:
            per_query[qid] = 0.0
            continue
        per_query[qid] = dcg([judged.get(d, 0) for d in run.docids(qid)]) / ideal
    return MetricResult.from_per_query(f"nDCG@{k}", per_query)


def mean_average_precision(run: RankedRun, qrels: Qrels | BinaryQrels) -> MetricResult:
    """Average precision over the full run depth, divided by all relevant documents in the qrels."""

    def average_precision(docids, relevant):
        if not relevant:
            return 0.0
        hits = 0
        total = 0.0
        for rank, docid in enumerate(docids, start=1):
            if docid in relevant:
                hits += 1
                total += hits / rank
        return total / len(relevant)

    binary = binarize_qrels(qrels)
    empty = [qid for qid in binary.queries() if not binary.relevant_for(qid)]
    if empty:
        logger.warning(f"{len(empty)} judged queries have no relevant documents; their AP is 0")
    return _per_query(run, binary, "MAP", average_precision)


def mean_reciprocal_rank(run: RankedRun, qrels: Qrels | BinaryQrels) -> MetricResult:
    def reciprocal_rank(docids, relevant):
        for rank, docid in enumerate(docids, start=1):
            if docid in relevant:
                return 1.0 / rank
        return 0.0

    return _per_query(run, binarize_qrels(qrels), "RR", reciprocal_rank)


def evaluate_run(
    run: RankedRun, qrels: Qrels, k: int = METRIC_CUTOFF, gain: Gain | str = Gain.EXP
) -> MetricReport:
    """P@k, nDCG@k, MAP and RR for one run."""
    binary = binarize_qrels(qrels)
    results = [
        precision_at_k(run, binary, k),
        ndcg_at_k(run, qrels, k, gain),
        mean_average_precision(run, binary),
        mean_reciprocal_rank(run, binary),
    ]
    return MetricReport({result.name: result for result in results})
