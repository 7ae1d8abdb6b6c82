"""
Qrels, ranked runs and TREC-style metrics.
"""

from .comparison import VariantResult, compare_variants
from .metrics import (
    Gain,
    MetricReport,
    MetricResult,
    evaluate_run,
    mean_average_precision,
    mean_reciprocal_rank,
    ndcg_at_k,
    precision_at_k,
)
from .qrels import BinaryQrels, Judgment, Qrels, binarize_qrels
from .run import RankedEntry, RankedRun, rank_candidates

__all__ = [
    "Judgment",
    "Qrels",
    "BinaryQrels",
    "binarize_qrels",
    "RankedEntry",
    "RankedRun",
    "rank_candidates",
    "Gain",
    "MetricResult",
    "MetricReport",
    "precision_at_k",
    "ndcg_at_k",
    "mean_average_precision",
    "mean_reciprocal_rank",
    "evaluate_run",
    "VariantResult",
    "compare_variants",
]
