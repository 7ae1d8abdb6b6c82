"""
Side-by-side comparison of ranker variants against a baseline.
"""

from dataclasses import dataclass, field

from evaluation.metrics import MetricReport
from utils.errors import ValidationError

__all__ = ["VariantResult", "compare_variants"]


@dataclass
class VariantResult:
    name: str
    baseline: str
    means: dict[str, float]
    deltas: dict[str, float] = field(default_factory=dict)  # relative change vs baseline, empty for the baseline


def compare_variants(reports: dict[str, MetricReport], baseline: str) -> list[VariantResult]:
    """
    Relative change (variant - baseline) / baseline per metric.

    The baseline comes first; metrics where the baseline mean is 0 get no delta.
    """
    if baseline not in reports:
        raise ValidationError(f"baseline {baseline} missing from the compared reports")
    base = reports[baseline].means
    rows = [VariantResult(baseline, baseline, dict(base))]
    for name, report in reports.items():
        if name == baseline:
            continue
        means = report.means
        deltas = {metric: (means[metric] - base[metric]) / base[metric] for metric in means if base.get(metric)}
        rows.append(VariantResult(name, baseline, dict(means), deltas))
    return rows
