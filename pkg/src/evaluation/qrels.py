"""
Graded relevance judgments and their binarization.

Grades run from 0 (irrelevant) to 3 (perfectly relevant); grades 2 and 3
binarize to relevant.
"""

from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field

from config.settings import RELEVANT_GRADE
from utils.errors import ValidationError

__all__ = ["Judgment", "Qrels", "BinaryQrels", "binarize_qrels"]

MAX_GRADE = 3


@dataclass(frozen=True)
class Judgment:
    qid: str
    docid: str
    grade: int

    def __post_init__(self) -> None:
        if isinstance(self.grade, bool) or not isinstance(self.grade, int) or not 0 <= self.grade <= MAX_GRADE:
            raise ValidationError(f"grade {self.grade!r} for ({self.qid}, {self.docid}) outside [0, {MAX_GRADE}]")


class Qrels:
    """Graded judgments keyed by query, one grade per (qid, docid)."""

    def __init__(self, entries: Iterable[Judgment | tuple[str, str, int]] = ()):
        self._grades: dict[str, dict[str, int]] = {}
        for entry in entries:
            judgment = entry if isinstance(entry, Judgment) else Judgment(*entry)
            per_query = self._grades.setdefault(judgment.qid, {})
            if judgment.docid in per_query:
                raise ValidationError(f"duplicate judgment for ({judgment.qid}, {judgment.docid})")
            per_query[judgment.docid] = judgment.grade

    def queries(self) -> list[str]:
        return list(self._grades)

    def grades(self, qid: str) -> dict[str, int]:
        return dict(self._grades.get(qid, {}))

    def __contains__(self, qid: str) -> bool:
        return qid in self._grades

    def __iter__(self) -> Iterator[Judgment]:
        for qid, per_query in self._grades.items():
            for docid, grade in per_query.items():
                yield Judgment(qid, docid, grade)

    def __len__(self) -> int:
        return sum(len(per_query) for per_query in self._grades.values())


@dataclass(frozen=True)
class BinaryQrels:
    """Relevant document ids per judged query."""

    relevant: dict[str, frozenset[str]] = field(default_factory=dict)

    def queries(self) -> list[str]:
        return list(self.relevant)

    def relevant_for(self, qid: str) -> frozenset[str]:
        return self.relevant.get(qid, frozenset())

    def __contains__(self, qid: str) -> bool:
        return qid in self.relevant


def binarize_qrels(qrels: Qrels | BinaryQrels) -> BinaryQrels:
    """grade >= 2 -> relevant. Already-binary judgments pass through unchanged."""
    if isinstance(qrels, BinaryQrels):
        return qrels
    return BinaryQrels(
        {
            qid: frozenset(docid for docid, grade in qrels.grades(qid).items() if grade >= RELEVANT_GRADE)
            for qid in qrels.queries()
        }
    )
