"""
Ranked result lists per query.
"""

import math
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass

from utils.errors import ValidationError

__all__ = ["RankedEntry", "RankedRun", "rank_candidates"]


@dataclass(frozen=True)
class RankedEntry:
    docid: str
    score: float
    rank: int  # 1-based


def rank_candidates(scores: Iterable[tuple[str, float]]) -> list[RankedEntry]:
    """Sort by score descending, ties broken by doc id ascending."""
    scores = list(scores)
    seen: set[str] = set()
    for docid, score in scores:
        if docid in seen:
            raise ValidationError(f"duplicate candidate {docid}")
        if not math.isfinite(score):
            raise ValidationError(f"candidate {docid} has non-finite score {score}")
        seen.add(docid)
    ordered = sorted(scores, key=lambda pair: (-pair[1], pair[0]))
    return [RankedEntry(docid, float(score), rank) for rank, (docid, score) in enumerate(ordered, start=1)]


class RankedRun:
    """
    Per-query ranked lists.

    Every list has ranks 1..n in order, non-increasing scores and unique
    doc ids; violations raise ValidationError at construction.
    """

    def __init__(self, rankings: Mapping[str, list[RankedEntry]] | None = None):
        self._rankings: dict[str, list[RankedEntry]] = {}
        for qid, entries in (rankings or {}).items():
            self.add(qid, entries)

    @classmethod
    def from_scores(cls, scores: Mapping[str, Iterable[tuple[str, float]]]) -> "RankedRun":
        return cls({qid: rank_candidates(pairs) for qid, pairs in scores.items()})

    def add(self, qid: str, entries: list[RankedEntry]) -> None:
        if qid in self._rankings:
            raise ValidationError(f"query {qid} already ranked")
        docids = [e.docid for e in entries]
        if len(set(docids)) != len(docids):
            raise ValidationError(f"query {qid} ranks a document twice")
        for position, entry in enumerate(entries, start=1):
            if entry.rank != position:
                raise ValidationError(f"query {qid}: rank {entry.rank} at position {position}")
            if position > 1 and entry.score > entries[position - 2].score:
                raise ValidationError(f"query {qid}: score increases at rank {position}")
        self._rankings[qid] = list(entries)

    def queries(self) -> list[str]:
        return list(self._rankings)

    def ranking(self, qid: str) -> list[RankedEntry]:
        return list(self._rankings.get(qid, []))

    def docids(self, qid: str) -> list[str]:
        return [e.docid for e in self._rankings.get(qid, [])]

    def __contains__(self, qid: str) -> bool:
        return qid in self._rankings

    def __iter__(self) -> Iterator[tuple[str, list[RankedEntry]]]:
        return iter(self._rankings.items())

    def __len__(self) -> int:
        return len(self._rankings)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RankedRun) and self._rankings == other._rankings
