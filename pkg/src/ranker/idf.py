"""
Smoothed inverse document frequency over wordpiece pieces.

    idf(t) = ln((N + 1) / (df(t) + 1)) + 1

Always >= 1, so every query term keeps a positive weight. Pieces never
seen in the collection get ln(N + 1) + 1.
"""

import math
from dataclasses import dataclass, field

from tokenizer.vocabulary import SPECIAL_TOKENS
from utils.errors import ValidationError

__all__ = ["IdfTable", "smoothed_idf"]


def smoothed_idf(df: int, n_docs: int) -> float:
    if n_docs < 1:
        raise ValidationError(f"idf needs a nonempty collection, got N={n_docs}")
    if not 0 <= df <= n_docs:
        raise ValidationError(f"document frequency {df} outside [0, {n_docs}]")
    return math.log((n_docs + 1) / (df + 1)) + 1.0


@dataclass(frozen=True)
class IdfTable:
    n_docs: int
    document_frequency: dict[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.n_docs < 1:
            raise ValidationError("idf table needs at least one document")

    def idf(self, token: str) -> float:
        """Special tokens ([MASK], [Q], ...) are neutral with weight 1."""
        if token in SPECIAL_TOKENS:
            return 1.0
        return smoothed_idf(self.document_frequency.get(token, 0), self.n_docs)

    def weights(self, tokens) -> list[float]:
        return [self.idf(t) for t in tokens]

    def __len__(self) -> int:
        return len(self.document_frequency)
