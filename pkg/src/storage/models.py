"""
Record types for every data file the pipeline reads.

Separate concerns:
- QueryRecord / DocumentRecord: id + text, keyed by id when loaded
- TrainingTriple: training example (query, positive passage, negative passage)
- CandidateRecord: first-stage candidate with its provided rank
- GazeRecord: one token of an eye-tracking corpus with its fixation duration
"""

from dataclasses import dataclass
from enum import Enum

from utils.errors import ValidationError

__all__ = [
    "TabularKind",
    "QueryRecord",
    "DocumentRecord",
    "TrainingTriple",
    "CandidateRecord",
    "GazeRecord",
]


class TabularKind(Enum):
    """Tab-separated file layouts accepted by load_tabular."""

    QUERIES = ("qid", "text")
    COLLECTION = ("docid", "text")
    TRIPLES = ("query", "positive", "negative")
    CANDIDATES = ("qid", "docid", "rank")

    @property
    def columns(self) -> int:
        return len(self.value)


@dataclass(frozen=True)
class QueryRecord:
    qid: str
    text: str

    def __post_init__(self) -> None:
        if not self.qid:
            raise ValidationError("query id is required")


@dataclass(frozen=True)
class DocumentRecord:
    docid: str
    text: str

    def __post_init__(self) -> None:
        if not self.docid:
            raise ValidationError("document id is required")


@dataclass(frozen=True)
class TrainingTriple:
    """Training triple; the positive and negative passage must differ."""

    query: str
    positive: str
    negative: str

    def __post_init__(self) -> None:
        if not self.query:
            raise ValidationError("triple query is empty")
        if self.positive == self.negative:
            raise ValidationError("triple positive and negative passages are identical")


@dataclass(frozen=True)
class CandidateRecord:
    qid: str
    docid: str
    rank: int  # 1-based rank from the first-stage retriever

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise ValidationError(f"candidate rank must be >= 1, got {self.rank}")


@dataclass(frozen=True)
class GazeRecord:
    """One word of an eye-tracking corpus."""

    dataset_id: str
    sentence_id: str
    token: str
    fixation_ms: float

    def __post_init__(self) -> None:
        if self.fixation_ms < 0:
            raise ValidationError(
                f"negative fixation duration {self.fixation_ms} for '{self.token}' "
                f"in {self.dataset_id}/{self.sentence_id}"
            )
