"""
Tab-separated data files: queries, collection, triples, candidates and gaze corpora.

All files are UTF-8. Malformed lines raise FormatError naming the file
and the 1-based line number.
"""

from pathlib import Path

from storage.models import CandidateRecord, DocumentRecord, GazeRecord, QueryRecord, TabularKind, TrainingTriple
from utils.errors import FormatError, ValidationError
from utils.structured_logger import get_logger

logger = get_logger(__name__)

__all__ = ["load_tabular", "group_candidates", "load_gaze_corpus", "GAZE_CORPUS_HEADER"]

GAZE_CORPUS_HEADER = ("dataset_id", "sentence_id", "token", "fixation_ms")


def _rows(path: Path, columns: int):
    with path.open(encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.rstrip("\n").rstrip("\r")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != columns:
                raise FormatError(f"expected {columns} tab-separated columns, got {len(fields)}", str(path), line_no)
            yield line_no, fields


def load_tabular(path: str | Path, kind: TabularKind | str) -> list:
    """
    Load one tab-separated file into typed records.

    Args:
        path: File to read
        kind: QUERIES (qid, text), COLLECTION (docid, text),
              TRIPLES (query, positive, negative) or CANDIDATES (qid, docid, rank)

    Returns:
        Records in file order
    """
    path = Path(path)
    kind = TabularKind[kind.upper()] if isinstance(kind, str) else kind
    records = []
    seen: set[str] = set()

    for line_no, fields in _rows(path, kind.columns):
        try:
            if kind is TabularKind.QUERIES:
                record = QueryRecord(*fields)
                key = record.qid
            elif kind is TabularKind.COLLECTION:
                record = DocumentRecord(*fields)
                key = record.docid
            elif kind is TabularKind.TRIPLES:
                record = TrainingTriple(*fields)
                key = None
            else:
                try:
                    rank = int(fields[2])
                except ValueError as e:
                    raise ValidationError(f"rank {fields[2]!r} is not an integer") from e
                record = CandidateRecord(fields[0], fields[1], rank)
                key = None
        except FormatError:
            raise
        except ValidationError as e:
            raise FormatError(str(e), str(path), line_no) from e

        if key is not None:
            if key in seen:
                raise FormatError(f"duplicate id {key}", str(path), line_no)
            seen.add(key)
        records.append(record)

    logger.info(f"Loaded {len(records)} {kind.name.lower()} records from {path.name}")
    return records


def group_candidates(records: list[CandidateRecord]) -> dict[str, list[str]]:
    """Candidate doc ids per query, ordered by the provided rank."""
    grouped: dict[str, list[CandidateRecord]] = {}
    for record in records:
        grouped.setdefault(record.qid, []).append(record)
    return {qid: [r.docid for r in sorted(group, key=lambda r: r.rank)] for qid, group in grouped.items()}


def load_gaze_corpus(path: str | Path) -> list[GazeRecord]:
    """Read a gaze TSV with header dataset_id, sentence_id, token, fixation_ms."""
    path = Path(path)
    records = []
    header_checked = False
    for line_no, fields in _rows(path, len(GAZE_CORPUS_HEADER)):
        if not header_checked:
            if tuple(fields) != GAZE_CORPUS_HEADER:
                raise FormatError(f"expected header {' '.join(GAZE_CORPUS_HEADER)}", str(path), line_no)
            header_checked = True
            continue
        try:
            records.append(GazeRecord(fields[0], fields[1], fields[2], float(fields[3])))
        except ValueError as e:
            raise FormatError(str(e), str(path), line_no) from e
    if not header_checked:
        raise FormatError("gaze corpus is empty", str(path))
    logger.info(f"Loaded {len(records)} gaze records from {path.name}")
    return records
