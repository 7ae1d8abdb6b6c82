"""
TREC qrels and run files.

    qrels: qid 0 docid grade
    run:   qid Q0 docid rank score tag
"""

from pathlib import Path

from config.settings import RUN_SCORE_DECIMALS
from evaluation.qrels import Judgment, Qrels
from evaluation.run import RankedEntry, RankedRun
from utils.errors import FormatError, ValidationError
from utils.structured_logger import get_logger

logger = get_logger(__name__)

__all__ = ["load_qrels_file", "write_qrels_file", "write_run_file", "parse_run_file", "format_run_line"]


def load_qrels_file(path: str | Path) -> Qrels:
    path = Path(path)
    judgments = []
    seen: set[tuple[str, str]] = set()
    with path.open(encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            fields = line.split()
            if not fields:
                continue
            if len(fields) != 4:
                raise FormatError(f"expected 'qid 0 docid grade', got {len(fields)} fields", str(path), line_no)
            qid, _, docid, grade = fields
            try:
                judgment = Judgment(qid, docid, int(grade))
            except ValueError as e:
                raise FormatError(str(e), str(path), line_no) from e
            if (qid, docid) in seen:
                raise FormatError(f"duplicate judgment for ({qid}, {docid})", str(path), line_no)
            seen.add((qid, docid))
            judgments.append(judgment)
    logger.info(f"Loaded {len(judgments)} judgments from {path.name}")
    return Qrels(judgments)


def write_qrels_file(qrels: Qrels, path: str | Path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as handle:
        for judgment in qrels:
            handle.write(f"{judgment.qid} 0 {judgment.docid} {judgment.grade}\n")


def format_run_line(qid: str, entry: RankedEntry, tag: str) -> str:
    return f"{qid} Q0 {entry.docid} {entry.rank} {entry.score:.{RUN_SCORE_DECIMALS}f} {tag}"


def write_run_file(run: RankedRun, tag: str, path: str | Path) -> Path:
    """Write lines ordered by (qid as given, rank)."""
    if not tag or any(c.isspace() for c in tag):
        raise ValidationError(f"run tag must be a non-empty word, got {tag!r}")
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="\n") as handle:
            for qid, entries in run:
                for entry in entries:
                    handle.write(format_run_line(qid, entry, tag) + "\n")
    except OSError as e:
        raise ValidationError(f"cannot write run file {path}: {e}") from e
    logger.info(f"Wrote run file {path.name} for {len(run)} queries")
    return path


def parse_run_file(path: str | Path) -> RankedRun:
    path = Path(path)
    rankings: dict[str, list[RankedEntry]] = {}
    with path.open(encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            fields = line.split()
            if not fields:
                continue
            if len(fields) != 6:
                raise FormatError(f"expected 'qid Q0 docid rank score tag', got {len(fields)} fields", str(path), line_no)
            qid, _, docid, rank, score, _tag = fields
            try:
                entry = RankedEntry(docid, float(score), int(rank))
            except ValueError as e:
                raise FormatError(str(e), str(path), line_no) from e
            rankings.setdefault(qid, []).append(entry)
    try:
        return RankedRun(rankings)
    except ValidationError as e:
        raise FormatError(str(e), str(path)) from e
