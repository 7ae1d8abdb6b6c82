"""
Document-frequency service for the tf-idf weighted MaxSim baseline.

Counts, for every wordpiece piece, how many documents contain it at least
once. Pieces come from the same tokenizer the rankers use.
"""

from collections import Counter
from collections.abc import Iterable

from ranker.idf import IdfTable
from storage.models import DocumentRecord
from tokenizer import Vocabulary, wordpiece_tokenize
from utils.errors import ValidationError
from utils.structured_logger import get_logger

logger = get_logger(__name__)

__all__ = ["build_idf_table"]


def build_idf_table(collection: Iterable[DocumentRecord | str], vocab: Vocabulary) -> IdfTable:
    """
    Build an IdfTable over a collection.

    Args:
        collection: Documents, as records or raw text
        vocab: Vocabulary driving wordpiece tokenization

    Returns:
        IdfTable with N = number of documents and per-piece document frequency
    """
    df: Counter[str] = Counter()
    n_docs = 0
    for doc in collection:
        text = doc.text if isinstance(doc, DocumentRecord) else doc
        df.update(set(wordpiece_tokenize(text, vocab)))
        n_docs += 1

    if n_docs == 0:
        raise ValidationError("cannot build idf over an empty collection")

    logger.info(f"Built idf table over {n_docs} documents, {len(df)} distinct pieces")
    return IdfTable(n_docs=n_docs, document_frequency=dict(df))
