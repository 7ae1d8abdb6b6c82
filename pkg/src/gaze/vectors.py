"""
Pretrained word vectors for the gaze embedding layer.

File format: one token per line followed by its space-separated floats.
"""

from pathlib import Path

import numpy as np

from config.settings import GAZE_UNKNOWN_INIT
from tokenizer import Vocabulary
from utils.errors import FormatError, ValidationError
from utils.structured_logger import get_logger

logger = get_logger(__name__)

__all__ = ["load_word_vectors", "build_embedding_table"]


def load_word_vectors(path: str | Path, dim: int) -> dict[str, np.ndarray]:
    """Read a plain-text vector table; every line must carry exactly dim floats."""
    path = Path(path)
    vectors: dict[str, np.ndarray] = {}
    with path.open(encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            fields = line.rstrip("\n").split(" ")
            if not line.strip():
                continue
            if len(fields) != dim + 1:
                raise FormatError(f"expected token plus {dim} values, got {len(fields) - 1}", str(path), line_no)
            try:
                vectors[fields[0]] = np.array([float(v) for v in fields[1:]], dtype=np.float64)
            except ValueError as e:
                raise FormatError(f"non-numeric vector value: {e}", str(path), line_no) from e
    logger.info(f"Loaded {len(vectors)} word vectors of dim {dim} from {path.name}")
    return vectors


def build_embedding_table(
    vocab: Vocabulary,
    vectors: dict[str, np.ndarray] | None,
    dim: int,
    rng: np.random.Generator,
    init_range: float = GAZE_UNKNOWN_INIT,
    dtype=np.float64,
) -> np.ndarray:
    """
    |V| x dim table seeded from pretrained vectors.

    Pieces missing from the table, including '##' continuations and
    special tokens, draw from uniform(-init_range, init_range).
    """
    table = rng.uniform(-init_range, init_range, size=(len(vocab), dim))
    hits = 0
    for token, vector in (vectors or {}).items():
        if token not in vocab:
            continue
        if vector.shape != (dim,):
            raise ValidationError(f"vector for '{token}' has shape {vector.shape}, expected ({dim},)")
        table[vocab.id_of(token)] = vector
        hits += 1
    if vectors:
        logger.info(f"Initialized {hits}/{len(vocab)} embedding rows from pretrained vectors")
    return table.astype(dtype)
