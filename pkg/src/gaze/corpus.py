"""
Gaze corpus standardization and subword label alignment.

Fixation durations are min-max scaled to [0, 1] separately for every
source dataset, then the datasets are merged. Each subword inherits the
label of its source word; special tokens are labelled 0.
"""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from config.settings import GAZE_PAD_LENGTH
from storage.models import GazeRecord
from tokenizer import TokenSequence, Vocabulary, frame_gaze, tokenize_words
from utils.errors import ValidationError
from utils.structured_logger import get_logger

logger = get_logger(__name__)

__all__ = ["GazeExample", "GazeScores", "min_max_scale", "align_subword_labels", "standardize_fixations"]


@dataclass(frozen=True)
class GazeExample:
    """Framed sentence with one fixation target per token."""

    tokens: TokenSequence
    targets: np.ndarray

    def __post_init__(self) -> None:
        targets = np.asarray(self.targets, dtype=np.float64)
        object.__setattr__(self, "targets", targets)
        if targets.shape != (self.tokens.n,):
            raise ValidationError(f"{targets.shape[0]} targets for {self.tokens.n} tokens")
        if targets.size and (targets.min() < 0.0 or targets.max() > 1.0):
            raise ValidationError("gaze targets must lie in [0, 1]")
        if np.any(targets[self.tokens.special_mask()] != 0.0):
            raise ValidationError("special-token gaze targets must be exactly 0")


@dataclass(frozen=True)
class GazeScores:
    """Predicted fixation scores aligned to a token sequence."""

    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", values)
        if values.size and (values.min() < 0.0 or values.max() > 1.0):
            raise ValidationError("gaze scores must lie in [0, 1]")

    def __len__(self) -> int:
        return len(self.values)


def min_max_scale(values) -> np.ndarray:
    """Scale to [0, 1]; a constant input maps to all zeros."""
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        return values
    low, high = values.min(), values.max()
    if high == low:
        return np.zeros_like(values)
    return (values - low) / (high - low)


def align_subword_labels(word_labels: Sequence[float], tokens: TokenSequence) -> np.ndarray:
    """
    Spread word-level labels over subword positions.

    Args:
        word_labels: One label per source word
        tokens: Framed sequence whose word_index points into word_labels

    Returns:
        Per-token targets, 0.0 at every special position
    """
    labels = np.asarray(word_labels, dtype=np.float64)
    targets = np.zeros(tokens.n, dtype=np.float64)
    for position, word in enumerate(tokens.word_index):
        if word < 0:
            continue
        if word >= labels.size:
            raise ValidationError(f"token {position} points at word {word}, only {labels.size} labels given")
        targets[position] = labels[word]
    return targets


def standardize_fixations(
    records: Iterable[GazeRecord],
    vocab: Vocabulary,
    pad_length: int = GAZE_PAD_LENGTH,
    max_len: int | None = None,
) -> list[GazeExample]:
    """
    Turn raw (token, duration) records into framed training examples.

    Sentences keep the order in which they first appear in the records.
    """
    records = list(records)
    if not records:
        raise ValidationError("gaze corpus is empty")

    by_dataset: dict[str, list[int]] = {}
    for i, record in enumerate(records):
        by_dataset.setdefault(record.dataset_id, []).append(i)

    scaled = np.zeros(len(records), dtype=np.float64)
    for dataset_id, indices in by_dataset.items():
        durations = [records[i].fixation_ms for i in indices]
        scaled[indices] = min_max_scale(durations)
        logger.debug(f"Scaled {len(indices)} fixations of dataset {dataset_id}")

    sentences: dict[tuple[str, str], list[int]] = {}
    for i, record in enumerate(records):
        sentences.setdefault((record.dataset_id, record.sentence_id), []).append(i)

    examples = []
    for indices in sentences.values():
        words = [records[i].token.lower() for i in indices]
        tokens = frame_gaze(tokenize_words(words, vocab), vocab, pad_length, max_len)
        examples.append(GazeExample(tokens, align_subword_labels(scaled[indices], tokens)))

    logger.info(f"Standardized {len(records)} fixations into {len(examples)} sentences from {len(by_dataset)} datasets")
    return examples
