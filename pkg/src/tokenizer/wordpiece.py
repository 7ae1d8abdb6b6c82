"""
Greedy longest-match-first wordpiece tokenization.

Text is lower-cased and punctuation is split off before wordpiece, the
uncased BERT convention.
"""

import re
from dataclasses import dataclass

from tokenizer.vocabulary import CONTINUATION_PREFIX, UNK, Vocabulary

__all__ = ["WordPieces", "basic_tokenize", "wordpiece_tokenize", "tokenize_words", "detokenize_word"]

_WORD_PATTERN = re.compile(r"\w+|[^\w\s]", re.UNICODE)
MAX_WORD_CHARS = 100


@dataclass(frozen=True)
class WordPieces:
    """Subword pieces with the ordinal of the word each one came from."""

    pieces: tuple[str, ...]
    word_index: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.pieces)

    @property
    def word_count(self) -> int:
        return self.word_index[-1] + 1 if self.word_index else 0

    def head(self, count: int) -> "WordPieces":
        return WordPieces(self.pieces[:count], self.word_index[:count])


def basic_tokenize(text: str) -> list[str]:
    """Lower-case, split on whitespace and peel punctuation into its own words."""
    return _WORD_PATTERN.findall(text.lower())


def _split_word(word: str, vocab: Vocabulary) -> list[str]:
    if len(word) > MAX_WORD_CHARS:
        return [UNK]
    if word in vocab:
        return [word]

    pieces = []
    start = 0
    while start < len(word):
        end = len(word)
        match = None
        # longest vocabulary prefix first
        while start < end:
            candidate = word[start:end]
            if start > 0:
                candidate = CONTINUATION_PREFIX + candidate
            if candidate in vocab:
                match = candidate
                break
            end -= 1
        if match is None:
            return [UNK]
        pieces.append(match)
        start = end
    return pieces


def tokenize_words(words, vocab: Vocabulary) -> WordPieces:
    """Wordpiece each pre-split word and remember which word every piece belongs to."""
    pieces: list[str] = []
    word_index: list[int] = []
    for ordinal, word in enumerate(words):
        split = _split_word(word, vocab)
        pieces.extend(split)
        word_index.extend([ordinal] * len(split))
    return WordPieces(tuple(pieces), tuple(word_index))


def wordpiece_tokenize(text: str, vocab: Vocabulary) -> list[str]:
    """
    Tokenize text into subword strings.

    Args:
        text: Raw text; lower-cased and split into words first
        vocab: Loaded vocabulary

    Returns:
        Pieces, continuation pieces prefixed with '##', undecomposable words as [UNK]
    """
    return list(tokenize_words(basic_tokenize(text), vocab).pieces)


def detokenize_word(pieces: list[str]) -> str:
    return "".join(p[len(CONTINUATION_PREFIX):] if p.startswith(CONTINUATION_PREFIX) else p for p in pieces)
