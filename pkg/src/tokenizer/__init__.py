"""
Wordpiece tokenization and input framing.
"""

from .framing import Role, TokenKind, TokenSequence, frame_bi, frame_cross, frame_gaze
from .vocabulary import SPECIAL_TOKENS, Vocabulary
from .wordpiece import WordPieces, basic_tokenize, detokenize_word, tokenize_words, wordpiece_tokenize

__all__ = [
    "Vocabulary",
    "SPECIAL_TOKENS",
    "WordPieces",
    "basic_tokenize",
    "tokenize_words",
    "wordpiece_tokenize",
    "detokenize_word",
    "TokenKind",
    "Role",
    "TokenSequence",
    "frame_cross",
    "frame_bi",
    "frame_gaze",
]
