"""
Input framing for the gaze predictor, the cross-encoder and the bi-encoder.

  gaze:     [CLS] x1..xn [SEP] [PAD]...            (padded to at least pad_length)
  cross:    [CLS] q1..qm [SEP] d1..dk [SEP]        (document truncated first)
  query:    [CLS] [Q] q1..qm [SEP] [MASK]...       (exactly M_q)
  document: [CLS] [D] d1..dk [SEP] [PAD]...        (exactly M_d)
"""

from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum

import numpy as np

from tokenizer.vocabulary import CLS, CONTINUATION_PREFIX, D_MARK, MASK, PAD, Q_MARK, SEP, UNK, Vocabulary
from tokenizer.wordpiece import WordPieces
from utils.errors import ValidationError

__all__ = ["TokenKind", "Role", "TokenSequence", "frame_cross", "frame_bi", "frame_gaze"]


class TokenKind(Enum):
    REGULAR = "regular"
    CLS = "cls"
    SEP = "sep"
    PAD = "pad"
    MASK = "mask"
    Q_MARK = "q_mark"
    D_MARK = "d_mark"
    UNK = "unk"


class Role(Enum):
    QUERY = "query"
    DOCUMENT = "document"


_SPECIAL_KINDS = {
    CLS: TokenKind.CLS,
    SEP: TokenKind.SEP,
    PAD: TokenKind.PAD,
    MASK: TokenKind.MASK,
    Q_MARK: TokenKind.Q_MARK,
    D_MARK: TokenKind.D_MARK,
}
WORD_KINDS = frozenset({TokenKind.REGULAR, TokenKind.UNK})


@dataclass(frozen=True)
class TokenSequence:
    """Framed token ids with their kinds, source-word ordinals and surface pieces."""

    ids: tuple[int, ...]
    kinds: tuple[TokenKind, ...]
    word_index: tuple[int, ...]
    pieces: tuple[str, ...]
    qlen: int = 0
    dlen: int = 0

    def __post_init__(self) -> None:
        n = len(self.ids)
        if not (len(self.kinds) == len(self.word_index) == len(self.pieces) == n):
            raise ValidationError("token sequence fields differ in length")
        for kind, word in zip(self.kinds, self.word_index, strict=True):
            if (kind in WORD_KINDS) != (word >= 0):
                raise ValidationError(f"word_index {word} inconsistent with token kind {kind.name}")
        cls_positions = [i for i, k in enumerate(self.kinds) if k is TokenKind.CLS]
        if len(cls_positions) > 1 or (cls_positions and cls_positions[0] != 0):
            raise ValidationError("[CLS] may appear once, at position 0")

    @property
    def n(self) -> int:
        return len(self.ids)

    def __len__(self) -> int:
        return len(self.ids)

    def ids_array(self) -> np.ndarray:
        return np.asarray(self.ids, dtype=np.int64)

    def pad_mask(self) -> np.ndarray:
        """True at [PAD] positions."""
        return np.array([k is TokenKind.PAD for k in self.kinds], dtype=bool)

    def special_mask(self) -> np.ndarray:
        """True at every non-word position."""
        return np.array([k not in WORD_KINDS for k in self.kinds], dtype=bool)

    def active_length(self) -> int:
        """Length without trailing [PAD] tokens."""
        n = self.n
        while n > 0 and self.kinds[n - 1] is TokenKind.PAD:
            n -= 1
        return n

    def trimmed(self) -> "TokenSequence":
        """The same sequence with trailing [PAD] tokens dropped."""
        n = self.active_length()
        if n == self.n:
            return self
        return TokenSequence(
            self.ids[:n], self.kinds[:n], self.word_index[:n], self.pieces[:n], self.qlen, self.dlen
        )

    def padded_to(self, length: int, vocab: Vocabulary) -> "TokenSequence":
        extra = max(0, length - self.n)
        return TokenSequence(
            self.ids + (vocab.pad_id,) * extra,
            self.kinds + (TokenKind.PAD,) * extra,
            self.word_index + (-1,) * extra,
            self.pieces + (PAD,) * extra,
            self.qlen,
            self.dlen,
        )


class _Builder:
    """Accumulates framed tokens in order."""

    def __init__(self, vocab: Vocabulary):
        self.vocab = vocab
        self.ids: list[int] = []
        self.kinds: list[TokenKind] = []
        self.word_index: list[int] = []
        self.pieces: list[str] = []

    def special(self, token: str, count: int = 1) -> None:
        for _ in range(count):
            self.ids.append(self.vocab.id_of(token))
            self.kinds.append(_SPECIAL_KINDS[token])
            self.word_index.append(-1)
            self.pieces.append(token)

    def words(self, pieces: WordPieces, offset: int = 0) -> None:
        for piece, word in zip(pieces.pieces, pieces.word_index, strict=True):
            known = piece != UNK and piece in self.vocab
            self.ids.append(self.vocab.id_of(piece))
            self.kinds.append(TokenKind.REGULAR if known else TokenKind.UNK)
            self.word_index.append(word + offset)
            self.pieces.append(piece if known else UNK)

    def build(self, qlen: int = 0, dlen: int = 0) -> TokenSequence:
        return TokenSequence(
            tuple(self.ids), tuple(self.kinds), tuple(self.word_index), tuple(self.pieces), qlen, dlen
        )


def _as_pieces(tokens: "WordPieces | Sequence[str]") -> WordPieces:
    """Accept bare piece lists; '##' pieces join the preceding word."""
    if isinstance(tokens, WordPieces):
        return tokens
    word_index = []
    ordinal = -1
    for piece in tokens:
        if not piece.startswith(CONTINUATION_PREFIX) or ordinal < 0:
            ordinal += 1
        word_index.append(ordinal)
    return WordPieces(tuple(tokens), tuple(word_index))


def frame_cross(q, d, vocab: Vocabulary, max_len: int) -> TokenSequence:
    """
    Frame a query-document pair as [CLS] q [SEP] d [SEP].

    Over-long pairs lose document pieces first, then query pieces; both
    [SEP] tokens always survive.
    """
    if max_len < 4:
        raise ValidationError(f"max_len {max_len} cannot hold three specials plus one query token")
    q, d = _as_pieces(q), _as_pieces(d)
    budget = max_len - 3
    d_keep = min(len(d), max(0, budget - len(q)))
    q_keep = min(len(q), budget - d_keep)

    builder = _Builder(vocab)
    builder.special(CLS)
    builder.words(q.head(q_keep))
    builder.special(SEP)
    builder.words(d.head(d_keep), offset=q.head(q_keep).word_count)
    builder.special(SEP)
    return builder.build(qlen=q_keep, dlen=d_keep)


def frame_bi(tokens, role: Role, vocab: Vocabulary, m_q: int = 32, m_d: int = 180) -> TokenSequence:
    """
    Frame one side of a bi-encoder pair.

    Queries become [CLS] [Q] t.. [SEP] augmented with [MASK] to exactly m_q;
    documents become [CLS] [D] t.. [SEP] padded with [PAD] to exactly m_d.
    """
    if m_q < 4 or m_d < 4:
        raise ValidationError(f"M_q ({m_q}) and M_d ({m_d}) must both be at least 4")
    pieces = _as_pieces(tokens)
    builder = _Builder(vocab)
    builder.special(CLS)
    if role is Role.QUERY:
        kept = pieces.head(m_q - 3)
        builder.special(Q_MARK)
        builder.words(kept)
        builder.special(SEP)
        builder.special(MASK, m_q - 3 - len(kept))
        return builder.build(qlen=len(kept))

    kept = pieces.head(m_d - 3)
    builder.special(D_MARK)
    builder.words(kept)
    builder.special(SEP)
    builder.special(PAD, m_d - 3 - len(kept))
    return builder.build(dlen=len(kept))


def frame_gaze(tokens, vocab: Vocabulary, pad_length: int = 10, max_len: int | None = None) -> TokenSequence:
    """Frame a sentence for the gaze predictor as [CLS] x.. [SEP] [PAD].., at least pad_length long."""
    pieces = _as_pieces(tokens)
    if max_len is not None:
        pieces = pieces.head(max(0, max_len - 2))
    builder = _Builder(vocab)
    builder.special(CLS)
    builder.words(pieces)
    builder.special(SEP)
    builder.special(PAD, max(0, pad_length - len(pieces) - 2))
    return builder.build(qlen=len(pieces))
