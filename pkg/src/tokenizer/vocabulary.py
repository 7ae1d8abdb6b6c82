"""
Wordpiece vocabulary backed by a plain text file, one token per line.

Line number is the token id, so a vocabulary file fully determines every
id this package emits.
"""

from dataclasses import dataclass, field
from pathlib import Path

from utils.errors import FormatError, ValidationError

__all__ = ["Vocabulary", "SPECIAL_TOKENS", "CONTINUATION_PREFIX"]

CLS, SEP, PAD, MASK, Q_MARK, D_MARK, UNK = "[CLS]", "[SEP]", "[PAD]", "[MASK]", "[Q]", "[D]", "[UNK]"
SPECIAL_TOKENS = (PAD, UNK, CLS, SEP, MASK, Q_MARK, D_MARK)
CONTINUATION_PREFIX = "##"


@dataclass(frozen=True)
class Vocabulary:
    """Immutable token <-> id map with all seven special tokens present."""

    tokens: tuple[str, ...]
    entries: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.tokens:
            raise ValidationError("vocabulary is empty")
        entries: dict[str, int] = {}
        for i, token in enumerate(self.tokens):
            if token in entries:
                raise ValidationError(f"duplicate vocabulary token {token!r} at id {i}")
            entries[token] = i
        missing = [t for t in SPECIAL_TOKENS if t not in entries]
        if missing:
            raise ValidationError(f"vocabulary is missing special tokens: {missing}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_tokens(cls, tokens) -> "Vocabulary":
        return cls(tuple(tokens))

    @classmethod
    def load(cls, path: str | Path) -> "Vocabulary":
        path = Path(path)
        text = path.read_text(encoding="utf-8")
        lines = text.split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        for line_no, token in enumerate(lines, 1):
            if token == "" or token != token.strip():
                raise FormatError("blank or padded vocabulary token", str(path), line_no)
        return cls(tuple(lines))

    def save(self, path: str | Path) -> None:
        Path(path).write_text("\n".join(self.tokens) + "\n", encoding="utf-8", newline="\n")

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self.entries

    def id_of(self, token: str) -> int:
        return self.entries.get(token, self.entries[UNK])

    def token_of(self, token_id: int) -> str:
        return self.tokens[token_id]

    @property
    def cls_id(self) -> int:
        return self.entries[CLS]

    @property
    def sep_id(self) -> int:
        return self.entries[SEP]

    @property
    def pad_id(self) -> int:
        return self.entries[PAD]

    @property
    def mask_id(self) -> int:
        return self.entries[MASK]

    @property
    def q_id(self) -> int:
        return self.entries[Q_MARK]

    @property
    def d_id(self) -> int:
        return self.entries[D_MARK]

    @property
    def unk_id(self) -> int:
        return self.entries[UNK]
