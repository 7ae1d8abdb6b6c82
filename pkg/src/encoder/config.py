"""
Transformer encoder configuration and gaze injection modes.
"""

from dataclasses import asdict, dataclass
from enum import Enum

from config.settings import (
    CROSS_MAX_LEN,
    ENCODER_ATTN_DROPOUT,
    ENCODER_D_FF,
    ENCODER_D_MODEL,
    ENCODER_HEADS,
    ENCODER_LAYERS,
)
from utils.errors import ValidationError

__all__ = ["EncoderConfig", "GazeMode"]


class GazeMode(Enum):
    """Which encoder layers use gaze-modulated attention."""

    NONE = "none"
    LAST_LAYER = "last_layer"
    ALL_LAYERS = "all_layers"


@dataclass(frozen=True)
class EncoderConfig:
    vocab_size: int
    layers: int = ENCODER_LAYERS
    heads: int = ENCODER_HEADS
    d_model: int = ENCODER_D_MODEL
    d_ff: int = ENCODER_D_FF
    max_len: int = CROSS_MAX_LEN
    attn_dropout: float = ENCODER_ATTN_DROPOUT

    def __post_init__(self) -> None:
        if self.vocab_size < 1 or self.layers < 1 or self.heads < 1 or self.d_ff < 1 or self.max_len < 1:
            raise ValidationError(f"encoder extents must be positive: {self}")
        if self.d_model % self.heads != 0:
            raise ValidationError(f"d_model {self.d_model} is not divisible by {self.heads} heads")
        if not 0.0 <= self.attn_dropout < 1.0:
            raise ValidationError(f"attn_dropout must lie in [0, 1), got {self.attn_dropout}")

    @property
    def dim(self) -> int:
        """Per-head width."""
        return self.d_model // self.heads

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, values: dict) -> "EncoderConfig":
        return cls(
            vocab_size=int(values["vocab_size"]),
            layers=int(values["layers"]),
            heads=int(values["heads"]),
            d_model=int(values["d_model"]),
            d_ff=int(values["d_ff"]),
            max_len=int(values["max_len"]),
            attn_dropout=float(values["attn_dropout"]),
        )
