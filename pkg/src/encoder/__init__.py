"""
Transformer encoder with standard and gaze-modulated attention.
"""

from .attention import EncoderLayerParams, attention, attention_logits, encoder_layer, expand_gaze
from .config import EncoderConfig, GazeMode
from .stack import EncoderStack

__all__ = [
    "EncoderConfig",
    "GazeMode",
    "EncoderLayerParams",
    "expand_gaze",
    "attention_logits",
    "attention",
    "encoder_layer",
    "EncoderStack",
]
