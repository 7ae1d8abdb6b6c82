"""
Cross-encoder re-ranker: [CLS] q [SEP] d [SEP] through one encoder stack,
two-logit head over the [CLS] row, softmax -> P(relevant).

Gaze variants:
- FIRST_LAYER: input embedding row i is multiplied by g(x_i)
- ALL_LAYERS:  gaze-modulated attention in every layer
- LAST_LAYER:  gaze-modulated attention in the final layer only
"""

from enum import Enum

import numpy as np

from encoder import EncoderConfig, EncoderStack, GazeMode, expand_gaze
from gaze.model import GazePredictor
from numerics import Tensor, no_grad, softmax_rows
from numerics.parameters import uniform_weight
from ranker.base import BaseRanker
from tokenizer import TokenSequence, Vocabulary, frame_cross, wordpiece_tokenize

__all__ = ["CrossMode", "CrossEncoderModel", "score_cross"]


class CrossMode(Enum):
    BASELINE = "baseline"
    FIRST_LAYER = "first_layer"
    ALL_LAYERS = "all_layers"
    LAST_LAYER = "last_layer"


_ENCODER_MODES = {
    CrossMode.BASELINE: GazeMode.NONE,
    CrossMode.FIRST_LAYER: GazeMode.NONE,
    CrossMode.ALL_LAYERS: GazeMode.ALL_LAYERS,
    CrossMode.LAST_LAYER: GazeMode.LAST_LAYER,
}


class CrossEncoderModel(BaseRanker):
    """Pointwise relevance classifier over a joint query-passage frame, with optional gaze injection."""

    kind = "cross"

    def __init__(
        self,
        vocab: Vocabulary,
        encoder_config: EncoderConfig,
        gaze: GazePredictor | None = None,
        mode: CrossMode | str = CrossMode.BASELINE,
        seed: int = 0,
        dtype=np.float64,
    ):
        super().__init__(vocab, gaze, dtype, seed)
        self.mode = CrossMode(mode)
        self.encoder_config = encoder_config
        rng = np.random.default_rng(seed)
        self.encoder = EncoderStack(encoder_config, self.params, "encoder", rng)
        d = encoder_config.d_model
        self.head_weight = self.params.add("head.weight", uniform_weight(rng, (d, 2), d, self.dtype))
        self.head_bias = self.params.add("head.bias", np.zeros(2, dtype=self.dtype))
        self.logger.debug(f"Cross-encoder ({self.mode.value}) with {self.parameter_count():,} parameters")

    def encoder_stacks(self) -> list[EncoderStack]:
        return [self.encoder]

    def frame(self, query: str, document: str) -> TokenSequence:
        q = self.tokenize(query, "query")
        d = wordpiece_tokenize(document, self.vocab)
        return frame_cross(q, d, self.vocab, self.encoder_config.max_len)

    def forward(self, tokens: TokenSequence, mode: CrossMode | None = None, gaze=None) -> Tensor:
        """
        Relevance probability for a framed pair.

        Args:
            tokens: Output of frame()
            mode: Overrides the model's configured mode
            gaze: Optional gaze override (scalar or per-token array)

        Returns:
            Scalar tensor in (0, 1)
        """
        mode = CrossMode(mode) if mode is not None else self.mode
        g = self.gaze_vector(tokens, gaze) if mode is not CrossMode.BASELINE else None

        embeddings = None
        if mode is CrossMode.FIRST_LAYER:
            embeddings = self.encoder.embed(tokens) * expand_gaze(g, self.encoder_config.d_model)
        E = self.encoder.encode(tokens, g, _ENCODER_MODES[mode], embeddings=embeddings)

        logits = E[0:1] @ self.head_weight + self.head_bias
        return softmax_rows(logits)[0, 1]

    def score_tensor(self, query: str, document: str) -> Tensor:
        return self.forward(self.frame(query, document))

    def config_echo(self) -> dict[str, str]:
        echo = {"kind": self.kind}
        echo.update({f"encoder.{k}": str(v) for k, v in self.encoder_config.to_dict().items()})
        if self.gaze is not None:
            echo.update({f"gaze.{k}": str(v) for k, v in self.gaze.config.to_dict().items()})
        return echo


def score_cross(
    q: str,
    d: str,
    model: CrossEncoderModel,
    mode: CrossMode | str | None = None,
    gaze=None,
) -> float:
    """P(relevant | q, d) under the given mode (the model's own mode when None)."""
    with no_grad():
        return model.forward(model.frame(q, d), mode, gaze).item()
