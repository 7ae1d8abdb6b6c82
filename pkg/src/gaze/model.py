"""
Gaze fixation predictor.

    token ids -> embeddings -> BiLSTM -> transformer layers -> affine -> sigmoid

One score in (0, 1) per input token. The BiLSTM output (both directions
concatenated) is the transformer width, so d_model = 2 * lstm_hidden.
"""

from dataclasses import asdict, dataclass

import numpy as np

from config.settings import GAZE_D_FF, GAZE_EMBED_DIM, GAZE_HEADS, GAZE_LAYERS, GAZE_LSTM_HIDDEN
from encoder import EncoderLayerParams, encoder_layer
from gaze.corpus import GazeScores
from numerics import Parameter, ParameterSet, Tensor, concat, no_grad
from numerics.parameters import uniform_weight
from tokenizer import TokenSequence
from utils.errors import ValidationError
from utils.structured_logger import get_logger

logger = get_logger(__name__)

__all__ = ["GazeModelConfig", "GazePredictor", "predict_gaze"]


@dataclass(frozen=True)
class GazeModelConfig:
    vocab_size: int
    embed_dim: int = GAZE_EMBED_DIM
    lstm_hidden: int = GAZE_LSTM_HIDDEN
    layers: int = GAZE_LAYERS
    heads: int = GAZE_HEADS
    d_ff: int = GAZE_D_FF

    def __post_init__(self) -> None:
        if min(self.vocab_size, self.embed_dim, self.lstm_hidden, self.heads, self.d_ff) < 1 or self.layers < 0:
            raise ValidationError(f"gaze model extents must be positive: {self}")
        if self.d_model % self.heads != 0:
            raise ValidationError(f"gaze d_model {self.d_model} is not divisible by {self.heads} heads")

    @property
    def d_model(self) -> int:
        return 2 * self.lstm_hidden

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, values: dict) -> "GazeModelConfig":
        return cls(**{key: int(values[key]) for key in cls.__dataclass_fields__})


@dataclass
class _LstmDirection:
    w_in: Parameter  # embed_dim x 4H, gate order: input, forget, output, candidate
    w_hidden: Parameter  # H x 4H
    bias: Parameter  # 4H

    @classmethod
    def create(cls, params: ParameterSet, prefix: str, embed_dim: int, hidden: int, rng) -> "_LstmDirection":
        dt = params.dtype
        bias = np.zeros(4 * hidden, dtype=dt)
        bias[hidden : 2 * hidden] = 1.0  # forget gate
        return cls(
            w_in=params.add(f"{prefix}.w_in", uniform_weight(rng, (embed_dim, 4 * hidden), hidden, dt)),
            w_hidden=params.add(f"{prefix}.w_hidden", uniform_weight(rng, (hidden, 4 * hidden), hidden, dt)),
            bias=params.add(f"{prefix}.bias", bias),
        )

    def run(self, x: Tensor, reverse: bool = False) -> Tensor:
        """Hidden states for every timestep, n x H, in input order."""
        n = x.shape[0]
        hidden = self.w_hidden.shape[0]
        projected = x @ self.w_in + self.bias
        h = Tensor(np.zeros((1, hidden), dtype=x.dtype))
        c = Tensor(np.zeros((1, hidden), dtype=x.dtype))
        outputs: list[Tensor] = [None] * n
        steps = range(n - 1, -1, -1) if reverse else range(n)
        for t in steps:
            gates = projected[t : t + 1] + h @ self.w_hidden
            i = gates[:, :hidden].sigmoid()
            f = gates[:, hidden : 2 * hidden].sigmoid()
            o = gates[:, 2 * hidden : 3 * hidden].sigmoid()
            candidate = gates[:, 3 * hidden :].tanh()
            c = f * c + i * candidate
            h = o * c.tanh()
            outputs[t] = h
        return concat(outputs, axis=0)


class GazePredictor:
    """Predicts a normalized fixation duration for every token of a framed sequence."""

    def __init__(
        self,
        config: GazeModelConfig,
        seed: int = 0,
        dtype=np.float64,
        embeddings: np.ndarray | None = None,
    ):
        self.config = config
        self.params = ParameterSet(dtype)
        rng = np.random.default_rng(seed)
        dt = self.params.dtype

        if embeddings is None:
            embeddings = uniform_weight(rng, (config.vocab_size, config.embed_dim), config.embed_dim, dt)
        if embeddings.shape != (config.vocab_size, config.embed_dim):
            raise ValidationError(
                f"embedding table {embeddings.shape} does not match ({config.vocab_size}, {config.embed_dim})"
            )
        self.embedding = self.params.add("embedding", embeddings)
        self.forward_lstm = _LstmDirection.create(self.params, "lstm_fwd", config.embed_dim, config.lstm_hidden, rng)
        self.backward_lstm = _LstmDirection.create(self.params, "lstm_bwd", config.embed_dim, config.lstm_hidden, rng)
        self.layers = [
            EncoderLayerParams.create(self.params, f"layer{i}", config.d_model, config.heads, config.d_ff, rng)
            for i in range(config.layers)
        ]
        self.head_weight = self.params.add(
            "head.weight", uniform_weight(rng, (config.d_model, 1), config.d_model, dt)
        )
        self.head_bias = self.params.add("head.bias", np.zeros(1, dtype=dt))
        logger.debug(f"Gaze predictor built with {self.parameter_count():,} parameters")

    def parameter_count(self) -> int:
        return self.params.count()

    def named_parameters(self) -> list[tuple[str, Parameter]]:
        return list(self.params.items())

    def config_echo(self) -> dict[str, str]:
        echo = {"kind": "gaze"}
        echo.update({f"gaze.{k}": str(v) for k, v in self.config.to_dict().items()})
        return echo

    def forward(self, tokens: TokenSequence) -> Tensor:
        """Differentiable per-token scores, shape (n,)."""
        ids = tokens.ids_array()
        if ids.size == 0:
            raise ValidationError("cannot predict gaze for an empty sequence")
        if ids.min() < 0 or ids.max() >= self.config.vocab_size:
            raise ValidationError(
                f"token ids out of gaze embedding range [0, {self.config.vocab_size}): max id {ids.max()}"
            )
        x = self.embedding[ids]
        hidden = concat([self.forward_lstm.run(x), self.backward_lstm.run(x, reverse=True)], axis=1)
        mask = tokens.pad_mask()
        for layer in self.layers:
            hidden = encoder_layer(hidden, layer, mask)
        return (hidden @ self.head_weight + self.head_bias).sigmoid().reshape(tokens.n)

    def __call__(self, tokens: TokenSequence) -> Tensor:
        return self.forward(tokens)


def predict_gaze(tokens: TokenSequence, model: GazePredictor) -> GazeScores:
    """Detached gaze scores for one framed sequence."""
    with no_grad():
        return GazeScores(model.forward(tokens).numpy().astype(np.float64))
