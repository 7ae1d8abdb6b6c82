"""
Encoder stack: token + learned position embeddings followed by L layers.
"""

import numpy as np

from encoder.attention import EncoderLayerParams, encoder_layer, expand_gaze
from encoder.config import EncoderConfig, GazeMode
from numerics import ParameterSet, Tensor, layer_norm
from numerics.parameters import uniform_weight
from tokenizer import TokenSequence
from utils.errors import ValidationError

__all__ = ["EncoderStack"]


class EncoderStack:
    """Embeddings and encoder layers registered under one parameter prefix."""

    def __init__(
        self,
        config: EncoderConfig,
        params: ParameterSet,
        prefix: str,
        rng: np.random.Generator,
    ):
        self.config = config
        self.prefix = prefix
        dt = params.dtype
        d = config.d_model
        self.token_embedding = params.add(
            f"{prefix}.token_embedding", uniform_weight(rng, (config.vocab_size, d), d, dt)
        )
        self.position_embedding = params.add(
            f"{prefix}.position_embedding", uniform_weight(rng, (config.max_len, d), d, dt)
        )
        self.embedding_gamma = params.add(f"{prefix}.embedding_ln_gamma", np.ones(d, dtype=dt))
        self.embedding_beta = params.add(f"{prefix}.embedding_ln_beta", np.zeros(d, dtype=dt))
        self.layers = [
            EncoderLayerParams.create(params, f"{prefix}.layer{i}", d, config.heads, config.d_ff, rng)
            for i in range(config.layers)
        ]
        self.training = False
        self.dropout_rng: np.random.Generator | None = None

    def embed(self, tokens: TokenSequence) -> Tensor:
        """E_0: layer-normed sum of token and position embeddings."""
        ids = tokens.ids_array()
        if ids.size == 0:
            raise ValidationError("cannot encode an empty token sequence")
        if ids.min() < 0 or ids.max() >= self.config.vocab_size:
            raise ValidationError(
                f"token ids out of embedding range [0, {self.config.vocab_size}): max id {ids.max()}"
            )
        if tokens.n > self.config.max_len:
            raise ValidationError(f"sequence length {tokens.n} exceeds max_len {self.config.max_len}")
        summed = self.token_embedding[ids] + self.position_embedding[: tokens.n]
        return layer_norm(summed, self.embedding_gamma, self.embedding_beta)

    def encode(
        self,
        tokens: TokenSequence,
        gaze: Tensor | None = None,
        mode: GazeMode = GazeMode.NONE,
        embeddings: Tensor | None = None,
    ) -> Tensor:
        """
        Run the stack and return E_L (n x d_model).

        Args:
            tokens: Framed input
            gaze: Per-token gaze scores (n,), required unless mode is NONE
            mode: LAST_LAYER modulates only layer L, ALL_LAYERS every layer
            embeddings: Replacement for embed(tokens), e.g. gaze-scaled inputs
        """
        if mode is not GazeMode.NONE and gaze is None:
            raise ValidationError(f"gaze mode {mode.name} needs gaze scores")
        E = embeddings if embeddings is not None else self.embed(tokens)
        mask = tokens.pad_mask()
        G = expand_gaze(gaze, self.config.dim) if mode is not GazeMode.NONE else None

        rate = self.config.attn_dropout if self.training else 0.0
        last = len(self.layers) - 1
        for i, layer in enumerate(self.layers):
            use_gaze = mode is GazeMode.ALL_LAYERS or (mode is GazeMode.LAST_LAYER and i == last)
            E = encoder_layer(E, layer, mask, G if use_gaze else None, rate, self.dropout_rng)
        return E
