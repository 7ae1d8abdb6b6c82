"""
Encoder layer: multi-head attention, optionally gaze-modulated, plus FFN.

Gaze-modulated attention scales every key row by the gaze score of its
token before the dot product:

    Softmax(Q x (K ⊙ G)^T / sqrt(dim)) x V

G is n x dim with row j constant at g(x_j). Values are left untouched.
"""

import math
from dataclasses import dataclass

import numpy as np

from numerics import Parameter, ParameterSet, Tensor, as_tensor, concat, dropout, layer_norm, softmax_rows
from numerics.parameters import uniform_weight
from utils.errors import ShapeError, ValidationError

__all__ = ["EncoderLayerParams", "expand_gaze", "attention_logits", "attention", "encoder_layer"]


@dataclass
class EncoderLayerParams:
    """Fused d_model x d_model projections, split across heads at run time."""

    heads: int
    w_q: Parameter
    b_q: Parameter
    w_k: Parameter
    b_k: Parameter
    w_v: Parameter
    b_v: Parameter
    w_o: Parameter
    b_o: Parameter
    ln1_gamma: Parameter
    ln1_beta: Parameter
    w_ff1: Parameter
    b_ff1: Parameter
    w_ff2: Parameter
    b_ff2: Parameter
    ln2_gamma: Parameter
    ln2_beta: Parameter

    @classmethod
    def create(
        cls,
        params: ParameterSet,
        prefix: str,
        d_model: int,
        heads: int,
        d_ff: int,
        rng: np.random.Generator,
    ) -> "EncoderLayerParams":
        dt = params.dtype

        def weight(name, rows, cols):
            return params.add(f"{prefix}.{name}", uniform_weight(rng, (rows, cols), rows, dt))

        def const(name, size, value):
            return params.add(f"{prefix}.{name}", np.full(size, value, dtype=dt))

        return cls(
            heads=heads,
            w_q=weight("w_q", d_model, d_model),
            b_q=const("b_q", d_model, 0.0),
            w_k=weight("w_k", d_model, d_model),
            b_k=const("b_k", d_model, 0.0),
            w_v=weight("w_v", d_model, d_model),
            b_v=const("b_v", d_model, 0.0),
            w_o=weight("w_o", d_model, d_model),
            b_o=const("b_o", d_model, 0.0),
            ln1_gamma=const("ln1_gamma", d_model, 1.0),
            ln1_beta=const("ln1_beta", d_model, 0.0),
            w_ff1=weight("w_ff1", d_model, d_ff),
            b_ff1=const("b_ff1", d_ff, 0.0),
            w_ff2=weight("w_ff2", d_ff, d_model),
            b_ff2=const("b_ff2", d_model, 0.0),
            ln2_gamma=const("ln2_gamma", d_model, 1.0),
            ln2_beta=const("ln2_beta", d_model, 0.0),
        )

    @property
    def d_model(self) -> int:
        return self.w_q.shape[0]

    @property
    def dim(self) -> int:
        return self.d_model // self.heads


def expand_gaze(g, dim: int) -> Tensor:
    """Repeat each token's gaze score across dim columns: G[j, c] = g[j]."""
    g = as_tensor(g)
    if g.size == 0:
        raise ValidationError("gaze vector is empty")
    if dim < 1:
        raise ValidationError(f"dim must be at least 1, got {dim}")
    return g.reshape(g.size, 1) * np.ones((1, dim), dtype=g.dtype)


def attention_logits(q_h: Tensor, k_h: Tensor, gaze: Tensor | None = None) -> Tensor:
    """Pre-softmax scores for one head, keys scaled by gaze when given."""
    keys = k_h * gaze if gaze is not None else k_h
    return (q_h @ keys.T) * (1.0 / math.sqrt(q_h.shape[1]))


def attention(
    E: Tensor,
    layer: EncoderLayerParams,
    mask: np.ndarray | None = None,
    gaze: Tensor | None = None,
    dropout_rate: float = 0.0,
    rng: np.random.Generator | None = None,
) -> Tensor:
    """
    Multi-head self-attention sublayer with residual connection and layer norm.

    Args:
        E: Layer input, n x d_model
        layer: Parameters of this layer
        mask: Boolean per-position flags, True for [PAD] keys
        gaze: Optional GazeMatrix, n x dim
        dropout_rate: Dropout on attention probabilities
        rng: Generator driving dropout; None disables it

    Returns:
        n x d_model output of LayerNorm(E + MultiHead(E))
    """
    n = E.shape[0]
    dim = layer.dim
    key_mask = None
    if mask is not None:
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != (n,):
            raise ShapeError(f"mask length {mask.shape} does not match sequence length {n}")
        key_mask = mask[np.newaxis, :]
    if gaze is not None and gaze.shape != (n, dim):
        raise ShapeError(f"gaze matrix shape {gaze.shape} does not match ({n}, {dim})")

    Q = E @ layer.w_q + layer.b_q
    K = E @ layer.w_k + layer.b_k
    V = E @ layer.w_v + layer.b_v

    heads = []
    for h in range(layer.heads):
        cols = slice(h * dim, (h + 1) * dim)
        logits = attention_logits(Q[:, cols], K[:, cols], gaze)
        probs = dropout(softmax_rows(logits, mask=key_mask), dropout_rate, rng)
        heads.append(probs @ V[:, cols])

    context = concat(heads, axis=1) if len(heads) > 1 else heads[0]
    return layer_norm(E + context @ layer.w_o + layer.b_o, layer.ln1_gamma, layer.ln1_beta)


def encoder_layer(
    E: Tensor,
    layer: EncoderLayerParams,
    mask: np.ndarray | None = None,
    gaze: Tensor | None = None,
    dropout_rate: float = 0.0,
    rng: np.random.Generator | None = None,
) -> Tensor:
    """Post-norm encoder layer: attention sublayer then position-wise FFN."""
    attended = attention(E, layer, mask, gaze, dropout_rate, rng)
    hidden = (attended @ layer.w_ff1 + layer.b_ff1).relu()
    return layer_norm(attended + hidden @ layer.w_ff2 + layer.b_ff2, layer.ln2_gamma, layer.ln2_beta)
