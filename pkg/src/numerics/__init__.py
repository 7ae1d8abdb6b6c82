"""
Dense tensors, reverse-mode gradients and the optimizers built on them.
"""

from .functions import (
    clamp,
    concat,
    dropout,
    l2_normalize_rows,
    layer_norm,
    log_softmax_rows,
    matmul,
    softmax_rows,
)
from .gradcheck import finite_difference_check
from .optim import Adam, clip_grad_norm
from .parameters import Parameter, ParameterSet, uniform_weight
from .tensor import Tensor, as_tensor, grad_enabled, no_grad

__all__ = [
    "Tensor",
    "as_tensor",
    "no_grad",
    "grad_enabled",
    "Parameter",
    "ParameterSet",
    "uniform_weight",
    "matmul",
    "softmax_rows",
    "log_softmax_rows",
    "layer_norm",
    "concat",
    "clamp",
    "dropout",
    "l2_normalize_rows",
    "finite_difference_check",
    "Adam",
    "clip_grad_norm",
]
