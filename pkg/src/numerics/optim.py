"""
Adam optimizer and global-norm gradient clipping over Parameters.
"""

from collections.abc import Iterable

import numpy as np

from numerics.parameters import Parameter
from utils.errors import NumericalError

__all__ = ["Adam", "clip_grad_norm"]


class Adam:
    """Adam with bias correction; parameters without a gradient are skipped."""

    def __init__(
        self,
        params: Iterable[Parameter],
        lr: float = 1e-4,
        beta1: float = 0.9,
        beta2: float = 0.999,
        eps: float = 1e-8,
    ):
        self.params = list(params)
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m = {id(p): np.zeros_like(p.data) for p in self.params}
        self.v = {id(p): np.zeros_like(p.data) for p in self.params}

    def step(self) -> None:
        self.t += 1
        for p in self.params:
            if p.grad is None:
                continue
            g = p.grad
            m = self.m[id(p)]
            v = self.v[id(p)]
            m[:] = self.beta1 * m + (1 - self.beta1) * g
            v[:] = self.beta2 * v + (1 - self.beta2) * (g * g)
            m_hat = m / (1 - self.beta1**self.t)
            v_hat = v / (1 - self.beta2**self.t)
            p.data -= (self.lr * m_hat / (np.sqrt(v_hat) + self.eps)).astype(p.data.dtype)

    def zero_gradients(self) -> None:
        for p in self.params:
            p.grad = None


def clip_grad_norm(params: Iterable[Parameter], max_norm: float) -> float:
    """
    Scale all gradients so their joint L2 norm is at most max_norm.

    Returns:
        The norm before clipping
    """
    grads = [p.grad for p in params if p.grad is not None]
    total = float(np.sqrt(sum(float((g * g).sum()) for g in grads)))
    if not np.isfinite(total):
        raise NumericalError("gradient norm is not finite")
    if total > max_norm > 0:
        scale = max_norm / (total + 1e-12)
        for g in grads:
            g *= scale
    return total
