"""
Central finite-difference oracle for analytic gradients.
"""

from collections.abc import Callable, Sequence

import numpy as np

from numerics.tensor import Tensor
from utils.errors import NumericalError, ValidationError
from utils.structured_logger import get_logger

logger = get_logger(__name__)

__all__ = ["finite_difference_check"]


def finite_difference_check(
    f: Callable[[], Tensor],
    params: Sequence[Tensor],
    eps: float = 1e-4,
    max_coords: int = 24,
    seed: int = 0,
) -> float:
    """
    Compare backward() against central differences on sampled coordinates.

    Args:
        f: Closure recomputing a scalar loss from the current values of params
        params: Leaf tensors (requires_grad=True) whose gradients are checked
        eps: Perturbation size, in [1e-6, 1e-3]
        max_coords: Coordinates sampled per tensor (all of them when smaller)
        seed: Seed for coordinate sampling

    Returns:
        max |g_analytic - g_fd| / max(1, |g_analytic|, |g_fd|)

    Raises:
        NumericalError: f is not deterministic
    """
    if not 1e-6 <= eps <= 1e-3:
        raise ValidationError(f"eps must lie in [1e-6, 1e-3], got {eps}")

    first, second = f().item(), f().item()
    if first != second:
        raise NumericalError(f"function is not deterministic: {first!r} != {second!r}")

    for p in params:
        p.data = np.ascontiguousarray(p.data)  # perturbations go through a flat view
        p.grad = None
    f().backward()
    analytic = [p.grad.copy() if p.grad is not None else np.zeros_like(p.data) for p in params]

    rng = np.random.default_rng(seed)
    worst = 0.0
    for p, grad in zip(params, analytic, strict=True):
        flat = p.data.reshape(-1)
        count = flat.size
        coords = np.arange(count) if count <= max_coords else rng.choice(count, max_coords, replace=False)
        for c in coords:
            original = flat[c]
            flat[c] = original + eps
            plus = f().item()
            flat[c] = original - eps
            minus = f().item()
            flat[c] = original
            numeric = (plus - minus) / (2 * eps)
            exact = grad.reshape(-1)[c]
            err = abs(exact - numeric) / max(1.0, abs(exact), abs(numeric))
            worst = max(worst, float(err))

    logger.debug(f"finite-difference check over {len(params)} tensors: max rel err {worst:.3e}")
    return worst
