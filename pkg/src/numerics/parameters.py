"""
Named trainable parameters and seeded initialization.
"""

import math
from collections.abc import Iterator

import numpy as np

from numerics.tensor import Tensor
from utils.errors import ValidationError

__all__ = ["Parameter", "ParameterSet", "uniform_weight"]


class Parameter(Tensor):
    """Leaf tensor with a unique name inside its model."""

    def __init__(self, name: str, value: np.ndarray):
        super().__init__(value, requires_grad=True)
        self.name = name

    @property
    def value(self) -> np.ndarray:
        return self.data

    @property
    def gradient(self) -> np.ndarray:
        """Accumulated gradient, zeros when nothing has flowed in yet."""
        return self.grad if self.grad is not None else np.zeros_like(self.data)

    def __repr__(self) -> str:
        return f"Parameter({self.name!r}, shape={self.shape})"


class ParameterSet:
    """
    Ordered collection of Parameters keyed by unique name.

    Models register every weight here so that optimizers, gradient resets,
    checkpoints and snapshots can treat the model as a flat list.
    """

    def __init__(self, dtype=np.float64):
        self.dtype = np.dtype(dtype)
        self._params: dict[str, Parameter] = {}

    def add(self, name: str, value: np.ndarray) -> Parameter:
        if name in self._params:
            raise ValidationError(f"duplicate parameter name: {name}")
        param = Parameter(name, np.asarray(value, dtype=self.dtype))
        self._params[name] = param
        return param

    def __getitem__(self, name: str) -> Parameter:
        return self._params[name]

    def __contains__(self, name: str) -> bool:
        return name in self._params

    def __iter__(self) -> Iterator[Parameter]:
        return iter(self._params.values())

    def __len__(self) -> int:
        return len(self._params)

    def names(self) -> list[str]:
        return list(self._params)

    def items(self):
        return self._params.items()

    def zero_gradients(self) -> None:
        for param in self._params.values():
            param.grad = None

    def count(self) -> int:
        """Total number of scalar weights."""
        return int(sum(p.size for p in self._params.values()))

    def snapshot(self) -> dict[str, np.ndarray]:
        return {name: p.data.copy() for name, p in self._params.items()}

    def restore(self, snapshot: dict[str, np.ndarray]) -> None:
        for name, value in snapshot.items():
            self._params[name].data[...] = value


def uniform_weight(
    rng: np.random.Generator, shape: tuple[int, ...], fan_in: int, dtype=np.float64
) -> np.ndarray:
    """Draw weights from uniform(-1/sqrt(fan_in), 1/sqrt(fan_in))."""
    bound = 1.0 / math.sqrt(fan_in)
    return rng.uniform(-bound, bound, size=shape).astype(dtype)
