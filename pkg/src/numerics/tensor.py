"""
Dense tensors with a reverse-mode gradient tape.

Every differentiable operation is a Function subclass. Applying one to
tensors that require gradients records the Function instance on the output
tensor; Tensor.backward() walks that record in reverse topological order
and hands each Function the upstream gradient.

Leaf tensors that require gradients (Parameters, or inputs flagged for a
gradient check) accumulate into .grad across backward() calls until
zero_gradients()/zero_grad() resets them.
"""

import threading
from collections.abc import Iterable, Iterator
from contextlib import contextmanager

import numpy as np

from utils.errors import NumericalError, ShapeError

__all__ = ["Tensor", "Function", "as_tensor", "no_grad", "grad_enabled"]

DEFAULT_DTYPE = np.float64

_grad_state = threading.local()


def grad_enabled() -> bool:
    """Whether operations on this thread record the tape."""
    return getattr(_grad_state, "enabled", True)


@contextmanager
def no_grad() -> Iterator[None]:
    """Evaluate without recording the tape on the current thread; nests and restores."""
    previous = grad_enabled()
    _grad_state.enabled = False
    try:
        yield
    finally:
        _grad_state.enabled = previous


class Tensor:
    """Immutable-by-convention n-d array node in the computation graph."""

    def __init__(self, data, requires_grad: bool = False, _ctx: "Function | None" = None):
        array = np.asarray(data)
        if not np.issubdtype(array.dtype, np.floating):
            array = array.astype(DEFAULT_DTYPE)
        self.data: np.ndarray = array
        self.requires_grad = requires_grad
        self.grad: np.ndarray | None = None
        self._ctx = _ctx

    # ---- basic properties ----

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def dtype(self):
        return self.data.dtype

    @property
    def size(self) -> int:
        return self.data.size

    @property
    def T(self) -> "Tensor":
        return F.Transpose.apply(self)

    def __len__(self) -> int:
        return len(self.data)

    def __repr__(self) -> str:
        return f"Tensor(shape={self.shape}, dtype={self.dtype}, requires_grad={self.requires_grad})"

    def item(self) -> float:
        if self.data.size != 1:
            raise ShapeError(f"item() needs a single value, got shape {self.shape}")
        return float(self.data.reshape(()))

    def numpy(self) -> np.ndarray:
        return self.data

    def detach(self) -> "Tensor":
        return Tensor(self.data)

    def zero_grad(self) -> None:
        self.grad = None

    # ---- gradient tape ----

    def backward(self) -> None:
        """Propagate d(self)/d(leaf) into every reachable leaf requiring gradients."""
        if self.data.size != 1:
            raise ShapeError(f"backward() needs a scalar loss, got shape {self.shape}")
        if not np.isfinite(self.data).all():
            raise NumericalError(f"loss is not finite: {self.data.reshape(())}")
        if not self.requires_grad:
            return

        pending: dict[int, np.ndarray] = {id(self): np.ones_like(self.data)}
        for node in _reverse_topological(self):
            grad = pending.pop(id(node), None)
            if grad is None:
                continue
            if node._ctx is None:
                node.grad = grad.copy() if node.grad is None else node.grad + grad
                continue

            parent_grads = node._ctx.backward(grad)
            if not isinstance(parent_grads, tuple):
                parent_grads = (parent_grads,)
            for parent, parent_grad in zip(node._ctx.parents, parent_grads, strict=False):
                if parent_grad is None or not parent.requires_grad:
                    continue
                if not np.isfinite(parent_grad).all():
                    raise NumericalError(
                        f"non-finite gradient flowing out of {type(node._ctx).__name__}"
                    )
                key = id(parent)
                pending[key] = parent_grad if key not in pending else pending[key] + parent_grad

    # ---- operators ----

    def _lift(self, other) -> "Tensor":
        if isinstance(other, Tensor):
            return other
        return Tensor(np.asarray(other, dtype=self.data.dtype))

    def __add__(self, other):
        return F.Add.apply(self, self._lift(other))

    def __radd__(self, other):
        return F.Add.apply(self._lift(other), self)

    def __sub__(self, other):
        return F.Sub.apply(self, self._lift(other))

    def __rsub__(self, other):
        return F.Sub.apply(self._lift(other), self)

    def __mul__(self, other):
        return F.Mul.apply(self, self._lift(other))

    def __rmul__(self, other):
        return F.Mul.apply(self._lift(other), self)

    def __truediv__(self, other):
        return F.Div.apply(self, self._lift(other))

    def __rtruediv__(self, other):
        return F.Div.apply(self._lift(other), self)

    def __neg__(self):
        return F.Neg.apply(self)

    def __pow__(self, power: float):
        return F.Pow.apply(self, power=float(power))

    def __matmul__(self, other):
        return F.MatMul.apply(self, self._lift(other))

    def __getitem__(self, index):
        return F.GetItem.apply(self, index=index)

    def sum(self, axis=None, keepdims: bool = False) -> "Tensor":
        return F.Sum.apply(self, axis=axis, keepdims=keepdims)

    def mean(self, axis=None, keepdims: bool = False) -> "Tensor":
        return F.Mean.apply(self, axis=axis, keepdims=keepdims)

    def max(self, axis: int) -> "Tensor":
        return F.Max.apply(self, axis=axis)

    def reshape(self, *shape) -> "Tensor":
        if len(shape) == 1 and isinstance(shape[0], tuple | list):
            shape = tuple(shape[0])
        return F.Reshape.apply(self, shape=shape)

    def exp(self) -> "Tensor":
        return F.Exp.apply(self)

    def log(self) -> "Tensor":
        return F.Log.apply(self)

    def tanh(self) -> "Tensor":
        return F.Tanh.apply(self)

    def sigmoid(self) -> "Tensor":
        return F.Sigmoid.apply(self)

    def relu(self) -> "Tensor":
        return F.Relu.apply(self)


class Function:
    """One recorded operation: forward on arrays, backward on the upstream gradient."""

    parents: tuple[Tensor, ...] = ()

    @classmethod
    def apply(cls, *inputs, **kwargs) -> Tensor:
        parents = tuple(as_tensor(x) for x in inputs)
        fn = cls()
        out = fn.forward(*(p.data for p in parents), **kwargs)
        if grad_enabled() and any(p.requires_grad for p in parents):
            fn.parents = parents
            return Tensor(out, requires_grad=True, _ctx=fn)
        return Tensor(out)

    def forward(self, *arrays: np.ndarray, **kwargs) -> np.ndarray:
        raise NotImplementedError

    def backward(self, grad: np.ndarray):
        raise NotImplementedError


def as_tensor(value) -> Tensor:
    """Wrap arrays and scalars as constant tensors; tensors pass through."""
    if isinstance(value, Tensor):
        return value
    return Tensor(value)


def _reverse_topological(root: Tensor) -> Iterable[Tensor]:
    """Nodes reachable from root, outputs before inputs. Iterative to survive long recurrences."""
    order: list[Tensor] = []
    visited: set[int] = set()
    stack: list[tuple[Tensor, bool]] = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in visited:
            continue
        visited.add(id(node))
        stack.append((node, True))
        if node._ctx is not None:
            for parent in node._ctx.parents:
                if parent.requires_grad and id(parent) not in visited:
                    stack.append((parent, False))
    return reversed(order)


from numerics import functions as F  # noqa: E402
