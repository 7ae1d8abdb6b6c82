"""
Differentiable primitives and the public functional API.

Each primitive is a Function with an explicit backward. Broadcasting
binary ops reduce their gradients back to the input shape.
"""

import numpy as np

from numerics.tensor import Function, Tensor, as_tensor
from utils.errors import ShapeError, ValidationError

__all__ = [
    "matmul",
    "softmax_rows",
    "log_softmax_rows",
    "layer_norm",
    "concat",
    "clamp",
    "dropout",
    "l2_normalize_rows",
]


def _unbroadcast(grad: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    if grad.shape == shape:
        return grad
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, extent in enumerate(shape):
        if extent == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


# ---- elementwise arithmetic ----


class Add(Function):
    def forward(self, x, y):
        self.shapes = (x.shape, y.shape)
        return x + y

    def backward(self, grad):
        sx, sy = self.shapes
        return _unbroadcast(grad, sx), _unbroadcast(grad, sy)


class Sub(Function):
    def forward(self, x, y):
        self.shapes = (x.shape, y.shape)
        return x - y

    def backward(self, grad):
        sx, sy = self.shapes
        return _unbroadcast(grad, sx), _unbroadcast(-grad, sy)


class Mul(Function):
    def forward(self, x, y):
        self.x, self.y = x, y
        return x * y

    def backward(self, grad):
        return (
            _unbroadcast(grad * self.y, self.x.shape),
            _unbroadcast(grad * self.x, self.y.shape),
        )


class Div(Function):
    def forward(self, x, y):
        self.x, self.y = x, y
        return x / y

    def backward(self, grad):
        return (
            _unbroadcast(grad / self.y, self.x.shape),
            _unbroadcast(-grad * self.x / (self.y * self.y), self.y.shape),
        )


class Neg(Function):
    def forward(self, x):
        return -x

    def backward(self, grad):
        return -grad


class Pow(Function):
    def forward(self, x, power: float):
        self.x, self.power = x, power
        return x**power

    def backward(self, grad):
        return grad * self.power * self.x ** (self.power - 1)


class Exp(Function):
    def forward(self, x):
        self.out = np.exp(x)
        return self.out

    def backward(self, grad):
        return grad * self.out


class Log(Function):
    def forward(self, x):
        self.x = x
        return np.log(x)

    def backward(self, grad):
        return grad / self.x


class Tanh(Function):
    def forward(self, x):
        self.out = np.tanh(x)
        return self.out

    def backward(self, grad):
        return grad * (1.0 - self.out * self.out)


class Sigmoid(Function):
    def forward(self, x):
        # split by sign so exp never overflows
        out = np.empty_like(x)
        pos = x >= 0
        out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
        ex = np.exp(x[~pos])
        out[~pos] = ex / (1.0 + ex)
        self.out = out
        return out

    def backward(self, grad):
        return grad * self.out * (1.0 - self.out)


class Relu(Function):
    def forward(self, x):
        self.active = x > 0
        return np.where(self.active, x, 0.0).astype(x.dtype)

    def backward(self, grad):
        return grad * self.active


class Clamp(Function):
    def forward(self, x, low: float, high: float):
        self.inside = (x >= low) & (x <= high)
        return np.clip(x, low, high)

    def backward(self, grad):
        return grad * self.inside


# ---- shape and reduction ----


class MatMul(Function):
    def forward(self, a, b):
        if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
            raise ShapeError(f"matmul shape mismatch: {a.shape} x {b.shape}")
        self.a, self.b = a, b
        return a @ b

    def backward(self, grad):
        return grad @ self.b.T, self.a.T @ grad


class Transpose(Function):
    def forward(self, x):
        return x.T

    def backward(self, grad):
        return grad.T


class Reshape(Function):
    def forward(self, x, shape):
        self.in_shape = x.shape
        return x.reshape(shape)

    def backward(self, grad):
        return grad.reshape(self.in_shape)


class Sum(Function):
    def forward(self, x, axis=None, keepdims=False):
        self.in_shape, self.axis, self.keepdims = x.shape, axis, keepdims
        return np.sum(x, axis=axis, keepdims=keepdims)

    def backward(self, grad):
        if self.axis is not None and not self.keepdims:
            grad = np.expand_dims(grad, self.axis)
        return np.broadcast_to(grad, self.in_shape).copy()


class Mean(Function):
    def forward(self, x, axis=None, keepdims=False):
        self.in_shape, self.axis, self.keepdims = x.shape, axis, keepdims
        self.count = x.size if axis is None else np.prod([x.shape[a] for a in np.atleast_1d(axis)])
        return np.mean(x, axis=axis, keepdims=keepdims)

    def backward(self, grad):
        if self.axis is not None and not self.keepdims:
            grad = np.expand_dims(grad, self.axis)
        return np.broadcast_to(grad / self.count, self.in_shape).copy()


class Max(Function):
    """Max along one axis; the gradient goes to the first maximal entry."""

    def forward(self, x, axis: int):
        self.in_shape, self.axis = x.shape, axis
        self.index = np.expand_dims(np.argmax(x, axis=axis), axis)
        return np.take_along_axis(x, self.index, axis=axis).squeeze(axis)

    def backward(self, grad):
        out = np.zeros(self.in_shape, dtype=grad.dtype)
        np.put_along_axis(out, self.index, np.expand_dims(grad, self.axis), axis=self.axis)
        return out


class GetItem(Function):
    def forward(self, x, index):
        self.in_shape, self.index = x.shape, index
        return x[index]

    def backward(self, grad):
        out = np.zeros(self.in_shape, dtype=grad.dtype)
        np.add.at(out, self.index, grad)
        return out


class Concat(Function):
    def forward(self, *arrays, axis: int = 0):
        self.axis = axis
        self.bounds = np.cumsum([a.shape[axis] for a in arrays])[:-1]
        return np.concatenate(arrays, axis=axis)

    def backward(self, grad):
        return tuple(np.split(grad, self.bounds, axis=self.axis))


# ---- normalization ----


class SoftmaxRows(Function):
    def forward(self, x, mask=None):
        if mask is not None:
            mask = np.broadcast_to(mask, x.shape)
            if mask.all(axis=-1).any():
                raise ValidationError("softmax row has every position masked")
            x = np.where(mask, -np.inf, x)
        shifted = x - x.max(axis=-1, keepdims=True)
        e = np.exp(shifted)
        self.out = e / e.sum(axis=-1, keepdims=True)
        return self.out

    def backward(self, grad):
        p = self.out
        return p * (grad - (grad * p).sum(axis=-1, keepdims=True))


class LogSoftmaxRows(Function):
    def forward(self, x):
        shifted = x - x.max(axis=-1, keepdims=True)
        log_norm = np.log(np.exp(shifted).sum(axis=-1, keepdims=True))
        out = shifted - log_norm
        self.probs = np.exp(out)
        return out

    def backward(self, grad):
        return grad - self.probs * grad.sum(axis=-1, keepdims=True)


class LayerNorm(Function):
    def forward(self, x, gamma, beta, eps: float):
        self.inv_std = 1.0 / np.sqrt(x.var(axis=-1, keepdims=True) + eps)
        self.xhat = (x - x.mean(axis=-1, keepdims=True)) * self.inv_std
        self.gamma = gamma
        return self.xhat * gamma + beta

    def backward(self, grad):
        lead = tuple(range(grad.ndim - 1))
        d_gamma = (grad * self.xhat).sum(axis=lead)
        d_beta = grad.sum(axis=lead)
        d_xhat = grad * self.gamma
        d_x = self.inv_std * (
            d_xhat
            - d_xhat.mean(axis=-1, keepdims=True)
            - self.xhat * (d_xhat * self.xhat).mean(axis=-1, keepdims=True)
        )
        return d_x, d_gamma, d_beta


# ---- public functional API ----


def matmul(a, b) -> Tensor:
    """Matrix product of two 2-d tensors."""
    return MatMul.apply(a, b)


def softmax_rows(m, mask: np.ndarray | None = None) -> Tensor:
    """
    Row-wise softmax over the last axis, stabilized by subtracting the row max.

    Args:
        m: Logits
        mask: Optional boolean array broadcastable to m; True positions get
              -inf logits and zero probability

    Returns:
        Tensor of probabilities, each row summing to 1
    """
    return SoftmaxRows.apply(m, mask=mask)


def log_softmax_rows(m) -> Tensor:
    return LogSoftmaxRows.apply(m)


def layer_norm(x, gamma, beta, eps: float = 1e-5) -> Tensor:
    """Normalize each row to zero mean and unit variance, then apply gamma/beta."""
    x, gamma, beta = as_tensor(x), as_tensor(gamma), as_tensor(beta)
    d = x.shape[-1]
    if d < 1:
        raise ShapeError("layer_norm needs at least one feature column")
    if eps <= 0:
        raise ValidationError(f"layer_norm eps must be positive, got {eps}")
    if gamma.shape != (d,) or beta.shape != (d,):
        raise ShapeError(
            f"layer_norm shape mismatch: x {x.shape}, gamma {gamma.shape}, beta {beta.shape}"
        )
    return LayerNorm.apply(x, gamma, beta, eps=eps)


def concat(tensors: list, axis: int = 0) -> Tensor:
    return Concat.apply(*tensors, axis=axis)


def clamp(x, low: float, high: float) -> Tensor:
    return Clamp.apply(x, low=low, high=high)


def dropout(x: Tensor, rate: float, rng: np.random.Generator | None) -> Tensor:
    """Inverted dropout; identity when rate is 0 or no generator is given."""
    if rate <= 0.0 or rng is None:
        return x
    keep = (rng.random(x.shape) >= rate).astype(x.dtype) / (1.0 - rate)
    return x * keep


def l2_normalize_rows(x: Tensor, eps: float = 1e-12) -> Tensor:
    norms = ((x * x).sum(axis=-1, keepdims=True) + eps) ** 0.5
    return x / norms
