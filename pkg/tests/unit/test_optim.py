import numpy as np
import pytest

from numerics import Adam, Parameter, ParameterSet, clip_grad_norm, uniform_weight
from utils.errors import NumericalError, ValidationError


def test_adam_first_step_moves_by_lr():
    """With bias correction the first update is lr * sign(grad)."""
    p = Parameter("p", np.array([1.0, -1.0]))
    p.grad = np.array([0.5, -2.0])
    Adam([p], lr=0.1).step()
    np.testing.assert_allclose(p.data, [0.9, -0.9], atol=1e-6)


def test_adam_skips_parameters_without_gradient():
    p = Parameter("p", np.array([1.0]))
    Adam([p], lr=0.1).step()
    np.testing.assert_array_equal(p.data, [1.0])


def test_adam_minimizes_quadratic():
    p = Parameter("p", np.array([3.0, -2.0]))
    optimizer = Adam([p], lr=0.1)
    for _ in range(300):
        optimizer.zero_gradients()
        ((p - 1.0) * (p - 1.0)).sum().backward()
        optimizer.step()
    np.testing.assert_allclose(p.data, [1.0, 1.0], atol=5e-2)


def test_clip_grad_norm_scales_to_max():
    a = Parameter("a", np.zeros(2))
    b = Parameter("b", np.zeros(1))
    a.grad = np.array([3.0, 0.0])
    b.grad = np.array([4.0])
    norm = clip_grad_norm([a, b], 1.0)
    assert norm == pytest.approx(5.0)
    total = np.sqrt((a.grad**2).sum() + (b.grad**2).sum())
    assert total == pytest.approx(1.0, abs=1e-9)


def test_clip_grad_norm_leaves_small_gradients():
    a = Parameter("a", np.zeros(2))
    a.grad = np.array([0.3, 0.4])
    assert clip_grad_norm([a], 1.0) == pytest.approx(0.5)
    np.testing.assert_allclose(a.grad, [0.3, 0.4])


def test_clip_grad_norm_rejects_non_finite():
    a = Parameter("a", np.zeros(1))
    a.grad = np.array([np.inf])
    with pytest.raises(NumericalError):
        clip_grad_norm([a], 1.0)


class TestParameterSet:
    def test_duplicate_name_rejected(self):
        params = ParameterSet()
        params.add("w", np.zeros(2))
        with pytest.raises(ValidationError, match="duplicate"):
            params.add("w", np.zeros(2))

    def test_dtype_applied(self):
        params = ParameterSet(np.float32)
        assert params.add("w", np.zeros(2)).dtype == np.float32

    def test_snapshot_restore(self):
        params = ParameterSet()
        w = params.add("w", np.array([1.0, 2.0]))
        snapshot = params.snapshot()
        w.data[...] = 0.0
        params.restore(snapshot)
        np.testing.assert_array_equal(w.data, [1.0, 2.0])

    def test_count_and_order(self):
        params = ParameterSet()
        params.add("b", np.zeros((2, 3)))
        params.add("a", np.zeros(4))
        assert params.names() == ["b", "a"]
        assert params.count() == 10


def test_uniform_weight_bounds(rng):
    w = uniform_weight(rng, (50, 50), fan_in=16)
    assert np.abs(w).max() <= 0.25
