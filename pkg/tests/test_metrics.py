import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pidoc.errors import AllPointsMaskedError, EmptyHistoryError, LengthMismatchError
from pidoc.metrics import (
    abs_mean_error,
    dominant_frequency,
    error_traces,
    mean_loss,
    normalized_time,
)


def test_abs_mean_error_zero_at_match():
    t = np.linspace(0.0, 30.0, 500)
    x_d = 2.0 * np.sin(t)
    assert abs_mean_error(x_d, x_d, eps=2e-3) == 0.0


def test_abs_mean_error_constant_relative_offset():
    t = np.linspace(0.0, 30.0, 500)
    x_d = 2.0 * np.sin(t)
    assert abs_mean_error(1.1 * x_d, x_d, eps=2e-3) == pytest.approx(0.1, rel=1e-12)


def test_abs_mean_error_masks_small_divisors():
    x_d = np.array([0.0, 1e-9, 1.0, -1.0])
    x_pred = np.array([5.0, 5.0, 1.1, -1.1])
    assert abs_mean_error(x_pred, x_d, eps=1e-3) == pytest.approx(0.1, rel=1e-12)


def test_abs_mean_error_all_masked():
    with pytest.raises(AllPointsMaskedError):
        abs_mean_error(np.ones(4), np.zeros(4), eps=1e-3)


def test_abs_mean_error_length_mismatch():
    with pytest.raises(LengthMismatchError):
        abs_mean_error(np.ones(3), np.ones(4), eps=1e-3)


@given(scale=st.floats(min_value=1e-3, max_value=1e3), flip=st.booleans())
def test_abs_mean_error_scale_invariant(scale, flip):
    t = np.linspace(0.0, 30.0, 200)
    x_d = 2.0 * np.sin(t)
    x_pred = x_d + 0.05 * np.cos(3 * t)
    c = -scale if flip else scale
    base = abs_mean_error(x_pred, x_d, eps=2e-3)
    scaled = abs_mean_error(c * x_pred, c * x_d, eps=abs(c) * 2e-3)
    assert scaled == pytest.approx(base, rel=1e-9)


def test_mean_loss_examples():
    assert mean_loss(np.array([6.0])) == 6.0
    assert mean_loss(np.array([4.0, 2.0])) == 3.0
    assert mean_loss(np.array([1.0, 1.0, 1.0, 1.0])) == 1.0


def test_mean_loss_empty():
    with pytest.raises(EmptyHistoryError):
        mean_loss(np.array([]))


def test_normalized_time():
    assert normalized_time(10.0, 100, 10.0, 100) == 1.0
    assert normalized_time(20.0, 100, 10.0, 100) == 2.0
    assert normalized_time(10.0, 200, 10.0, 100) == 0.5
    with pytest.raises(ValueError):
        normalized_time(0.0, 1, 1.0, 1)


def test_error_traces_zero_at_match():
    v = np.linspace(-1, 1, 50)
    a = np.cos(v)
    e_vel, e_acc = error_traces((v, a), (v, a))
    assert np.all(e_vel == 0.0) and np.all(e_acc == 0.0)


def test_error_traces_sign_convention():
    v_d = np.zeros(10)
    a_d = np.zeros(10)
    e_vel, e_acc = error_traces((v_d, a_d + 1.0), (v_d, a_d))
    assert np.all(e_acc == -1.0)
    with pytest.raises(LengthMismatchError):
        error_traces((np.zeros(3), np.zeros(3)), (np.zeros(4), np.zeros(4)))


def test_dominant_frequency_of_pure_tone():
    t = np.linspace(0.0, 30.0, 3000)
    for omega in (0.7, 1.0, 2.3):
        trace = np.sin(omega * t + 0.3) + 0.05 * np.sin(7.7 * t)
        got = dominant_frequency(trace, dt=t[1] - t[0])
        assert got == pytest.approx(omega, rel=0.02)
