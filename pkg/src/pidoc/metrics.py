"""Run-level estimates and pointwise error traces for reporting.

The relative-error mean divides by the desired position, which vanishes
twice per command period; points where the divisor magnitude falls below a
mask threshold are excluded from both the sum and the count, and the
threshold is recorded with the run so the metric stays reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import AllPointsMaskedError, EmptyHistoryError, LengthMismatchError

__all__ = [
    "RunRecord",
    "abs_mean_error",
    "mean_loss",
    "normalized_time",
    "error_traces",
    "dominant_frequency",
]


def abs_mean_error(x_pred: np.ndarray, x_d: np.ndarray, eps: float) -> float:
    """Absolute value of the signed mean relative position error.

    Signed errors are averaged before taking the absolute value, so
    oscillating errors largely cancel; the result measures bias, not
    pointwise accuracy.
    """
    if len(x_pred) != len(x_d):
        raise LengthMismatchError(f"{len(x_pred)} predicted vs {len(x_d)} desired")
    if not eps > 0:
        raise ValueError(f"eps must be > 0, got {eps}")
    keep = np.abs(x_d) >= eps
    if not np.any(keep):
        raise AllPointsMaskedError(f"no desired position exceeds eps={eps}")
    rel = (x_pred[keep] - x_d[keep]) / x_d[keep]
    return float(abs(np.mean(rel)))


def mean_loss(loss_history: np.ndarray) -> float:
    """Average of the per-iteration loss totals."""
    if len(loss_history) == 0:
        raise EmptyHistoryError("loss history is empty")
    return float(np.mean(loss_history))


def normalized_time(wall_time: float, iterations: int, bench_time: float, bench_iterations: int) -> float:
    """Per-iteration wall time relative to the benchmark run's."""
    if min(wall_time, bench_time) <= 0 or min(iterations, bench_iterations) <= 0:
        raise ValueError("times and iteration counts must be positive")
    return (wall_time / iterations) / (bench_time / bench_iterations)


def error_traces(pred: tuple[np.ndarray, np.ndarray], desired: tuple[np.ndarray, np.ndarray]):
    """Velocity and acceleration error traces, desired minus predicted.

    `pred` is (velocity, acceleration) from the jet pass; `desired` is the
    matching command pair.  Returns (velocity errors, acceleration errors).
    """
    v_pred, a_pred = pred
    v_d, a_d = desired
    if len(v_pred) != len(v_d) or len(a_pred) != len(a_d):
        raise LengthMismatchError("error-trace arrays differ in length")
    return v_d - v_pred, a_d - a_pred


def dominant_frequency(trace: np.ndarray, dt: float) -> float:
    """Angular frequency of the strongest spectral component of `trace`.

    Mean-removed, Hann-windowed and zero-padded 16x so the peak location is
    resolved well below the raw bin spacing of a short window.
    """
    w = (trace - np.mean(trace)) * np.hanning(len(trace))
    padded = np.zeros(16 * len(w))
    padded[: len(w)] = w
    spectrum = np.abs(np.fft.rfft(padded))
    omegas = 2.0 * np.pi * np.fft.rfftfreq(len(padded), d=dt)
    return float(omegas[int(np.argmax(spectrum))])


@dataclass
class RunRecord:
    """Everything one experiment produces besides its artifact files."""

    config: dict
    abs_mean_err: float
    wall_time: float
    mean_loss: float
    norm_time: float
    iterations: int
    final_loss: float
    termination: str
    loss_history: np.ndarray
    mask_eps: float
    t: np.ndarray
    x_pred: np.ndarray
    v_pred: np.ndarray
    a_pred: np.ndarray
    x_desired: np.ndarray
    v_desired: np.ndarray
    a_desired: np.ndarray
    x_train: np.ndarray
    v_train: np.ndarray

    def summary_dict(self) -> dict:
        """Deterministic summary payload; wall time is kept in a sidecar."""
        return {
            "config": self.config,
            "abs_mean_err": self.abs_mean_err,
            "mean_loss": self.mean_loss,
            "norm_time": self.norm_time,
            "iterations": self.iterations,
            "final_loss": self.final_loss,
            "termination": self.termination,
            "mask_eps": self.mask_eps,
            "loss_history": [float(v) for v in self.loss_history],
        }

    def table_row(self) -> dict:
        return {
            "abs_mean_err": self.abs_mean_err,
            "train_time_s": self.wall_time,
            "mean_loss": self.mean_loss,
            "norm_time": self.norm_time,
        }
