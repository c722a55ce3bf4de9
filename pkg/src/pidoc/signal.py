"""Desired control trajectory: a fixed-frequency sinusoid with tunable amplitude."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["DesiredSignal", "desired"]


@dataclass(frozen=True)
class DesiredSignal:
    """Command signal x(t) = amplitude * sin(t)."""

    amplitude: float

    def __post_init__(self) -> None:
        if not self.amplitude > 0:
            raise ValueError(f"amplitude must be > 0, got {self.amplitude}")


def desired(sig: DesiredSignal, t):
    """Return (position, velocity, acceleration) of the command at time t.

    Accepts a scalar or an array of times; the acceleration equals the
    negated position, so the phase-space image is a circle of radius
    `sig.amplitude`.
    """
    s = np.sin(t)
    c = np.cos(t)
    return sig.amplitude * s, sig.amplitude * c, -sig.amplitude * s
