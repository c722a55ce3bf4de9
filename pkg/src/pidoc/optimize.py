"""Limited-memory BFGS with a strong-Wolfe line search.

The problem is unconstrained, full-batch and deterministic, so the driver is
a plain two-loop recursion over the most recent curvature pairs plus a
bracket/zoom line search with cubic interpolation.  Every accepted step
satisfies sufficient decrease, so the recorded loss history is
non-increasing by construction.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

import numpy as np

__all__ = [
    "Termination",
    "LbfgsOptions",
    "OptimResult",
    "NonFiniteObjectiveError",
    "minimize",
]

_MAX_LINE_SEARCH_EVALS = 50


class Termination(str, Enum):
    GRAD_TOL = "grad_tol"
    F_REL_TOL = "f_rel_tol"
    MAX_ITERS = "max_iters"
    LINE_SEARCH_FAILURE = "line_search_failure"


@dataclass(frozen=True)
class LbfgsOptions:
    memory: int = 10
    max_iters: int = 200_000
    grad_tol: float = 1e-8
    f_rel_tol: float = 1e-12
    wolfe_c1: float = 1e-4
    wolfe_c2: float = 0.9

    def __post_init__(self) -> None:
        if not 0.0 < self.wolfe_c1 < self.wolfe_c2 < 1.0:
            raise ValueError(f"need 0 < c1 < c2 < 1, got ({self.wolfe_c1}, {self.wolfe_c2})")
        if self.memory < 0:
            raise ValueError(f"memory must be >= 0, got {self.memory}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")


@dataclass
class OptimResult:
    final_params: np.ndarray
    final_loss: float
    iterations: int
    loss_history: np.ndarray
    termination: Termination


class NonFiniteObjectiveError(RuntimeError):
    """Loss or gradient became non-finite; `.result` holds the last good iterate."""

    def __init__(self, message: str, result: OptimResult):
        super().__init__(message)
        self.result = result


Objective = Callable[[np.ndarray], tuple[float, np.ndarray]]
Callback = Callable[[int, np.ndarray, float], None]


def _cubic_min(a_lo, f_lo, g_lo, a_hi, f_hi, g_hi) -> float:
    """Minimizer of the cubic Hermite fit; NaN when the fit is degenerate."""
    d1 = g_lo + g_hi - 3.0 * (f_lo - f_hi) / (a_lo - a_hi)
    radicand = d1 * d1 - g_lo * g_hi
    if radicand < 0.0:
        return math.nan
    d2 = math.copysign(math.sqrt(radicand), a_hi - a_lo)
    denom = g_hi - g_lo + 2.0 * d2
    if denom == 0.0:
        return math.nan
    return a_hi - (a_hi - a_lo) * (g_hi + d2 - d1) / denom


class _LineSearch:
    """Strong-Wolfe search along d from x, sharing one evaluation budget."""

    def __init__(self, objective: Objective, opts: LbfgsOptions):
        self.objective = objective
        self.c1 = opts.wolfe_c1
        self.c2 = opts.wolfe_c2

    def search(self, x, d, f0, dphi0, alpha0):
        self.evals = 0
        self.x, self.d = x, d
        self.f0, self.dphi0 = f0, dphi0
        a_prev, f_prev, g_prev = 0.0, f0, dphi0
        a = alpha0
        first = True
        while self.evals < _MAX_LINE_SEARCH_EVALS:
            f_a, g_a, point = self._eval(a)
            bad = not math.isfinite(f_a)
            if bad or f_a > f0 + self.c1 * a * dphi0 or (f_a >= f_prev and not first):
                return self._zoom((a_prev, f_prev, g_prev), (a, f_a, g_a))
            if abs(g_a) <= -self.c2 * dphi0:
                return a, f_a, point
            if g_a >= 0.0:
                return self._zoom((a, f_a, g_a), (a_prev, f_prev, g_prev))
            a_prev, f_prev, g_prev = a, f_a, g_a
            a = min(2.0 * a, 1e10)
            first = False
        return None

    def _eval(self, a):
        self.evals += 1
        point = self.x + a * self.d
        f, grad = self.objective(point)
        g = float(grad @ self.d) if np.all(np.isfinite(grad)) else math.nan
        self._last = (f, grad, point)
        return f, g, point

    def _zoom(self, lo, hi):
        a_lo, f_lo, g_lo = lo
        a_hi, f_hi, g_hi = hi
        while self.evals < _MAX_LINE_SEARCH_EVALS:
            width = a_hi - a_lo
            a_j = math.nan
            if math.isfinite(f_hi) and math.isfinite(g_hi):
                a_j = _cubic_min(a_lo, f_lo, g_lo, a_hi, f_hi, g_hi)
            margin = 0.1 * abs(width)
            if not math.isfinite(a_j) or not (
                min(a_lo, a_hi) + margin <= a_j <= max(a_lo, a_hi) - margin
            ):
                a_j = a_lo + 0.5 * width
            f_j, g_j, point = self._eval(a_j)
            if (
                not math.isfinite(f_j)
                or f_j > self.f0 + self.c1 * a_j * self.dphi0
                or f_j >= f_lo
            ):
                a_hi, f_hi, g_hi = a_j, f_j, g_j
            else:
                if abs(g_j) <= -self.c2 * self.dphi0:
                    return a_j, f_j, point
                if g_j * (a_hi - a_lo) >= 0.0:
                    a_hi, f_hi, g_hi = a_lo, f_lo, g_lo
                a_lo, f_lo, g_lo = a_j, f_j, g_j
            if abs(a_hi - a_lo) < 1e-18 * max(1.0, abs(a_lo)):
                return None
        return None

    @property
    def last(self):
        return self._last


def minimize(
    objective: Objective,
    x0: np.ndarray,
    opts: LbfgsOptions = LbfgsOptions(),
    callback: Optional[Callback] = None,
) -> OptimResult:
    """Minimize `objective` (returning (loss, gradient)) from x0.

    Returns the best iterate found; a failed line search terminates the run
    with the partial result rather than raising.  A non-finite objective at
    x0, or a non-finite gradient at an accepted point, raises
    NonFiniteObjectiveError carrying the last good iterate.
    """
    x = np.array(x0, dtype=float)
    f, g = objective(x)
    loss_history: list[float] = []

    def result(term: Termination) -> OptimResult:
        return OptimResult(
            final_params=x,
            final_loss=f,
            iterations=len(loss_history),
            loss_history=np.array(loss_history),
            termination=term,
        )

    if not math.isfinite(f) or not np.all(np.isfinite(g)):
        raise NonFiniteObjectiveError(
            "objective is non-finite at the starting point", result(Termination.LINE_SEARCH_FAILURE)
        )

    pairs: deque[tuple[np.ndarray, np.ndarray, float]] = deque(maxlen=max(opts.memory, 1))
    if opts.memory == 0:
        pairs = deque(maxlen=1)  # kept empty: pure steepest descent
    searcher = _LineSearch(objective, opts)

    while True:
        if float(np.max(np.abs(g))) < opts.grad_tol:
            return result(Termination.GRAD_TOL)
        if len(loss_history) >= opts.max_iters:
            return result(Termination.MAX_ITERS)

        d = -_two_loop(g, pairs)
        dphi0 = float(g @ d)
        if dphi0 >= 0.0:
            # Numerical breakdown of the curvature model; restart from steepest descent.
            pairs.clear()
            d = -g
            dphi0 = float(g @ d)
        alpha0 = 1.0 if pairs else min(1.0, 1.0 / max(float(np.linalg.norm(g)), 1e-12))
        hit = searcher.search(x, d, f, dphi0, alpha0)
        if hit is None:
            return result(Termination.LINE_SEARCH_FAILURE)
        _, f_new, x_new = hit
        _, g_new, _ = searcher.last
        if not np.all(np.isfinite(g_new)):
            raise NonFiniteObjectiveError(
                "gradient became non-finite at an accepted point", result(Termination.LINE_SEARCH_FAILURE)
            )

        s = x_new - x
        y_vec = g_new - g
        sy = float(s @ y_vec)
        if opts.memory > 0 and sy > 0.0:
            pairs.append((s, y_vec, 1.0 / sy))

        f_old = f
        x, f, g = x_new, f_new, g_new
        loss_history.append(f)
        if callback is not None:
            callback(len(loss_history), x, f)
        if abs(f_old - f) <= opts.f_rel_tol * max(abs(f_old), abs(f), 1.0):
            return result(Termination.F_REL_TOL)


def _two_loop(g: np.ndarray, pairs) -> np.ndarray:
    """Inverse-Hessian action from the stored (step, gradient-change) pairs."""
    if not pairs:
        return g.copy()
    q = g.copy()
    alphas = []
    for s, y, rho in reversed(pairs):
        a = rho * float(s @ q)
        alphas.append(a)
        q -= a * y
    s, y, _ = pairs[-1]
    q *= float(s @ y) / float(y @ y)
    for (s, y, rho), a in zip(pairs, reversed(alphas)):
        b = rho * float(y @ q)
        q += (a - b) * s
    return q
