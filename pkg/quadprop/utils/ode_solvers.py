# Adaptive explicit Runge-Kutta integration for small non-stiff first-order systems.
import logging
from dataclasses import dataclass

import numpy as np

from .errors import MaxStepsError, NonFiniteError, StepUnderflowError

__all__ = ['Trajectory', 'DormandPrince54', 'integrate', 'DEFAULT_RTOL', 'DEFAULT_ATOL']

DEFAULT_RTOL = 1e-12
DEFAULT_ATOL = 1e-14
MAX_STEPS = 10_000_000


@dataclass(frozen=True)
class Trajectory:
    """States sampled on the requested output grid.

    Attributes:
        t: output times, identical to the requested grid.
        y: states, shape ``(len(t), n)``.
        step_sizes: accepted step sizes, for diagnostics.
    """
    t: np.ndarray
    y: np.ndarray
    step_sizes: np.ndarray

    @property
    def num_steps(self):
        return len(self.step_sizes)

    def component(self, index):
        return self.y[:, index]


class DormandPrince54:
    """
    Dormand-Prince 5(4) pair with proportional step-size control.

    The 5th order solution is propagated (local extrapolation) and the embedded 4th order
    solution only drives the error estimate. The last stage is evaluated at the new point
    and reused as the first stage of the next step.

    Output times are hit exactly: a step that would pass the next grid point is shortened
    to land on it, so no interpolant enters the reported states.

    Args:
        rtol (`float`, defaults to 1e-12):
            Relative tolerance, applied component-wise to ``max(|y|, |y_new|)``.
        atol (`float`, defaults to 1e-14):
            Absolute tolerance, applied component-wise.
        max_steps (`int`, defaults to 10**7):
            Accepted steps allowed per call before giving up.
        safety (`float`, defaults to 0.9):
            Safety factor of the step controller.
        min_factor, max_factor (`float`, defaults to 0.2 and 5.0):
            Bounds on the step-size change per step.
    """

    order = 5

    C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
    A = np.array([
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [1 / 5, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3 / 40, 9 / 40, 0.0, 0.0, 0.0, 0.0],
        [44 / 45, -56 / 15, 32 / 9, 0.0, 0.0, 0.0],
        [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729, 0.0, 0.0],
        [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656, 0.0],
        [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
    ])
    B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
    B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200,
                   187 / 2100, 1 / 40])
    E = B5 - B4

    def __init__(self,
                 rtol: float = DEFAULT_RTOL,
                 atol: float = DEFAULT_ATOL,
                 max_steps: int = MAX_STEPS,
                 safety: float = 0.9,
                 min_factor: float = 0.2,
                 max_factor: float = 5.0):
        if rtol <= 0 or atol <= 0:
            raise ValueError(f"tolerances must be positive, got rtol={rtol}, atol={atol}")
        self.rtol = rtol
        self.atol = atol
        self.max_steps = max_steps
        self.safety = safety
        self.min_factor = min_factor
        self.max_factor = max_factor

    def _eval(self, rhs, t, y):
        dy = np.asarray(rhs(t, y), dtype=float)
        if not np.all(np.isfinite(dy)):
            raise NonFiniteError("non-finite right-hand side", t)
        return dy

    def _error_norm(self, err, y, y_new):
        scale = self.atol + self.rtol * np.maximum(np.abs(y), np.abs(y_new))
        return float(np.max(np.abs(err) / scale))

    def _initial_step(self, rhs, t0, y0, f0, span):
        # Hairer, Norsett & Wanner starting-step heuristic.
        scale = self.atol + self.rtol * np.abs(y0)
        d0 = float(np.max(np.abs(y0) / scale))
        d1 = float(np.max(np.abs(f0) / scale))
        h0 = 1e-6 * span if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
        h0 = min(h0, span)
        f1 = self._eval(rhs, t0 + h0, y0 + h0 * f0)
        d2 = float(np.max(np.abs(f1 - f0) / scale)) / h0
        if max(d1, d2) <= 1e-15:
            h1 = max(1e-6 * span, h0 * 1e-3)
        else:
            h1 = (0.01 / max(d1, d2))**(1.0 / (self.order + 1))
        return min(100 * h0, h1, span)

    def integrate(self, rhs, y0, grid):
        """
        Integrate ``y' = rhs(t, y)`` from ``grid[0]`` and report states at every grid time.

        Raises:
            StepUnderflowError: the step fell below 1e-14 of the span (stiffness or a
                singular right-hand side).
            NonFiniteError: the right-hand side returned inf or nan.
            MaxStepsError: more than ``max_steps`` accepted steps.
        """
        grid = np.asarray(grid, dtype=float)
        if grid.ndim != 1 or len(grid) == 0:
            raise ValueError("output grid must be a non-empty 1-D sequence")
        if len(grid) > 1 and np.any(np.diff(grid) <= 0):
            raise ValueError("output grid must be strictly increasing")

        y = np.array(y0, dtype=float).ravel()
        n = len(y)
        out = np.empty((len(grid), n))
        out[0] = y
        if len(grid) == 1:
            return Trajectory(grid, out, np.empty(0))

        t = grid[0]
        span = grid[-1] - grid[0]
        min_step = 1e-14 * span
        f = self._eval(rhs, t, y)
        h = self._initial_step(rhs, t, y, f, span)

        stages = np.empty((7, n))
        steps = []
        k = 1
        while k < len(grid):
            target = grid[k]
            hit = h >= target - t
            h_try = target - t if hit else h

            stages[0] = f
            for i in range(1, 7):
                y_stage = y + h_try * (self.A[i, :i] @ stages[:i])
                stages[i] = self._eval(rhs, t + self.C[i] * h_try, y_stage)
            y_new = y_stage
            err_norm = self._error_norm(h_try * (self.E @ stages), y, y_new)

            if err_norm <= 1.0:
                t = target if hit else t + h_try
                y = y_new
                f = stages[6].copy()
                steps.append(h_try)
                if len(steps) > self.max_steps:
                    raise MaxStepsError(f"more than {self.max_steps} accepted steps", t)
                if hit:
                    out[k] = y
                    k += 1
                factor = self.max_factor if err_norm == 0.0 else min(
                    self.max_factor, self.safety * err_norm**(-1.0 / self.order))
                # a step shortened to land on the grid says nothing about the next one
                h = max(h_try * factor, h) if h_try < h else h_try * factor
            else:
                h = h_try * max(self.min_factor, self.safety * err_norm**(-1.0 / self.order))
                if h < min_step:
                    raise StepUnderflowError(
                        f"step size {h!r} below {min_step!r} (stiff or singular right-hand side)",
                        t)

        logging.debug(f"integrated [{grid[0]!r}, {grid[-1]!r}] in {len(steps)} steps")
        return Trajectory(grid, out, np.asarray(steps))


def integrate(rhs, y0, grid, rtol=DEFAULT_RTOL, atol=DEFAULT_ATOL):
    """Functional entry point: ``DormandPrince54(rtol, atol).integrate(rhs, y0, grid)``."""
    return DormandPrince54(rtol=rtol, atol=atol).integrate(rhs, y0, grid)
