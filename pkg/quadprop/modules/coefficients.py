"""Classical coefficient functions alpha, beta, gamma and the phase lambda.

For H = p^2/2m + c(t) x^2/2 + e(t) x the Heisenberg position operator is

    x(t) = alpha(t) x + beta(t) p / m - gamma(t) / m

with alpha, beta the canonical solutions of y'' + (c/m) y = 0 and gamma the retarded
response to the drive, gamma'' + (c/m) gamma = e.
"""
import logging
from collections import namedtuple
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Mapping, Optional

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import CubicHermiteSpline

from ..utils.errors import SpanError
from ..utils.expr_parser import (ExpressionAst, compile_expression, differentiate,
                                 free_parameters, substitute_time)
from ..utils.ode_solvers import DEFAULT_ATOL, DEFAULT_RTOL, integrate

__all__ = [
    'CoefficientSpec', 'EvolutionCoefficients', 'CoefficientSample', 'compute_coefficients',
    'greens_function', 'wronskian_drift', 'lambda_rate', 'coefficients_from_basis',
    'gamma_by_quadrature'
]

SERIES_GUARD = 1e-12


@dataclass(frozen=True)
class CoefficientSpec:
    """The physical problem.

    Attributes:
        mass: m > 0.
        hbar: reduced Planck constant > 0.
        c: expression for c(t), mass/time^2.
        e: expression for e(t), force.
        bindings: values of the named parameters used by ``c`` and ``e``.
        omega_ref: reference angular frequency for dimensionless scaling, if any.
        family: potential family tag ('free', 'harmonic', 'driven-harmonic', 'paul-trap',
            'custom').
        family_params: family parameters (omega, a, q, r) used by the family observables.
    """
    mass: float
    hbar: float
    c: ExpressionAst
    e: ExpressionAst
    bindings: Mapping[str, float] = field(default_factory=dict)
    omega_ref: Optional[float] = None
    family: str = 'custom'
    family_params: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError(f"mass must be positive, got {self.mass}")
        if not self.hbar > 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")
        if self.omega_ref is not None and not self.omega_ref > 0:
            raise ValueError(f"reference omega must be positive, got {self.omega_ref}")
        # fail early on unbound parameters
        self.c_func
        self.e_func

    @cached_property
    def c_func(self):
        return compile_expression(self.c, self.bindings)

    @cached_property
    def e_func(self):
        return compile_expression(self.e, self.bindings)

    @cached_property
    def e_dot_func(self):
        return compile_expression(differentiate(self.e), self.bindings)

    @property
    def parameters(self):
        return free_parameters(self.c) | free_parameters(self.e)

    def shifted(self, offset):
        """The same problem with its time origin moved to ``offset``."""
        return replace(self,
                       c=substitute_time(self.c, offset),
                       e=substitute_time(self.e, offset),
                       family='custom')


CoefficientSample = namedtuple(
    'CoefficientSample',
    ['t', 'alpha', 'alpha_dot', 'beta', 'beta_dot', 'gamma', 'gamma_dot', 'lam'])


def _phase(gamma, gamma_dot, beta, beta_dot, source_integral, mass):
    # lambda = [gamma (gamma beta' - gamma' beta) / beta + int_0^t e gamma] / 2m
    numerator = gamma * (gamma * beta_dot - gamma_dot * beta)
    boundary = np.divide(numerator, beta,
                         out=np.zeros_like(np.asarray(numerator, dtype=float)),
                         where=np.asarray(numerator) != 0.0)
    return (boundary + source_integral) / (2.0 * mass)


@dataclass(frozen=True)
class EvolutionCoefficients:
    """Time-sampled coefficient functions on an output grid starting at 0.

    ``stiffness`` (c/m) and ``drive`` (e) are kept at the grid so the second
    derivatives are exact for the Hermite interpolation in :meth:`at`.
    """
    t: np.ndarray
    alpha: np.ndarray
    alpha_dot: np.ndarray
    beta: np.ndarray
    beta_dot: np.ndarray
    gamma: np.ndarray
    gamma_dot: np.ndarray
    lam: np.ndarray
    source_integral: np.ndarray
    stiffness: np.ndarray
    drive: np.ndarray
    mass: float
    wronskian0: float = 1.0

    @property
    def span(self):
        return float(self.t[0]), float(self.t[-1])

    @property
    def wronskian(self):
        return self.alpha * self.beta_dot - self.alpha_dot * self.beta

    def beta_dimensionless(self, omega):
        """beta_u = omega * beta(t)."""
        return omega * self.beta

    @cached_property
    def _splines(self):
        k, e = self.stiffness, self.drive
        return {
            'alpha': CubicHermiteSpline(self.t, self.alpha, self.alpha_dot),
            'alpha_dot': CubicHermiteSpline(self.t, self.alpha_dot, -k * self.alpha),
            'beta': CubicHermiteSpline(self.t, self.beta, self.beta_dot),
            'beta_dot': CubicHermiteSpline(self.t, self.beta_dot, -k * self.beta),
            'gamma': CubicHermiteSpline(self.t, self.gamma, self.gamma_dot),
            'gamma_dot': CubicHermiteSpline(self.t, self.gamma_dot, -k * self.gamma + e),
            'source_integral': CubicHermiteSpline(self.t, self.source_integral, e * self.gamma),
        }

    def spline(self, name):
        """Cubic Hermite interpolant of one coefficient ('alpha', 'beta_dot', ...)."""
        return self._splines[name]

    def _check_span(self, t):
        lo, hi = self.span
        slack = 1e-12 * max(1.0, hi - lo)
        if not (lo - slack <= t <= hi + slack):
            raise SpanError(t, self.span)

    def at(self, t):
        """All coefficients at time ``t``; exact on grid points, cubic Hermite in between."""
        t = float(t)
        self._check_span(t)
        i = int(np.searchsorted(self.t, t))
        if i < len(self.t) and self.t[i] == t:
            return CoefficientSample(t, float(self.alpha[i]), float(self.alpha_dot[i]),
                                     float(self.beta[i]), float(self.beta_dot[i]),
                                     float(self.gamma[i]), float(self.gamma_dot[i]),
                                     float(self.lam[i]))
        if len(self.t) == 1:
            raise SpanError(t, self.span)
        t = min(max(t, self.t[0]), self.t[-1])
        values = {name: float(spline(t)) for name, spline in self._splines.items()}
        lam = float(_phase(values['gamma'], values['gamma_dot'], values['beta'],
                           values['beta_dot'], values['source_integral'], self.mass))
        return CoefficientSample(t, values['alpha'], values['alpha_dot'], values['beta'],
                                 values['beta_dot'], values['gamma'], values['gamma_dot'], lam)


def compute_coefficients(spec, grid, rtol=DEFAULT_RTOL, atol=DEFAULT_ATOL):
    """
    Integrate alpha, beta, gamma and the phase on ``grid`` (which must start at 0).

    The state is (alpha, alpha', beta, beta', gamma, gamma', I) with I' = e gamma; lambda
    follows from I by integration by parts, which keeps the system regular through zeros
    of beta even when the drive is on.
    """
    grid = np.asarray(grid, dtype=float)
    if len(grid) == 0 or grid[0] != 0.0:
        raise ValueError("coefficient grid must start at t = 0")
    mass = spec.mass
    c_func, e_func = spec.c_func, spec.e_func

    def rhs(t, y):
        k = float(c_func(t)) / mass
        drive = float(e_func(t))
        return np.array([
            y[1], -k * y[0],
            y[3], -k * y[2],
            y[5], -k * y[4] + drive,
            drive * y[4],
        ])

    y0 = np.array([1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0])
    logging.info(f"integrating coefficients on [0, {grid[-1]!r}] with {len(grid)} output times")
    traj = integrate(rhs, y0, grid, rtol=rtol, atol=atol)
    y = traj.y
    logging.info(f"coefficients done in {traj.num_steps} steps")

    stiffness = np.broadcast_to(c_func(grid), grid.shape) / mass
    drive = np.broadcast_to(e_func(grid), grid.shape).astype(float)
    lam = _phase(y[:, 4], y[:, 5], y[:, 2], y[:, 3], y[:, 6], mass)
    return EvolutionCoefficients(t=grid,
                                 alpha=y[:, 0],
                                 alpha_dot=y[:, 1],
                                 beta=y[:, 2],
                                 beta_dot=y[:, 3],
                                 gamma=y[:, 4],
                                 gamma_dot=y[:, 5],
                                 lam=lam,
                                 source_integral=y[:, 6],
                                 stiffness=np.array(stiffness),
                                 drive=drive,
                                 mass=mass)


def greens_function(coeffs, t, t_prime):
    """Retarded Green's function G(t, t') of y'' + (c/m) y = delta(t - t')."""
    coeffs._check_span(t)
    coeffs._check_span(t_prime)
    if t <= t_prime:
        return 0.0
    now = coeffs.at(t)
    then = coeffs.at(t_prime)
    wronskian = then.alpha * then.beta_dot - then.alpha_dot * then.beta
    return (then.alpha * now.beta - then.beta * now.alpha) / wronskian


def wronskian_drift(coeffs):
    return float(np.max(np.abs(coeffs.wronskian - coeffs.wronskian0)))


def lambda_rate(coeffs):
    """d lambda / dt = -(1/2m) ((gamma beta' - gamma' beta) / beta)^2, 0 at t = 0."""
    w = coeffs.gamma * coeffs.beta_dot - coeffs.gamma_dot * coeffs.beta
    guard = (np.abs(coeffs.t) < SERIES_GUARD) | (w == 0.0)
    ratio = np.divide(w, coeffs.beta, out=np.zeros_like(w), where=~guard)
    return -ratio**2 / (2.0 * coeffs.mass)


def coefficients_from_basis(f, f_dot, g, g_dot, f0, f_dot0, g0, g_dot0):
    """alpha, alpha', beta, beta' from any independent solution pair (f, g).

    The result does not depend on which pair is used.
    """
    w0 = f0 * g_dot0 - f_dot0 * g0
    alpha = (f * g_dot0 - g * f_dot0) / w0
    alpha_dot = (f_dot * g_dot0 - g_dot * f_dot0) / w0
    beta = (g * f0 - f * g0) / w0
    beta_dot = (g_dot * f0 - f_dot * g0) / w0
    return alpha, alpha_dot, beta, beta_dot


def gamma_by_quadrature(coeffs, spec, t, epsabs=1e-13, epsrel=1e-11):
    """gamma(t) = int_0^t G(t, t') e(t') dt' by adaptive quadrature."""
    if t == 0.0:
        return 0.0
    value, _ = quad(lambda tp: greens_function(coeffs, t, tp) * float(spec.e_func(tp)),
                    0.0, t, epsabs=epsabs, epsrel=epsrel, limit=400)
    return value
