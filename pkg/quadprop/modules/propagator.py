"""
Exact propagator K(x, t; x', 0) of a quadratic Hamiltonian:

    K = sqrt(m / (2 pi i hbar beta)) exp(i lambda / hbar)
        exp(i m / (2 hbar beta) [beta' x^2 + alpha x'^2 - 2 x x' + (2/m) w x - (2 gamma / m) x'])

with w = gamma beta' - gamma' beta. The branch of the square root starts at -pi/4 for
t -> 0+ and loses pi/2 at every simple zero of beta (continuous phase tracking).
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.hermite import hermgauss
from scipy.optimize import brentq

from ..utils.errors import CausticError, QuadratureError
from .coefficients import compute_coefficients

__all__ = [
    'KernelForm', 'kernel_at', 'evaluate_kernel', 'short_time_check', 'caustic_times',
    'maslov_index', 'CAUSTIC_EPS'
]

CAUSTIC_EPS = 1e-9


@dataclass(frozen=True)
class KernelForm:
    """
    Kernel at a fixed time, exponent i (xx x^2 + xpxp x'^2 + cross x x' + lin_x x
    + lin_xp x' + lam_phase).
    """
    t: float
    modulus: float
    phase: float
    xx: float
    xpxp: float
    cross: float
    lin_x: float
    lin_xp: float
    lam_phase: float

    @property
    def prefactor(self):
        return self.modulus * np.exp(1j * self.phase)

    def exponent(self, x, x_prime):
        """Phase of the kernel (complex arguments allowed)."""
        x, x_prime = np.asarray(x), np.asarray(x_prime)
        quadratic = self.xx * x**2 + self.xpxp * x_prime**2 + self.cross * x * x_prime
        linear = self.lin_x * x + self.lin_xp * x_prime
        return quadratic + linear + self.lam_phase


def caustic_times(coeffs):
    """Zeros of beta in (0, t_end], refined by root bracketing on the Hermite interpolant."""
    t, beta = coeffs.t, coeffs.beta
    spline = coeffs.spline('beta') if len(t) > 1 else None
    zeros = []
    for i in range(1, len(t)):
        if beta[i] == 0.0:
            zeros.append(float(t[i]))
        elif beta[i - 1] * beta[i] < 0.0:
            zeros.append(brentq(lambda s: float(spline(s)), t[i - 1], t[i], xtol=1e-15,
                                rtol=4 * np.finfo(float).eps))
    return np.asarray(zeros)


def maslov_index(coeffs, t):
    """Number of zeros of beta strictly between 0 and t."""
    zeros = caustic_times(coeffs)
    return int(np.count_nonzero((zeros > 0.0) & (zeros < t)))


def kernel_at(coeffs, spec, t, eps_caustic=CAUSTIC_EPS):
    """
    Pack the kernel at time ``t``.

    Raises:
        CausticError: ``|beta(t)| <= eps_caustic``; carries the nearest located zero of beta.
        SpanError: ``t`` outside the computed coefficients.
    """
    s = coeffs.at(t)
    if abs(s.beta) <= eps_caustic:
        zeros = caustic_times(coeffs)
        zero = float(zeros[np.argmin(np.abs(zeros - t))]) if len(zeros) else float(t)
        raise CausticError(t, s.beta, zero)

    m, hbar = spec.mass, spec.hbar
    k = m / (2.0 * hbar * s.beta)
    w = s.gamma * s.beta_dot - s.gamma_dot * s.beta
    form = KernelForm(t=float(t),
                      modulus=math.sqrt(m / (2.0 * math.pi * hbar * abs(s.beta))),
                      phase=-math.pi / 4.0 - math.pi / 2.0 * maslov_index(coeffs, t),
                      xx=k * s.beta_dot,
                      xpxp=k * s.alpha,
                      cross=-m / (hbar * s.beta),
                      lin_x=w / (hbar * s.beta),
                      lin_xp=-s.gamma / (hbar * s.beta),
                      lam_phase=s.lam / hbar)
    return form


def evaluate_kernel(form, x, x_prime):
    """K(x, t; x', 0); scalar or numpy-broadcast inputs."""
    value = form.modulus * np.exp(1j * (form.phase + form.exponent(x, x_prime)))
    return value if np.ndim(value) else complex(value)


def _rotated_integral(form, test_fn, x, n):
    # rotate x' onto the steepest-descent line through the stationary point
    direction = np.exp(1j * math.pi / 4.0 * math.copysign(1.0, form.xpxp))
    centre = -(form.cross * x + form.lin_xp) / (2.0 * form.xpxp)
    width = 1.0 / math.sqrt(abs(form.xpxp))
    nodes, weights = hermgauss(n)
    x_prime = centre + direction * width * nodes
    integrand = form.modulus * np.exp(1j * (form.phase + form.exponent(x, x_prime)) + nodes**2)
    values = np.asarray(test_fn(x_prime), dtype=complex)
    return complex(direction * width * np.sum(weights * integrand * values))


def short_time_check(spec, test_fn, t, x=0.0, rtol=1e-8, orders=(64, 128)):
    """
    int K(x, t; x', 0) test_fn(x') dx', which tends to test_fn(x) as t -> 0.

    The integral runs along the steepest-descent line of the kernel phase with Gauss-Hermite
    nodes, so ``test_fn`` must be analytic and accept complex numpy arrays.

    Raises:
        QuadratureError: the two quadrature orders disagree beyond ``rtol``.
    """
    if not t > 0:
        raise ValueError(f"short-time check needs t > 0, got {t}")
    coeffs = compute_coefficients(spec, np.array([0.0, t]))
    form = kernel_at(coeffs, spec, t)
    if form.xpxp == 0.0:
        raise QuadratureError(f"kernel has no x'^2 term at t={t!r}")
    coarse, fine = (_rotated_integral(form, test_fn, x, n) for n in orders)
    if not np.isfinite(fine) or abs(fine - coarse) > rtol * max(1.0, abs(fine)):
        raise QuadratureError(f"Gauss-Hermite orders {orders} disagree at t={t!r}: "
                              f"{coarse!r} vs {fine!r}")
    logging.debug(f"short-time integral at t={t!r}: {fine!r}")
    return fine
