"""
Closed-form evolution of the Gaussian initial state

    psi_0(x) = (lambda0 / pi)^(1/4) exp(-lambda0 x^2 / 2)

under a quadratic Hamiltonian. At time t the state is a pure Gaussian with

    psi(x) = (A / pi)^(1/4) exp(-(A/2 - i phi) (x - <x>)^2 + i <p> x / hbar)

where A = lambda0 zeta is the position precision,
zeta = 1 / (alpha^2 + (lambda0 hbar / m)^2 beta^2), and
phi = (m zeta / 2 hbar)(alpha alpha' + (lambda0 hbar / m)^2 beta beta') is the chirp.
Both stay finite through zeros of beta.
"""
import math
from collections import namedtuple
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .coefficients import CoefficientSample

__all__ = [
    'GaussianState', 'Moments', 'evolve_gaussian', 'gaussian_at', 'density_matrix_element',
    'position_density', 'momentum_density', 'wigner', 'pure_state_wavefunction', 'purity',
    'moments', 'propagate_state', 'matched_width'
]

Moments = namedtuple('Moments', ['mean_x', 'mean_p', 'var_x', 'var_p', 'cov_xp'])


@dataclass(frozen=True)
class GaussianState:
    """
    A pure Gaussian at time ``t``.

    Attributes:
        mean_x, mean_p: centre in phase space; -gamma/m and -gamma' for the evolved state.
        precision: A, the position density is sqrt(A/pi) exp(-A (x - mean_x)^2).
        chirp: position-dependent momentum is mean_p + 2 hbar chirp (x - mean_x).
        lambda0: initial width parameter, when the state was evolved from psi_0.
        zeta: A / lambda0, when ``lambda0`` is known.
        coefficients: alpha, beta, gamma ... at ``t`` for states built by :func:`evolve_gaussian`.
    """
    t: float
    mean_x: float
    mean_p: float
    precision: float
    chirp: float
    mass: float
    hbar: float
    lambda0: Optional[float] = None
    zeta: Optional[float] = None
    coefficients: Optional[CoefficientSample] = None

    @property
    def alpha(self):
        return self.coefficients.alpha

    @property
    def beta(self):
        return self.coefficients.beta

    @property
    def gamma(self):
        return self.coefficients.gamma

    @property
    def gamma_dot(self):
        return self.coefficients.gamma_dot

    @classmethod
    def from_moments(cls, t, mean_x, mean_p, var_x, cov_xp, mass, hbar, lambda0=None):
        precision = 1.0 / (2.0 * var_x)
        zeta = precision / lambda0 if lambda0 is not None else None
        return cls(t=t,
                   mean_x=mean_x,
                   mean_p=mean_p,
                   precision=precision,
                   chirp=cov_xp * precision / hbar,
                   mass=mass,
                   hbar=hbar,
                   lambda0=lambda0,
                   zeta=zeta)


def matched_width(spec):
    """lambda0 = m omega / hbar for the reference frequency of ``spec``."""
    if spec.omega_ref is None:
        raise ValueError("matched width needs a reference omega")
    return spec.mass * spec.omega_ref / spec.hbar


def gaussian_at(sample, spec, lambda0):
    m, hbar = spec.mass, spec.hbar
    s = (lambda0 * hbar / m)**2
    zeta = 1.0 / (sample.alpha**2 + s * sample.beta**2)
    return GaussianState(t=sample.t,
                         mean_x=-sample.gamma / m,
                         mean_p=-sample.gamma_dot,
                         precision=lambda0 * zeta,
                         chirp=m * zeta / (2.0 * hbar) *
                         (sample.alpha * sample.alpha_dot + s * sample.beta * sample.beta_dot),
                         mass=m,
                         hbar=hbar,
                         lambda0=lambda0,
                         zeta=zeta,
                         coefficients=sample)


def evolve_gaussian(coeffs, spec, lambda0):
    """The evolved state at every grid time of ``coeffs``."""
    if not lambda0 > 0:
        raise ValueError(f"initial width must be positive, got {lambda0}")
    return [gaussian_at(coeffs.at(t), spec, lambda0) for t in coeffs.t]


def _offset(state, x):
    return np.asarray(x, dtype=float) - state.mean_x


def density_matrix_element(state, x, x_prime):
    y, y_p = _offset(state, x), _offset(state, x_prime)
    A, phi, hbar = state.precision, state.chirp, state.hbar
    exponent = -0.5 * A * (y**2 + y_p**2) + 1j * phi * (y**2 - y_p**2) \
        + 1j * state.mean_p * (np.asarray(x) - np.asarray(x_prime)) / hbar
    return math.sqrt(A / math.pi) * np.exp(exponent)


def position_density(state, x):
    A = state.precision
    return math.sqrt(A / math.pi) * np.exp(-A * _offset(state, x)**2)


def momentum_density(state, p):
    m = moments(state)
    dp = np.asarray(p, dtype=float) - m.mean_p
    return np.exp(-dp**2 / (2.0 * m.var_p)) / math.sqrt(2.0 * math.pi * m.var_p)


def wigner(state, x, p):
    """W(x, p), normalised so that its integral over dx dp / (2 pi hbar) is 1."""
    y = _offset(state, x)
    A, hbar = state.precision, state.hbar
    shear = np.asarray(p, dtype=float) - state.mean_p - 2.0 * hbar * state.chirp * y
    return 2.0 * np.exp(-A * y**2) * np.exp(-shear**2 / (A * hbar**2))


def pure_state_wavefunction(state):
    A, phi, hbar = state.precision, state.chirp, state.hbar
    norm = (A / math.pi)**0.25

    def psi(x):
        y = _offset(state, x)
        return norm * np.exp(-(0.5 * A - 1j * phi) * y**2 + 1j * state.mean_p * np.asarray(x) / hbar)

    return psi


def moments(state):
    A, phi, hbar = state.precision, state.chirp, state.hbar
    return Moments(mean_x=state.mean_x,
                   mean_p=state.mean_p,
                   var_x=1.0 / (2.0 * A),
                   var_p=hbar**2 * A / 2.0 + 2.0 * hbar**2 * phi**2 / A,
                   cov_xp=hbar * phi / A)


def purity(state):
    """Tr rho^2 = hbar / (2 sqrt(det covariance))."""
    m = moments(state)
    det = m.var_x * m.var_p - m.cov_xp**2
    return state.hbar / (2.0 * math.sqrt(det))


def propagate_state(state, coeffs, t):
    """
    Evolve any pure Gaussian by ``t`` with coefficients whose time origin is ``state.t``.

    Uses the Heisenberg map x -> alpha x + beta p / m - gamma / m,
    p -> m alpha' x + beta' p - gamma'.
    """
    s = coeffs.at(t)
    m = state.mass
    S = np.array([[s.alpha, s.beta / m], [m * s.alpha_dot, s.beta_dot]])
    mom = moments(state)
    cov = np.array([[mom.var_x, mom.cov_xp], [mom.cov_xp, mom.var_p]])
    mean = S @ np.array([mom.mean_x, mom.mean_p]) - np.array([s.gamma / m, s.gamma_dot])
    cov = S @ cov @ S.T
    return GaussianState.from_moments(t=state.t + t,
                                      mean_x=float(mean[0]),
                                      mean_p=float(mean[1]),
                                      var_x=float(cov[0, 0]),
                                      cov_xp=float(cov[0, 1]),
                                      mass=m,
                                      hbar=state.hbar,
                                      lambda0=state.lambda0)
