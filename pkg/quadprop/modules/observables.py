"""Energies, work and heat rates, and excitation probabilities of the evolved Gaussian."""
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, xlogy

from ..utils.errors import FamilyMismatchError
from .gaussian import gaussian_at, matched_width, moments

__all__ = [
    'ThermoRates', 'mean_energy', 'driven_energy', 'com_energy', 'mean_quanta',
    'poisson_excitation', 'poisson_distribution', 'thermo_rates', 'trap_energy',
    'trap_excitation', 'trap_level_probability', 'trap_distribution', 'DEFAULT_TAIL'
]

DEFAULT_TAIL = 1e-16
MAX_TERMS = 100_000

DRIVEN_FAMILIES = ('driven-harmonic', 'harmonic')


def _require(spec, families):
    if spec.family not in families:
        raise FamilyMismatchError(families[0], spec.family)


def _omega(spec):
    return spec.family_params['omega']


def mean_energy(state, spec):
    """<H> from the Gaussian moments, for any family."""
    mom = moments(state)
    c = float(spec.c_func(state.t))
    e = float(spec.e_func(state.t))
    kinetic = (mom.var_p + mom.mean_p**2) / (2.0 * spec.mass)
    return kinetic + 0.5 * c * (mom.var_x + mom.mean_x**2) + e * mom.mean_x


def _centre(state, spec):
    a = state.mean_x
    a_dot = state.mean_p / spec.mass
    return state.t, a, a_dot, float(spec.e_func(state.t))


def com_energy(state, spec):
    """E_c = m omega^2 a^2 / 2 + m a'^2 / 2 with a = -gamma / m."""
    _require(spec, DRIVEN_FAMILIES)
    _, a, a_dot, _ = _centre(state, spec)
    omega = _omega(spec)
    return 0.5 * spec.mass * (omega**2 * a**2 + a_dot**2)


def driven_energy(state, spec):
    """U = hbar omega / 2 + E_c + a e(t); assumes the matched width lambda0 = m omega / hbar."""
    _require(spec, DRIVEN_FAMILIES)
    _, a, _, e = _centre(state, spec)
    return 0.5 * spec.hbar * _omega(spec) + com_energy(state, spec) + a * e


def mean_quanta(com, hbar_omega):
    return com / hbar_omega


def poisson_excitation(com, hbar_omega, n):
    """P_n = mu^n exp(-mu) / n! with mu = E_c / hbar omega, evaluated in log space."""
    if com < 0 or n < 0:
        raise ValueError(f"need E_c >= 0 and n >= 0, got E_c={com}, n={n}")
    mu = com / hbar_omega
    return float(np.exp(xlogy(n, mu) - mu - gammaln(n + 1)))


def poisson_distribution(com, hbar_omega, tail=DEFAULT_TAIL):
    """P_0, P_1, ... up to the first n past the mean whose remaining tail is below ``tail``."""
    mu = mean_quanta(com, hbar_omega)
    probs = []
    for n in range(MAX_TERMS):
        p = poisson_excitation(com, hbar_omega, n)
        probs.append(p)
        ratio = mu / (n + 1)
        if ratio < 1.0 and p * ratio / (1.0 - ratio) < tail:
            break
    return np.asarray(probs)


@dataclass(frozen=True)
class ThermoRates:
    """
    Energy balance of the driven oscillator at time ``t``.

    ``t1`` = Tr(d rho/dt H), ``t2`` = Tr(rho dH/dt) and ``chi`` = d(a e)/dt. The four rate
    definitions are reported side by side.
    """
    t: float
    du_dt: float
    t1: float
    t2: float
    chi: float
    work_source: float
    work_tr: float
    heat_def: float
    heat_tr: float


def thermo_rates(state, spec):
    _require(spec, DRIVEN_FAMILIES)
    t, a, a_dot, e = _centre(state, spec)
    m, omega = spec.mass, _omega(spec)
    e_dot = float(spec.e_dot_func(t))
    a_ddot = -omega**2 * a - e / m

    oscillator = m * omega**2 * a * a_dot + m * a_dot * a_ddot
    t1 = oscillator + a_dot * e
    t2 = a * e_dot
    return ThermoRates(t=t,
                       du_dt=t1 + t2,
                       t1=t1,
                       t2=t2,
                       chi=a_dot * e + a * e_dot,
                       work_source=-e * a_dot,
                       work_tr=-a * e_dot,
                       heat_def=oscillator + 2.0 * a_dot * e + a * e_dot,
                       heat_tr=t1)


def _trap_state(coeffs, spec, u):
    _require(spec, ('paul-trap',))
    omega = _omega(spec)
    return gaussian_at(coeffs.at(u / omega), spec, matched_width(spec))


def trap_energy(coeffs, spec, u):
    """U(u) of the Paul-trap state evolved from the matched-width ground state."""
    state = _trap_state(coeffs, spec, u)
    return mean_energy(state, spec)


def _trap_shape(state, spec):
    # precision and chirp in oscillator units
    scale = spec.hbar / (spec.mass * _omega(spec))
    A = state.precision * scale
    sigma = state.chirp * scale
    nu = 0.5 * (1.0 + A)
    norm = nu**2 + sigma**2
    base = ((nu - 1.0)**2 + sigma**2) / norm
    return A, norm, base


def _even_probability(A, norm, base, n):
    log_p = 0.5 * math.log(A) + gammaln(2 * n + 1) - n * math.log(4.0) - 2.0 * gammaln(n + 1) \
        - 0.5 * math.log(norm) + xlogy(n, base)
    return float(np.exp(log_p))


def trap_level_probability(state, spec, n):
    _require(spec, ('paul-trap',))
    if n < 0:
        raise ValueError(f"level must be non-negative, got {n}")
    if n % 2:
        return 0.0
    A, norm, base = _trap_shape(state, spec)
    return _even_probability(A, norm, base, n // 2)


def trap_excitation(coeffs, spec, u, n):
    """Probability of finding oscillator level ``n`` at dimensionless time ``u``; 0 for odd n."""
    return trap_level_probability(_trap_state(coeffs, spec, u), spec, n)


def trap_distribution(state, spec, tail=DEFAULT_TAIL):
    """P(0), P(2), P(4), ... until the geometric bound on the remaining mass drops below ``tail``."""
    _require(spec, ('paul-trap',))
    A, norm, base = _trap_shape(state, spec)
    probs = []
    for k in range(MAX_TERMS):
        p = _even_probability(A, norm, base, k)
        probs.append(p)
        if base == 0.0 or p * base / (1.0 - base) < tail:
            break
    return np.asarray(probs)
