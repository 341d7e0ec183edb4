"""Built-in potential families, the Mathieu standard form and the (a, q) stability scan."""
import logging
import math
from collections import namedtuple
from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np
from tqdm import tqdm

from ..utils.errors import ExpressionDomainError, IntegrationError
from ..utils.expr_parser import (ZERO, BinOp, Call, Const, ExpressionAst, Param, TimeVar,
                                 reduce_general_lagrangian)
from ..utils.ode_solvers import DEFAULT_ATOL, DEFAULT_RTOL, DormandPrince54
from ..utils.thread_utils import parallel_map, worker_count
from .coefficients import CoefficientSpec

__all__ = [
    'FAMILIES', 'PotentialFamily', 'make_spec', 'lagrangian_family', 'MathieuPair',
    'mathieu_pair', 'zeta_dimensionless', 'StabilityVerdict', 'stability_scan',
    'UNSTABLE', 'STABLE', 'MARGINAL'
]

FAMILIES = ('free', 'harmonic', 'driven-harmonic', 'paul-trap', 'custom')

UNSTABLE, STABLE, MARGINAL = 0, 1, 2
EDGE_BAND = 1e-6


@dataclass(frozen=True)
class PotentialFamily:
    """
    A named coefficient family.

    ``paul-trap`` uses c(t) = m omega^2 (a - 2q cos(2 r omega t)), so the drive frequency is
    2 r omega and u = omega t is the dimensionless time. ``driven-harmonic`` takes its force
    from ``drive``; ``custom`` takes both ``c_expr`` and ``e_expr`` verbatim.
    """
    tag: str
    mass: float = 1.0
    hbar: float = 1.0
    omega: Optional[float] = None
    a: float = 1.0
    q: float = 0.0
    r: float = 1.0
    drive: Optional[ExpressionAst] = None
    c_expr: Optional[ExpressionAst] = None
    e_expr: Optional[ExpressionAst] = None
    bindings: Mapping[str, float] = field(default_factory=dict)

    def validate(self):
        if self.tag not in FAMILIES:
            raise ValueError(f"unknown potential family '{self.tag}', expected one of {FAMILIES}")
        if not self.mass > 0:
            raise ValueError(f"mass must be positive, got {self.mass}")
        if not self.hbar > 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")
        if self.tag in ('harmonic', 'driven-harmonic', 'paul-trap'):
            if self.omega is None or not self.omega > 0:
                raise ValueError(f"family '{self.tag}' needs omega > 0, got {self.omega}")
        if self.tag == 'paul-trap' and not self.r > 0:
            raise ValueError(f"paul-trap needs r > 0, got {self.r}")
        if self.tag == 'driven-harmonic' and self.drive is None:
            raise ValueError("driven-harmonic needs a drive expression")
        if self.tag == 'custom' and self.c_expr is None:
            raise ValueError("custom family needs a c expression")


def _mul(*factors):
    out = factors[0]
    for f in factors[1:]:
        out = BinOp('*', out, f)
    return out


def _builtin_bindings(family):
    builtin = {'m': family.mass}
    if family.omega is not None:
        builtin['omega'] = family.omega
    if family.tag == 'paul-trap':
        builtin.update(a=family.a, q=family.q, r=family.r)
    for name, value in builtin.items():
        if name in family.bindings and float(family.bindings[name]) != float(value):
            raise ValueError(f"parameter '{name}' = {family.bindings[name]} conflicts with "
                             f"the family value {value}")
    return {**family.bindings, **builtin}


def make_spec(family):
    family.validate()
    bindings = _builtin_bindings(family)
    m, omega_sq = Param('m'), BinOp('^', Param('omega'), Const(2.0))

    if family.tag == 'free':
        c, e = ZERO, ZERO
    elif family.tag == 'harmonic':
        c, e = _mul(m, omega_sq), ZERO
    elif family.tag == 'driven-harmonic':
        c, e = _mul(m, omega_sq), family.drive
    elif family.tag == 'paul-trap':
        phase = _mul(Const(2.0), Param('r'), Param('omega'), TimeVar())
        modulation = _mul(Const(2.0), Param('q'), Call('cos', phase))
        c, e = _mul(m, omega_sq, BinOp('-', Param('a'), modulation)), ZERO
    else:
        c, e = family.c_expr, family.e_expr if family.e_expr is not None else ZERO

    family_params = {'a': family.a, 'q': family.q, 'r': family.r}
    if family.omega is not None:
        family_params['omega'] = family.omega
    return CoefficientSpec(mass=family.mass,
                           hbar=family.hbar,
                           c=c,
                           e=e,
                           bindings=bindings,
                           omega_ref=family.omega,
                           family=family.tag,
                           family_params=family_params)


def lagrangian_family(a1, a2, a3, a4, mass, hbar, bindings=None, omega_ref=None):
    """Spec of L = m xdot^2/2 + a1 x xdot + a2 x^2/2 + a3 xdot + a4 x, total derivatives dropped."""
    c, e = reduce_general_lagrangian(a1, a2, a3, a4)
    return CoefficientSpec(mass=mass,
                           hbar=hbar,
                           c=c,
                           e=e,
                           bindings=dict(bindings or {}),
                           omega_ref=omega_ref,
                           family='custom')


MathieuPair = namedtuple('MathieuPair', ['u', 'f', 'f_dot', 'g', 'g_dot'])


def mathieu_pair(a, q, r, u_grid, rtol=DEFAULT_RTOL, atol=DEFAULT_ATOL):
    """Canonical solutions of y'' + (a - 2q cos 2ru) y = 0 with f(0) = 1, f'(0) = 0, g(0) = 0, g'(0) = 1."""
    u_grid = np.asarray(u_grid, dtype=float)
    if len(u_grid) == 0 or u_grid[0] != 0.0:
        raise ValueError("u grid must start at 0")

    def rhs(u, y):
        k = a - 2.0 * q * math.cos(2.0 * r * u)
        return np.array([y[1], -k * y[0], y[3], -k * y[2]])

    traj = DormandPrince54(rtol=rtol, atol=atol).integrate(rhs, [1.0, 0.0, 0.0, 1.0], u_grid)
    y = traj.y
    return MathieuPair(u_grid, y[:, 0], y[:, 1], y[:, 2], y[:, 3])


def zeta_dimensionless(a, q, r, u_grid, rtol=DEFAULT_RTOL, atol=DEFAULT_ATOL):
    """zeta(u) = 1 / (alpha^2 + beta_u^2) at matched width."""
    pair = mathieu_pair(a, q, r, u_grid, rtol=rtol, atol=atol)
    return 1.0 / (pair.f**2 + pair.g**2)


@dataclass(frozen=True)
class StabilityVerdict:
    """Floquet verdict of one (a, q) cell. ``error`` holds the failure message, if any."""
    a: float
    q: float
    abs_trace: float
    determinant: float
    status: int
    error: Optional[str] = None

    @property
    def stable(self):
        return self.status == STABLE


def classify(abs_trace, edge=EDGE_BAND):
    if abs_trace < 2.0 - edge:
        return STABLE
    if abs_trace > 2.0 + edge:
        return UNSTABLE
    return MARGINAL


def _scan_cell(a, q, r, rtol, atol):
    period = math.pi / r
    try:
        pair = mathieu_pair(a, q, r, [0.0, period], rtol=rtol, atol=atol)
    except (IntegrationError, ExpressionDomainError) as e:
        logging.warning(f"stability cell a={a!r} q={q!r} failed: {e}")
        return StabilityVerdict(a, q, math.nan, math.nan, MARGINAL, f"{type(e).__name__}: {e}")
    f, f_dot, g, g_dot = pair.f[-1], pair.f_dot[-1], pair.g[-1], pair.g_dot[-1]
    abs_trace = abs(f + g_dot)
    return StabilityVerdict(a, q, float(abs_trace), float(f * g_dot - g * f_dot),
                            classify(abs_trace))


def _axis(bounds, points, name):
    lo, hi = (float(v) for v in bounds)
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ValueError(f"{name} range must be finite, got [{lo}, {hi}]")
    if points < 1 or hi < lo or (points > 1 and hi == lo):
        raise ValueError(f"empty {name} range [{lo}, {hi}] with {points} points")
    return np.linspace(lo, hi, points)


def stability_scan(a_range,
                   q_range,
                   r,
                   resolution,
                   rtol=DEFAULT_RTOL,
                   atol=DEFAULT_ATOL,
                   num_threads=None,
                   verbose=False):
    """
    Classify every cell of an (a, q) grid by the monodromy trace over one drive period.

    Args:
        a_range, q_range (`tuple[float, float]`):
            Inclusive bounds of each axis.
        r (`float`):
            Frequency ratio, the period in u is pi / r.
        resolution (`int` or `tuple[int, int]`):
            Points per axis.
        num_threads (`int`, *optional*):
            Worker threads; defaults to the ``QUADPROP_SCAN_THREADS`` environment variable.

    Returns:
        `list[list[StabilityVerdict]]` indexed ``[i_a][i_q]``.
    """
    if not r > 0:
        raise ValueError(f"r must be positive, got {r}")
    n_a, n_q = (resolution, resolution) if np.isscalar(resolution) else resolution
    a_values = _axis(a_range, int(n_a), 'a')
    q_values = _axis(q_range, int(n_q), 'q')
    cells = [(a, q) for a in a_values for q in q_values]
    num_threads = worker_count() if num_threads is None else num_threads
    logging.info(f"stability scan of {len(cells)} cells on {num_threads} thread(s)")

    with tqdm(total=len(cells), disable=not verbose) as progress:
        results = parallel_map(lambda cell: _scan_cell(cell[0], cell[1], r, rtol, atol),
                               cells,
                               num_threads=num_threads,
                               on_done=progress.update)

    verdicts = []
    for (a, q), result in zip(cells, results):
        if isinstance(result, Exception):
            result = StabilityVerdict(a, q, math.nan, math.nan, MARGINAL,
                                      f"{type(result).__name__}: {result}")
        verdicts.append(result)
    return [verdicts[i * len(q_values):(i + 1) * len(q_values)] for i in range(len(a_values))]
