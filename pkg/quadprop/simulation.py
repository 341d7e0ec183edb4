import logging
import math
import os
import os.path as osp

import numpy as np

from .configs.run_config import (LEVEL_COLUMN, build_spec, initial_width, resolve_columns)
from .modules.coefficients import compute_coefficients, lambda_rate, wronskian_drift
from .modules.gaussian import evolve_gaussian, gaussian_at, moments, purity, wigner
from .modules.observables import (com_energy, mean_energy, poisson_excitation, thermo_rates,
                                  trap_level_probability)
from .modules.potentials import stability_scan
from .modules.propagator import caustic_times, evaluate_kernel, kernel_at
from .utils.errors import ConfigError
from .utils.expr_parser import format_expression
from .utils.utils import cache_json, cache_table

__all__ = ['QuadraticSimulation', 'run_simulate', 'run_kernel', 'run_scan', 'run_wigner']

RATE_COLUMNS = ('du_dt', 't1', 't2', 'chi', 'work_source', 'work_tr', 'heat_def', 'heat_tr')


def _points(span, step):
    return max(1, int(math.ceil(span / step - 1e-9)))


class QuadraticSimulation:
    """
    Runs one configured system: the coefficient integration, the evolved Gaussian and the
    tables of the ``simulate``, ``kernel``, ``wigner`` and ``scan`` commands.
    """

    def __init__(self, config, verbose=False):
        self.config = config
        self.verbose = verbose
        self.spec = build_spec(config)
        self.omega = config.system.omega
        self.family = config.potential.family
        self.rtol = config.integration.rtol
        self.atol = config.integration.atol
        logging.info(f"{config.__name__}: c(t) = {format_expression(self.spec.c)}, "
                     f"e(t) = {format_expression(self.spec.e)}")

    @property
    def hbar_omega(self):
        return self.spec.hbar * self.omega

    def time_grid(self):
        integ = self.config.integration
        if integ.u_max is not None:
            u = np.linspace(0.0, integ.u_max, _points(integ.u_max, integ.step) + 1)
            return u / self.omega
        if integ.t_max is None:
            raise ConfigError("integration needs t_max or u_max", self.config.get('source'))
        return np.linspace(0.0, integ.t_max, _points(integ.t_max, integ.step) + 1)

    def coefficients_until(self, t):
        """Coefficients on [0, t] sampled at the configured step."""
        if t < 0:
            raise ConfigError(f"time must be non-negative, got {t}", self.config.get('source'))
        if t == 0:
            grid = np.array([0.0])
        else:
            grid = np.linspace(0.0, t, _points(t, self.config.integration.step) + 1)
        return compute_coefficients(self.spec, grid, rtol=self.rtol, atol=self.atol)

    def output_path(self):
        path = self.config.outputs.path
        if not path:
            raise ConfigError("no output path (outputs.path or --output)",
                              self.config.get('source'))
        return path

    def _column_values(self, name, i, state, coeffs, rates):
        if name in ('alpha', 'alpha_dot', 'beta', 'beta_dot', 'gamma', 'gamma_dot'):
            return getattr(coeffs, name)[i]
        if name in RATE_COLUMNS:
            return getattr(rates(), name)
        mom = moments(state)
        values = {
            't': lambda: state.t,
            'u': lambda: self.omega * state.t,
            'beta_u': lambda: self.omega * coeffs.beta[i],
            'lambda_phase': lambda: coeffs.lam[i],
            'lambda_rate': lambda: self._lambda_rate[i],
            'zeta': lambda: state.zeta,
            'precision': lambda: state.precision,
            'chirp': lambda: state.chirp,
            'mean_x': lambda: mom.mean_x,
            'mean_p': lambda: mom.mean_p,
            'var_x': lambda: mom.var_x,
            'var_p': lambda: mom.var_p,
            'cov_xp': lambda: mom.cov_xp,
            'purity': lambda: purity(state),
            'energy': lambda: mean_energy(state, self.spec),
            'energy_ratio': lambda: 2.0 * mean_energy(state, self.spec) / self.hbar_omega,
            'wronskian': lambda: coeffs.wronskian[i],
            'com_energy': lambda: com_energy(state, self.spec),
            'mean_quanta': lambda: com_energy(state, self.spec) / self.hbar_omega,
        }
        if name in values:
            return values[name]()
        level = int(LEVEL_COLUMN.match(name).group(1))
        if self.family == 'paul-trap':
            return trap_level_probability(state, self.spec, level)
        return poisson_excitation(com_energy(state, self.spec), self.hbar_omega, level)

    def simulate(self):
        """Time series of the configured columns; returns (columns, rows, summary)."""
        columns = resolve_columns(self.config)
        grid = self.time_grid()
        coeffs = compute_coefficients(self.spec, grid, rtol=self.rtol, atol=self.atol)
        states = evolve_gaussian(coeffs, self.spec, initial_width(self.config))
        self._lambda_rate = lambda_rate(coeffs)

        rows = []
        for i, state in enumerate(states):
            cached = {}

            def rates():
                if 'rates' not in cached:
                    cached['rates'] = thermo_rates(state, self.spec)
                return cached['rates']

            rows.append([self._column_values(name, i, state, coeffs, rates) for name in columns])

        zeta = np.array([s.zeta for s in states])
        i_min = int(np.argmin(zeta))
        summary = {
            'family': self.family,
            'c': format_expression(self.spec.c),
            'e': format_expression(self.spec.e),
            'rows': len(rows),
            'min_zeta': zeta[i_min],
            't_min_zeta': grid[i_min],
            'max_zeta': float(np.max(zeta)),
            'wronskian_drift': wronskian_drift(coeffs),
            'caustics': [float(z) for z in caustic_times(coeffs)],
            'rtol': self.rtol,
            'atol': self.atol,
        }
        if self.omega is not None:
            summary['u_min_zeta'] = self.omega * grid[i_min]
        logging.info(f"min zeta {summary['min_zeta']!r} at t={summary['t_min_zeta']!r}, "
                     f"Wronskian drift {summary['wronskian_drift']!r}")
        return columns, rows, summary

    def kernel(self):
        kcfg = self.config.kernel
        if kcfg.t is None:
            raise ConfigError("kernel.t is required", self.config.get('source'))
        coeffs = self.coefficients_until(kcfg.t)
        form = kernel_at(coeffs, self.spec, kcfg.t)
        xs = np.linspace(kcfg.x_min, kcfg.x_max, kcfg.x_points)
        xps = np.linspace(kcfg.xp_min, kcfg.xp_max, kcfg.xp_points)
        rows = []
        for x in xs:
            values = evaluate_kernel(form, x, xps)
            for xp, k in zip(xps, values):
                rows.append([x, xp, k.real, k.imag, abs(k)])
        return ['x', 'x_prime', 're', 'im', 'abs'], rows

    def wigner(self):
        wcfg = self.config.wigner
        if wcfg.t is None:
            raise ConfigError("wigner.t is required", self.config.get('source'))
        coeffs = self.coefficients_until(wcfg.t)
        state = gaussian_at(coeffs.at(wcfg.t), self.spec, initial_width(self.config))
        xs = np.linspace(wcfg.x_min, wcfg.x_max, wcfg.x_points)
        ps = np.linspace(wcfg.p_min, wcfg.p_max, wcfg.p_points)
        rows = []
        for x in xs:
            for p, w in zip(ps, wigner(state, x, ps)):
                rows.append([x, p, w])
        return ['x', 'p', 'w'], rows

    def scan(self):
        scfg = self.config.scan
        r = scfg.r if scfg.r is not None else (self.config.potential.r
                                               if self.family == 'paul-trap' else None)
        missing = [k for k in ('a_min', 'a_max', 'a_points', 'q_min', 'q_max', 'q_points')
                   if scfg[k] is None]
        if missing or r is None:
            raise ConfigError(f"scan section needs {', '.join(missing or ['r'])}",
                              self.config.get('source'))
        try:
            verdicts = stability_scan((scfg.a_min, scfg.a_max), (scfg.q_min, scfg.q_max), r,
                                      (scfg.a_points, scfg.q_points),
                                      rtol=self.rtol,
                                      atol=self.atol,
                                      verbose=self.verbose)
        except ValueError as e:
            raise ConfigError(str(e), self.config.get('source')) from e
        rows = [[v.a, v.q, v.abs_trace, v.status, v.error or '']
                for row in verdicts for v in row]
        return ['a', 'q', 'abs_trace', 'stable', 'error'], rows


def _write(columns, rows, config, summary=None):
    path = config.outputs.path
    fmt = config.outputs.format
    cache_table(columns, rows, path, fmt=fmt)
    if summary is not None and config.outputs.get('summary', True):
        try:
            cache_json(summary, f"{path}.summary.json")
        except BaseException:
            if osp.exists(path):
                os.remove(path)
            raise
    return path


def run_simulate(config, verbose=False):
    sim = QuadraticSimulation(config, verbose=verbose)
    sim.output_path()
    columns, rows, summary = sim.simulate()
    return _write(columns, rows, config, summary)


def run_kernel(config, verbose=False):
    sim = QuadraticSimulation(config, verbose=verbose)
    sim.output_path()
    return _write(*sim.kernel(), config)


def run_wigner(config, verbose=False):
    sim = QuadraticSimulation(config, verbose=verbose)
    sim.output_path()
    return _write(*sim.wigner(), config)


def run_scan(config, verbose=False):
    sim = QuadraticSimulation(config, verbose=verbose)
    sim.output_path()
    return _write(*sim.scan(), config)
