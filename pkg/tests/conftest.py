import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from quadprop.modules.coefficients import compute_coefficients
from quadprop.modules.potentials import PotentialFamily, make_spec
from quadprop.utils.expr_parser import parse_expression


def harmonic(omega=1.0, mass=1.0, hbar=1.0):
    return make_spec(PotentialFamily('harmonic', mass=mass, hbar=hbar, omega=omega))


def free(mass=1.0, hbar=1.0):
    return make_spec(PotentialFamily('free', mass=mass, hbar=hbar))


def driven(drive='e0*cos(Omega*t)', omega=1.0, **params):
    bindings = {'e0': 0.3, 'Omega': 0.7}
    bindings.update(params)
    return make_spec(
        PotentialFamily('driven-harmonic',
                        omega=omega,
                        drive=parse_expression(drive),
                        bindings=bindings))


def paul_trap(a=1.0, q=0.25, r=10.0):
    return make_spec(PotentialFamily('paul-trap', omega=1.0, a=a, q=q, r=r))


@pytest.fixture
def harmonic_spec():
    return harmonic()


@pytest.fixture
def free_spec():
    return free()


@pytest.fixture
def driven_spec():
    return driven()


@pytest.fixture(scope='session')
def trap_spec():
    return paul_trap()


@pytest.fixture(scope='session')
def trap_coeffs(trap_spec):
    return compute_coefficients(trap_spec, np.linspace(0.0, 20.0, 2001))


@pytest.fixture(scope='session')
def driven_coeffs():
    spec = driven()
    return spec, compute_coefficients(spec, np.linspace(0.0, 12.0, 1201))


@pytest.fixture
def write_config(tmp_path):
    """Write an INI body to a temporary file and return its path."""

    def write(body, name='run.ini'):
        path = tmp_path / name
        path.write_text(body)
        return str(path)

    return write
