import copy

from .driven_harmonic import driven_harmonic
from .free import free
from .harmonic import harmonic
from .paul_trap import paul_trap
from .shared_config import quadprop_shared_cfg

# custom potentials start from the shared defaults
custom = copy.deepcopy(quadprop_shared_cfg)
custom.__name__ = 'Config: custom potential'

FAMILY_CONFIGS = {
    'free': free,
    'harmonic': harmonic,
    'driven-harmonic': driven_harmonic,
    'paul-trap': paul_trap,
    'custom': custom,
}

# columns emitted by `simulate` when the config names none
DEFAULT_COLUMNS = {
    'free': ('t', 'alpha', 'beta', 'lambda_phase', 'zeta', 'energy'),
    'harmonic': ('t', 'u', 'alpha', 'beta', 'lambda_phase', 'zeta', 'energy'),
    'driven-harmonic': ('t', 'u', 'alpha', 'beta', 'gamma', 'gamma_dot', 'lambda_phase', 'zeta',
                        'energy', 'com_energy', 'du_dt', 't1', 't2', 'chi', 'work_source',
                        'work_tr', 'heat_def', 'heat_tr'),
    'paul-trap': ('u', 'zeta', 'energy_ratio'),
    'custom': ('t', 'alpha', 'beta', 'gamma', 'gamma_dot', 'lambda_phase', 'zeta', 'energy'),
}
