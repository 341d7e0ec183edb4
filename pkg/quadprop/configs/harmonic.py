import copy

from easydict import EasyDict

from .shared_config import quadprop_shared_cfg

#------------------------ harmonic oscillator ------------------------#

harmonic = EasyDict(__name__='Config: harmonic oscillator')
harmonic.update(copy.deepcopy(quadprop_shared_cfg))

harmonic.system.omega = 1.0
harmonic.potential.family = 'harmonic'
harmonic.integration.t_max = 20.0
