import copy

from easydict import EasyDict

from .shared_config import quadprop_shared_cfg

#------------------------ harmonic oscillator with a classical source ------------------------#

driven_harmonic = EasyDict(__name__='Config: driven harmonic oscillator')
driven_harmonic.update(copy.deepcopy(quadprop_shared_cfg))

driven_harmonic.system.omega = 1.0
driven_harmonic.potential.family = 'driven-harmonic'
driven_harmonic.potential.drive = 'e0*cos(Omega*t)'
driven_harmonic.parameters.update(e0=0.3, Omega=0.7)
driven_harmonic.integration.t_max = 20.0
