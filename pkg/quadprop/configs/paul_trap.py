import copy

from easydict import EasyDict

from .shared_config import quadprop_shared_cfg

#------------------------ Paul trap ------------------------#

paul_trap = EasyDict(__name__='Config: Paul trap')
paul_trap.update(copy.deepcopy(quadprop_shared_cfg))

paul_trap.system.omega = 1.0
paul_trap.potential.family = 'paul-trap'
paul_trap.potential.a = 1.0
paul_trap.potential.q = 0.25
paul_trap.potential.r = 10.0
paul_trap.integration.u_max = 20.0
paul_trap.scan.update(a_min=-0.5, a_max=1.5, a_points=21, q_min=0.0, q_max=1.0, q_points=21, r=10.0)
