import copy

from easydict import EasyDict

from .shared_config import quadprop_shared_cfg

#------------------------ free particle ------------------------#

free = EasyDict(__name__='Config: free particle')
free.update(copy.deepcopy(quadprop_shared_cfg))

free.potential.family = 'free'
# no natural frequency, so the width must be given explicitly
free.initial.width = 1.0
free.integration.t_max = 5.0
