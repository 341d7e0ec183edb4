from . import configs, modules, utils
from .simulation import QuadraticSimulation
