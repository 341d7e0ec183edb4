from .coefficients import CoefficientSpec, EvolutionCoefficients, compute_coefficients
from .gaussian import GaussianState, evolve_gaussian
from .potentials import PotentialFamily, StabilityVerdict, make_spec, stability_scan
from .propagator import KernelForm, evaluate_kernel, kernel_at

__all__ = [
    'CoefficientSpec',
    'EvolutionCoefficients',
    'compute_coefficients',
    'GaussianState',
    'evolve_gaussian',
    'PotentialFamily',
    'StabilityVerdict',
    'make_spec',
    'stability_scan',
    'KernelForm',
    'kernel_at',
    'evaluate_kernel',
]
