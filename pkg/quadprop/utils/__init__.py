from .expr_parser import (compile_expression, differentiate, eval_expression,
                          format_expression, parse_expression, reduce_general_lagrangian)
from .ode_solvers import DormandPrince54, Trajectory, integrate

__all__ = [
    'parse_expression', 'differentiate', 'eval_expression', 'compile_expression',
    'format_expression', 'reduce_general_lagrangian', 'DormandPrince54', 'Trajectory',
    'integrate'
]
