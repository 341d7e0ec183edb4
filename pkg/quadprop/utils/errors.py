"""Exception types shared across quadprop.

The command-line script maps these onto exit codes: configuration problems exit with 2,
numeric failures with 3.
"""

__all__ = [
    'ExpressionError', 'ExpressionParseError', 'UnknownFunctionError',
    'UnboundParameterError', 'ExpressionDomainError', 'IntegrationError',
    'StepUnderflowError', 'NonFiniteError', 'MaxStepsError', 'CausticError',
    'QuadratureError', 'FamilyMismatchError', 'ConfigError', 'SpanError'
]


class ExpressionError(ValueError):
    pass


class ExpressionParseError(ExpressionError):

    def __init__(self, offset, expected, src=''):
        self.offset = offset
        self.expected = expected
        self.src = src
        super().__init__(f"parse error at offset {offset}: expected {expected}")


class UnknownFunctionError(ExpressionError):

    def __init__(self, name, offset):
        self.name = name
        self.offset = offset
        super().__init__(f"unknown function '{name}' at offset {offset}")


class UnboundParameterError(ExpressionError):

    def __init__(self, name):
        self.name = name
        super().__init__(f"unbound parameter '{name}'")


class ExpressionDomainError(ArithmeticError):

    def __init__(self, operation, t):
        self.operation = operation
        self.t = t
        super().__init__(f"{operation} at t={t!r}")


class IntegrationError(RuntimeError):

    def __init__(self, message, t):
        self.t = t
        super().__init__(f"{message} at t={t!r}")


class StepUnderflowError(IntegrationError):
    pass


class NonFiniteError(IntegrationError):
    pass


class MaxStepsError(IntegrationError):
    pass


class CausticError(RuntimeError):

    def __init__(self, t, beta, zero=None):
        self.t = t
        self.beta = beta
        self.zero = zero
        where = f", nearest zero of beta at t={zero!r}" if zero is not None else ""
        super().__init__(f"caustic at t={t!r} (beta={beta!r}){where}")


class QuadratureError(RuntimeError):
    pass


class FamilyMismatchError(ValueError):

    def __init__(self, expected, got):
        self.expected = expected
        self.got = got
        super().__init__(f"operation requires the '{expected}' family, got '{got}'")


class ConfigError(ValueError):

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        self.message = message
        location = ''
        if path is not None:
            location = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(f"{location}{message}")


class SpanError(ValueError):

    def __init__(self, t, span):
        self.t = t
        self.span = span
        super().__init__(f"t={t!r} outside computed span [{span[0]!r}, {span[1]!r}]")
