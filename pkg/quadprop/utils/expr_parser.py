"""Scalar expressions of time for the coefficients c(t), e(t) and a1(t)..a4(t).

Grammar (standard precedence, '^' right associative)::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := '-' factor | power
    power  := atom ('^' factor)?
    atom   := number | ident | ident '(' expr ')' | '(' expr ')'

``t`` is the time variable and ``pi`` a built-in constant. Any other identifier is a
named parameter that must be bound at evaluation time.
"""
import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import (ExpressionDomainError, ExpressionParseError,
                     UnboundParameterError, UnknownFunctionError)

__all__ = [
    'Const', 'TimeVar', 'Param', 'Neg', 'BinOp', 'Call', 'ExpressionAst',
    'parse_expression', 'differentiate', 'eval_expression', 'compile_expression',
    'reduce_general_lagrangian', 'substitute_time', 'free_parameters',
    'depends_on_time', 'format_expression'
]

FUNCTIONS = ('sin', 'cos', 'exp', 'sqrt', 'log')
CONSTANTS = {'pi': math.pi}


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class TimeVar:
    pass


@dataclass(frozen=True)
class Param:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: 'ExpressionAst'


@dataclass(frozen=True)
class BinOp:
    op: str
    left: 'ExpressionAst'
    right: 'ExpressionAst'


@dataclass(frozen=True)
class Call:
    func: str
    arg: 'ExpressionAst'


ExpressionAst = Union[Const, TimeVar, Param, Neg, BinOp, Call]

ZERO = Const(0.0)
ONE = Const(1.0)

#------------------------ lexer ------------------------#

_TOKEN_REGEX = re.compile(r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^()])
""", re.VERBOSE)


def _tokenize(src):
    tokens = []
    pos = 0
    while pos < len(src):
        match = _TOKEN_REGEX.match(src, pos)
        if match is None:
            raise ExpressionParseError(_byte_offset(src, pos),
                                       "number, identifier, operator or parenthesis", src)
        kind = match.lastgroup
        if kind != 'ws':
            tokens.append((kind, match.group(kind), _byte_offset(src, pos)))
        pos = match.end()
    tokens.append(('eof', '', _byte_offset(src, len(src))))
    return tokens


def _byte_offset(src, index):
    return len(src[:index].encode('utf-8'))


#------------------------ parser ------------------------#

class _Parser:

    def __init__(self, src):
        self.src = src
        self.tokens = _tokenize(src)
        self.index = 0

    def peek(self):
        return self.tokens[self.index]

    def advance(self):
        token = self.tokens[self.index]
        self.index += 1
        return token

    def fail(self, expected):
        raise ExpressionParseError(self.peek()[2], expected, self.src)

    def expect_op(self, op):
        kind, text, _ = self.peek()
        if kind != 'op' or text != op:
            self.fail(f"'{op}'")
        self.advance()

    def parse(self):
        node = self.expr()
        if self.peek()[0] != 'eof':
            self.fail("operator or end of input")
        return node

    def expr(self):
        node = self.term()
        while self.peek()[0] == 'op' and self.peek()[1] in '+-':
            op = self.advance()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek()[0] == 'op' and self.peek()[1] in '*/':
            op = self.advance()[1]
            node = BinOp(op, node, self.factor())
        return node

    def factor(self):
        kind, text, _ = self.peek()
        if kind == 'op' and text == '-':
            self.advance()
            return Neg(self.factor())
        return self.power()

    def power(self):
        base = self.atom()
        kind, text, _ = self.peek()
        if kind == 'op' and text == '^':
            self.advance()
            return BinOp('^', base, self.factor())
        return base

    def atom(self):
        kind, text, offset = self.peek()
        if kind == 'number':
            self.advance()
            return Const(float(text))
        if kind == 'ident':
            self.advance()
            nxt = self.peek()
            if nxt[0] == 'op' and nxt[1] == '(':
                if text not in FUNCTIONS:
                    raise UnknownFunctionError(text, offset)
                self.advance()
                arg = self.expr()
                self.expect_op(')')
                return Call(text, arg)
            if text == 't':
                return TimeVar()
            if text in CONSTANTS:
                return Const(CONSTANTS[text])
            return Param(text)
        if kind == 'op' and text == '(':
            self.advance()
            node = self.expr()
            self.expect_op(')')
            return node
        self.fail("expression")


def parse_expression(src):
    """Parse ``src`` into an expression tree.

    Raises:
        ExpressionParseError: malformed input, with the byte offset of the offending token.
        UnknownFunctionError: call syntax on an identifier that is not a known function.
    """
    return _Parser(src).parse()


#------------------------ symbolic operations ------------------------#

def depends_on_time(ast):
    if isinstance(ast, TimeVar):
        return True
    if isinstance(ast, (Const, Param)):
        return False
    if isinstance(ast, Neg):
        return depends_on_time(ast.operand)
    if isinstance(ast, Call):
        return depends_on_time(ast.arg)
    return depends_on_time(ast.left) or depends_on_time(ast.right)


def free_parameters(ast):
    if isinstance(ast, Param):
        return {ast.name}
    if isinstance(ast, (Const, TimeVar)):
        return set()
    if isinstance(ast, Neg):
        return free_parameters(ast.operand)
    if isinstance(ast, Call):
        return free_parameters(ast.arg)
    return free_parameters(ast.left) | free_parameters(ast.right)


def differentiate(ast):
    """
    Exact derivative with respect to t.

    Subtrees without t differentiate to 0 as a whole, so constant arguments such as
    ``sqrt(0)`` are never evaluated. The result is otherwise left unsimplified.
    """
    if not depends_on_time(ast):
        return ZERO
    if isinstance(ast, TimeVar):
        return ONE
    if isinstance(ast, Neg):
        return Neg(differentiate(ast.operand))
    if isinstance(ast, Call):
        u = ast.arg
        du = differentiate(u)
        if ast.func == 'sin':
            outer = Call('cos', u)
        elif ast.func == 'cos':
            outer = Neg(Call('sin', u))
        elif ast.func == 'exp':
            outer = ast
        elif ast.func == 'sqrt':
            return BinOp('/', du, BinOp('*', Const(2.0), ast))
        else:
            return BinOp('/', du, u)
        return BinOp('*', outer, du)

    u, v = ast.left, ast.right
    if ast.op in '+-':
        return BinOp(ast.op, differentiate(u), differentiate(v))
    if ast.op == '*':
        return BinOp('+', BinOp('*', differentiate(u), v), BinOp('*', u, differentiate(v)))
    if ast.op == '/':
        numerator = BinOp('-', BinOp('*', differentiate(u), v), BinOp('*', u, differentiate(v)))
        return BinOp('/', numerator, BinOp('^', v, Const(2.0)))

    # u ^ v
    if not depends_on_time(v):
        return BinOp('*', BinOp('*', v, BinOp('^', u, BinOp('-', v, ONE))), differentiate(u))
    if not depends_on_time(u):
        return BinOp('*', BinOp('*', ast, Call('log', u)), differentiate(v))
    inner = BinOp('+', BinOp('*', differentiate(v), Call('log', u)),
                  BinOp('/', BinOp('*', v, differentiate(u)), u))
    return BinOp('*', ast, inner)


def substitute_time(ast, offset):
    """The expression evaluated at ``t + offset``."""
    if isinstance(ast, TimeVar):
        return BinOp('+', TimeVar(), Const(float(offset)))
    if isinstance(ast, (Const, Param)):
        return ast
    if isinstance(ast, Neg):
        return Neg(substitute_time(ast.operand, offset))
    if isinstance(ast, Call):
        return Call(ast.func, substitute_time(ast.arg, offset))
    return BinOp(ast.op, substitute_time(ast.left, offset), substitute_time(ast.right, offset))


def reduce_general_lagrangian(a1, a2, a3, a4):
    """c = da1/dt - a2 and e = da3/dt - a4 after removing total time derivatives."""
    c = BinOp('-', differentiate(a1), a2)
    e = BinOp('-', differentiate(a3), a4)
    return c, e


_PRECEDENCE = {'+': 1, '-': 1, '*': 2, '/': 2, '^': 4}


def format_expression(ast, parent=0):
    if isinstance(ast, Const):
        text = repr(ast.value)
        return f"({text})" if ast.value < 0 else text
    if isinstance(ast, TimeVar):
        return 't'
    if isinstance(ast, Param):
        return ast.name
    if isinstance(ast, Call):
        return f"{ast.func}({format_expression(ast.arg)})"
    if isinstance(ast, Neg):
        text = f"-{format_expression(ast.operand, 3)}"
        return f"({text})" if parent >= 3 else text
    prec = _PRECEDENCE[ast.op]
    if ast.op == '^':
        text = f"{format_expression(ast.left, prec + 1)}^{format_expression(ast.right, 3)}"
    else:
        text = f"{format_expression(ast.left, prec)}{ast.op}{format_expression(ast.right, prec + 1)}"
    return f"({text})" if prec < parent else text


#------------------------ evaluation ------------------------#

def _power(base, exponent, t):
    if base == 0.0 and exponent < 0.0:
        raise ExpressionDomainError('division by zero in power', t)
    if base < 0.0 and not float(exponent).is_integer():
        raise ExpressionDomainError('fractional power of negative base', t)
    return base ** exponent


def eval_expression(ast, t, bindings=None):
    """Evaluate at a single time ``t`` with the named parameters in ``bindings``."""
    bindings = bindings or {}
    if isinstance(ast, Const):
        return ast.value
    if isinstance(ast, TimeVar):
        return float(t)
    if isinstance(ast, Param):
        if ast.name not in bindings:
            raise UnboundParameterError(ast.name)
        return float(bindings[ast.name])
    if isinstance(ast, Neg):
        return -eval_expression(ast.operand, t, bindings)
    if isinstance(ast, Call):
        x = eval_expression(ast.arg, t, bindings)
        if ast.func == 'sqrt':
            if x < 0.0:
                raise ExpressionDomainError('sqrt of negative argument', t)
            return math.sqrt(x)
        if ast.func == 'log':
            if x <= 0.0:
                raise ExpressionDomainError('log of non-positive argument', t)
            return math.log(x)
        if ast.func == 'exp':
            try:
                return math.exp(x)
            except OverflowError:
                raise ExpressionDomainError('overflow in exp', t) from None
        return math.sin(x) if ast.func == 'sin' else math.cos(x)

    left = eval_expression(ast.left, t, bindings)
    right = eval_expression(ast.right, t, bindings)
    if ast.op == '+':
        return left + right
    if ast.op == '-':
        return left - right
    if ast.op == '*':
        return left * right
    if ast.op == '/':
        if right == 0.0:
            raise ExpressionDomainError('division by zero', t)
        return left / right
    try:
        return _power(left, right, t)
    except OverflowError:
        raise ExpressionDomainError('overflow in power', t) from None


def _first_bad_time(t, mask):
    if np.ndim(mask) == 0:
        return float(t) if np.ndim(t) == 0 else float(np.ravel(t)[0])
    t = np.broadcast_to(t, np.shape(mask))
    return float(t[np.argmax(mask)])


def _checked(func, bad, message):

    def wrapper(x, t):
        mask = bad(x)
        if np.any(mask):
            raise ExpressionDomainError(message, _first_bad_time(t, mask))
        return func(x)

    return wrapper


_SQRT = _checked(np.sqrt, lambda x: x < 0.0, 'sqrt of negative argument')
_LOG = _checked(np.log, lambda x: x <= 0.0, 'log of non-positive argument')


def compile_expression(ast, bindings=None):
    """Build a vectorised callable ``f(t)`` equivalent to :func:`eval_expression`.

    Unbound parameters are reported here rather than at call time.
    """
    bindings = bindings or {}

    if isinstance(ast, Const):
        value = ast.value
        return lambda t: value + 0.0 * np.asarray(t, dtype=float)
    if isinstance(ast, TimeVar):
        return lambda t: np.asarray(t, dtype=float)
    if isinstance(ast, Param):
        if ast.name not in bindings:
            raise UnboundParameterError(ast.name)
        value = float(bindings[ast.name])
        return lambda t: value + 0.0 * np.asarray(t, dtype=float)
    if isinstance(ast, Neg):
        inner = compile_expression(ast.operand, bindings)
        return lambda t: -inner(t)
    if isinstance(ast, Call):
        arg = compile_expression(ast.arg, bindings)
        if ast.func == 'sqrt':
            return lambda t: _SQRT(arg(t), t)
        if ast.func == 'log':
            return lambda t: _LOG(arg(t), t)
        func = {'sin': np.sin, 'cos': np.cos, 'exp': np.exp}[ast.func]
        return lambda t: func(arg(t))

    left = compile_expression(ast.left, bindings)
    right = compile_expression(ast.right, bindings)
    if ast.op == '+':
        return lambda t: left(t) + right(t)
    if ast.op == '-':
        return lambda t: left(t) - right(t)
    if ast.op == '*':
        return lambda t: left(t) * right(t)
    if ast.op == '/':

        def divide(t):
            den = right(t)
            if np.any(den == 0.0):
                raise ExpressionDomainError('division by zero', _first_bad_time(t, den == 0.0))
            return left(t) / den

        return divide

    def power(t):
        base, exponent = left(t), right(t)
        if np.any((base == 0.0) & (exponent < 0.0)):
            raise ExpressionDomainError('division by zero in power',
                                        _first_bad_time(t, (base == 0.0) & (exponent < 0.0)))
        fractional = (base < 0.0) & (np.floor(exponent) != exponent)
        if np.any(fractional):
            raise ExpressionDomainError('fractional power of negative base',
                                        _first_bad_time(t, fractional))
        return np.power(base, exponent)

    return power
