"""Arithmetic expressions in the variables t and u for coefficients and sources.

A small recursive-descent parser over ``+ - * / ^`` (with ``^`` binding
tightest and associating right, unary minus next, then ``* /``, then
``+ -``), the constants ``pi`` and ``e``, and a fixed function set.
Evaluation is strict about domains: anything that would produce a NaN or an
infinity (log of a nonpositive number, 0 raised to a negative power,
division by zero, overflow, ...) raises :class:`ExprEvalError` naming the
offending subexpression instead of propagating the NaN.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

from . import fractional
from .errors import ExprEvalError, ExprSyntaxError, GammaPoleError

__all__ = [
    "Expr",
    "Literal",
    "Variable",
    "Constant",
    "Unary",
    "Binary",
    "Call",
    "parse",
    "evaluate",
    "to_source",
]

VARIABLES = ("t", "u")
CONSTANTS = {"pi": math.pi, "e": math.e}
FUNCTION_ARITY = {
    "sin": 1,
    "cos": 1,
    "exp": 1,
    "log": 1,
    "abs": 1,
    "sqrt": 1,
    "pow": 2,
    "gamma": 1,
    "max": 2,
    "min": 2,
}


@dataclass(frozen=True)
class Literal:
    value: float


@dataclass(frozen=True)
class Variable:
    name: str


@dataclass(frozen=True)
class Constant:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str  # only "-"
    operand: "Expr"


@dataclass(frozen=True)
class Binary:
    op: str  # one of + - * / ^
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple["Expr", ...]


Expr = Union[Literal, Variable, Constant, Unary, Binary, Call]


_TOKEN_RE = re.compile(
    r"""
    (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)


def _tokenize(source: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(source):
        if source[pos].isspace():
            pos += 1
            continue
        match = _TOKEN_RE.match(source, pos)
        if match is None:
            raise ExprSyntaxError(f"unexpected character {source[pos]!r}", pos)
        kind = match.lastgroup or "op"
        tokens.append((kind, match.group(), pos))
        pos = match.end()
    tokens.append(("end", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.tokens = _tokenize(source)
        self.pos = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def advance(self) -> tuple[str, str, int]:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def expect(self, text: str) -> None:
        kind, value, offset = self.peek()
        if kind == "op" and value == text:
            self.advance()
            return
        raise ExprSyntaxError(f"expected {text!r}, found {value or 'end of input'!r}", offset)

    def parse(self) -> Expr:
        node = self.expr()
        kind, value, offset = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected trailing input {value!r}", offset)
        return node

    def expr(self) -> Expr:
        node = self.term()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.advance()
                node = Binary(value, node, self.term())
            else:
                return node

    def term(self) -> Expr:
        node = self.unary()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "*/":
                self.advance()
                node = Binary(value, node, self.unary())
            else:
                return node

    def unary(self) -> Expr:
        kind, value, _ = self.peek()
        if kind == "op" and value == "-":
            self.advance()
            return Unary("-", self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        kind, value, _ = self.peek()
        if kind == "op" and value == "^":
            self.advance()
            # the exponent re-enters at unary level, so 2^-3 parses and
            # 2^3^2 associates to the right
            return Binary("^", base, self.unary())
        return base

    def atom(self) -> Expr:
        kind, value, offset = self.advance()
        if kind == "num":
            return Literal(float(value))
        if kind == "ident":
            next_kind, next_value, _ = self.peek()
            if next_kind == "op" and next_value == "(":
                return self.call(value, offset)
            if value in VARIABLES:
                return Variable(value)
            if value in CONSTANTS:
                return Constant(value)
            if value in FUNCTION_ARITY:
                raise ExprSyntaxError(f"function {value!r} requires parenthesized arguments", offset)
            raise ExprSyntaxError(f"unknown identifier {value!r}", offset)
        if kind == "op" and value == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ExprSyntaxError(
            f"expected a number, identifier or '(', found {value or 'end of input'!r}", offset
        )

    def call(self, name: str, offset: int) -> Expr:
        arity = FUNCTION_ARITY.get(name)
        if arity is None:
            raise ExprSyntaxError(f"unknown function {name!r}", offset)
        self.expect("(")
        args = [self.expr()]
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value == ",":
                self.advance()
                args.append(self.expr())
            else:
                break
        self.expect(")")
        if len(args) != arity:
            raise ExprSyntaxError(
                f"function {name!r} takes {arity} argument(s), got {len(args)}", offset
            )
        return Call(name, tuple(args))


def parse(source: str) -> Expr:
    """Parse an expression over t and u; raise :class:`ExprSyntaxError` with offset."""
    return _Parser(source).parse()


_PREC_ADD, _PREC_MUL, _PREC_UNARY, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _precedence(e: Expr) -> int:
    if isinstance(e, Binary):
        if e.op in "+-":
            return _PREC_ADD
        if e.op in "*/":
            return _PREC_MUL
        return _PREC_POW
    if isinstance(e, Unary):
        return _PREC_UNARY
    return _PREC_ATOM


def to_source(e: Expr) -> str:
    """Render back to source with minimal parentheses; parse(to_source(e)) == e."""
    if isinstance(e, Literal):
        return repr(e.value)
    if isinstance(e, (Variable, Constant)):
        return e.name
    if isinstance(e, Call):
        return f"{e.name}({', '.join(to_source(a) for a in e.args)})"
    if isinstance(e, Unary):
        inner = to_source(e.operand)
        if _precedence(e.operand) < _PREC_UNARY:
            inner = f"({inner})"
        return f"-{inner}"
    assert isinstance(e, Binary)
    own = _precedence(e)
    left = to_source(e.left)
    right = to_source(e.right)
    if e.op == "^":
        # right-associative: parenthesize any non-atomic base, and any
        # exponent looser than unary
        if _precedence(e.left) <= own:
            left = f"({left})"
        if _precedence(e.right) < _PREC_UNARY:
            right = f"({right})"
    else:
        if _precedence(e.left) < own:
            left = f"({left})"
        if _precedence(e.right) <= own:
            right = f"({right})"
    return f"{left}{e.op}{right}"


def _check_finite(value: float, node: Expr) -> float:
    if not math.isfinite(value):
        raise ExprEvalError("result is not finite", to_source(node))
    return value


def _power(x: float, y: float, node: Expr) -> float:
    if x < 0.0 and y != round(y):
        raise ExprEvalError("negative base with non-integer exponent", to_source(node))
    if x == 0.0 and y < 0.0:
        raise ExprEvalError("zero raised to a negative power", to_source(node))
    try:
        return math.pow(x, y)
    except (OverflowError, ValueError) as exc:
        raise ExprEvalError(f"power failed ({exc})", to_source(node)) from exc


def evaluate(e: Expr, t: float, u: float | None = None) -> float:
    """Evaluate at the point (t, u); u may be omitted for expressions in t only."""
    if isinstance(e, Literal):
        return e.value
    if isinstance(e, Constant):
        return CONSTANTS[e.name]
    if isinstance(e, Variable):
        if e.name == "t":
            return t
        if u is None:
            raise ExprEvalError("expression references 'u' but no value was supplied", e.name)
        return u
    if isinstance(e, Unary):
        return -evaluate(e.operand, t, u)
    if isinstance(e, Binary):
        lhs = evaluate(e.left, t, u)
        rhs = evaluate(e.right, t, u)
        if e.op == "+":
            return _check_finite(lhs + rhs, e)
        if e.op == "-":
            return _check_finite(lhs - rhs, e)
        if e.op == "*":
            return _check_finite(lhs * rhs, e)
        if e.op == "/":
            if rhs == 0.0:
                raise ExprEvalError("division by zero", to_source(e))
            return _check_finite(lhs / rhs, e)
        return _check_finite(_power(lhs, rhs, e), e)
    assert isinstance(e, Call)
    args = [evaluate(a, t, u) for a in e.args]
    name = e.name
    if name == "sin":
        return math.sin(args[0])
    if name == "cos":
        return math.cos(args[0])
    if name == "exp":
        try:
            return math.exp(args[0])
        except OverflowError as exc:
            raise ExprEvalError("exp overflow", to_source(e)) from exc
    if name == "log":
        if args[0] <= 0.0:
            raise ExprEvalError("log of a nonpositive number", to_source(e))
        return math.log(args[0])
    if name == "abs":
        return abs(args[0])
    if name == "sqrt":
        if args[0] < 0.0:
            raise ExprEvalError("sqrt of a negative number", to_source(e))
        return math.sqrt(args[0])
    if name == "pow":
        return _check_finite(_power(args[0], args[1], e), e)
    if name == "gamma":
        try:
            return _check_finite(fractional.gamma(args[0]), e)
        except GammaPoleError as exc:
            raise ExprEvalError(f"gamma pole ({exc})", to_source(e)) from exc
    if name == "max":
        return max(args[0], args[1])
    if name == "min":
        return min(args[0], args[1])
    raise ExprEvalError(f"unknown function {name!r}", to_source(e))  # unreachable after parse
