"""Scalar expression trees: parsing, evaluation, printing and symbolic derivatives.

Grammar (whitespace is ignored, no implicit multiplication)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' unary)?
    atom    := number | ident | ident '(' expr ')' | '(' expr ')'

``^`` binds tighter than unary minus and is right-associative, so ``-t^2``
is ``-(t^2)`` and ``2^3^2`` is ``2^(3^2)``.  Functions: sin, cos, exp, log,
sqrt.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .errors import ArityError, EvalDomainError, ExprSyntaxError, NonFiniteResult, UnknownIdentifier

FUNCTIONS = ("sin", "cos", "exp", "log", "sqrt")


class Expr:
    """Base node. Nodes are immutable and hashable."""

    __slots__ = ()

    def evaluate(self, x):
        try:
            val = _eval(self, x)
        except OverflowError as exc:
            raise NonFiniteResult(f"overflow while evaluating {self}") from exc
        if not math.isfinite(val):
            raise NonFiniteResult(f"non-finite value while evaluating {self}")
        return val

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Const(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    index: int
    name: str = ""


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: Expr


@dataclass(frozen=True)
class Func(Expr):
    name: str
    arg: Expr


ZERO = Const(0.0)
ONE = Const(1.0)


# ---------------------------------------------------------------- evaluation

def _eval(e, x):
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return float(x[e.index])
    if isinstance(e, Neg):
        return -_eval(e.arg, x)
    if isinstance(e, Add):
        return _eval(e.left, x) + _eval(e.right, x)
    if isinstance(e, Sub):
        return _eval(e.left, x) - _eval(e.right, x)
    if isinstance(e, Mul):
        return _eval(e.left, x) * _eval(e.right, x)
    if isinstance(e, Div):
        den = _eval(e.right, x)
        if den == 0.0:
            raise EvalDomainError("division by zero")
        return _eval(e.left, x) / den
    if isinstance(e, Pow):
        b = _eval(e.base, x)
        p = _eval(e.exponent, x)
        if math.isfinite(p) and p == int(p):
            if b == 0.0 and p < 0:
                raise EvalDomainError("zero raised to a negative power")
            return math.pow(b, p)
        if b <= 0.0:
            raise EvalDomainError("non-integer power of a non-positive base")
        return math.pow(b, p)
    if isinstance(e, Func):
        a = _eval(e.arg, x)
        if e.name == "log":
            if a <= 0.0:
                raise EvalDomainError("log of a non-positive number")
            return math.log(a)
        if e.name == "sqrt":
            if a < 0.0:
                raise EvalDomainError("sqrt of a negative number")
            return math.sqrt(a)
        return getattr(math, e.name)(a)
    raise TypeError(f"not an expression node: {e!r}")


# ------------------------------------------------------------------- parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<id>[A-Za-z_]\w*)|(?P<op>[-+*/^(),]))"
)


def _tokenize(text):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            bad = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ExprSyntaxError(f"unexpected character {text[bad]!r}", bad)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, variables):
        self.tokens = _tokenize(text)
        self.i = 0
        self.variables = {name: k for k, name in enumerate(variables)}

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, op):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise ExprSyntaxError(f"expected {op!r}", pos)

    def parse(self):
        e = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected token {val!r}", pos)
        return e

    def expr(self):
        e = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            e = Add(e, rhs) if op == "+" else Sub(e, rhs)
        return e

    def term(self):
        e = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()[1]
            rhs = self.unary()
            e = Mul(e, rhs) if op == "*" else Div(e, rhs)
        return e

    def unary(self):
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            return Pow(base, self.unary())
        return base

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            return Const(float(val))
        if kind == "id":
            if self.peek()[:2] == ("op", "("):
                self.take()
                args = [self.expr()]
                while self.peek()[:2] == ("op", ","):
                    self.take()
                    args.append(self.expr())
                self.expect(")")
                if val not in FUNCTIONS:
                    if val in self.variables:
                        raise ArityError(f"variable {val!r} is not callable")
                    raise UnknownIdentifier(val)
                if len(args) != 1:
                    raise ArityError(f"{val} takes 1 argument, got {len(args)}")
                return Func(val, args[0])
            if val in self.variables:
                return Var(self.variables[val], val)
            if val in FUNCTIONS:
                raise ArityError(f"function {val!r} used without an argument")
            raise UnknownIdentifier(val)
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect(")")
            return e
        if kind == "end":
            raise ExprSyntaxError("unexpected end of input", pos)
        raise ExprSyntaxError(f"unexpected token {val!r}", pos)


def parse_expr(text, variables):
    """Parse ``text`` into an expression tree over the ordered ``variables``."""
    if not text or not text.strip():
        raise ExprSyntaxError("empty expression", 0)
    return _Parser(text, list(variables)).parse()


# ------------------------------------------------------------------ printing

_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2, Neg: 3, Pow: 4}


def _prec(e):
    if isinstance(e, Const) and (e.value < 0 or math.copysign(1.0, e.value) < 0):
        return 3
    return _PREC.get(type(e), 5)


def to_text(e, names=None):
    """Render an expression so that :func:`parse_expr` reads it back identically."""

    def wrap(sub, min_prec):
        s = to_text(sub, names)
        return f"({s})" if _prec(sub) < min_prec else s

    if isinstance(e, Const):
        v = e.value
        if math.isfinite(v) and v == int(v) and abs(v) < 1e15:
            s = str(int(v)) if math.copysign(1.0, v) > 0 else f"-{abs(int(v))}"
        else:
            s = repr(v)
        return s
    if isinstance(e, Var):
        if names is not None:
            return names[e.index]
        return e.name or f"x{e.index}"
    if isinstance(e, Neg):
        return "-" + wrap(e.arg, 3)
    if isinstance(e, (Add, Sub)):
        op = "+" if isinstance(e, Add) else "-"
        return f"{wrap(e.left, 1)} {op} {wrap(e.right, 2)}"
    if isinstance(e, (Mul, Div)):
        op = "*" if isinstance(e, Mul) else "/"
        return f"{wrap(e.left, 2)}{op}{wrap(e.right, 3)}"
    if isinstance(e, Pow):
        return f"{wrap(e.base, 5)}^{wrap(e.exponent, 3)}"
    if isinstance(e, Func):
        return f"{e.name}({to_text(e.arg, names)})"
    raise TypeError(f"not an expression node: {e!r}")


# ---------------------------------------------------- construction + folding

def _is(e, value):
    return isinstance(e, Const) and e.value == value


def add(a, b):
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    if _is(a, 0.0):
        return b
    if _is(b, 0.0):
        return a
    return Add(a, b)


def sub(a, b):
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value - b.value)
    if _is(b, 0.0):
        return a
    if _is(a, 0.0):
        return neg(b)
    return Sub(a, b)


def mul(a, b):
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    if _is(a, 0.0) or _is(b, 0.0):
        return ZERO
    if _is(a, 1.0):
        return b
    if _is(b, 1.0):
        return a
    return Mul(a, b)


def div(a, b):
    if isinstance(a, Const) and isinstance(b, Const) and b.value != 0.0:
        return Const(a.value / b.value)
    if _is(a, 0.0):
        return ZERO
    if _is(b, 1.0):
        return a
    return Div(a, b)


def neg(a):
    if isinstance(a, Const):
        return Const(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def power(a, b):
    if _is(b, 1.0):
        return a
    if _is(b, 0.0):
        return ONE
    return Pow(a, b)


# ----------------------------------------------------------- differentiation

def differentiate(e, var_index):
    """Symbolic partial derivative of ``e`` with respect to variable ``var_index``."""
    d = lambda s: differentiate(s, var_index)  # noqa: E731

    if isinstance(e, Const):
        return ZERO
    if isinstance(e, Var):
        return ONE if e.index == var_index else ZERO
    if isinstance(e, Neg):
        return neg(d(e.arg))
    if isinstance(e, Add):
        return add(d(e.left), d(e.right))
    if isinstance(e, Sub):
        return sub(d(e.left), d(e.right))
    if isinstance(e, Mul):
        return add(mul(d(e.left), e.right), mul(e.left, d(e.right)))
    if isinstance(e, Div):
        num = sub(mul(d(e.left), e.right), mul(e.left, d(e.right)))
        return div(num, power(e.right, Const(2.0)))
    if isinstance(e, Pow):
        db = d(e.base)
        de = d(e.exponent)
        if isinstance(de, Const) and de.value == 0.0:
            # d(b^c) = c * b^(c-1) * b'
            c = e.exponent
            return mul(mul(c, power(e.base, sub(c, ONE))), db)
        # d(b^g) = b^g * (g' log b + g b'/b)
        inner = add(mul(de, Func("log", e.base)), div(mul(e.exponent, db), e.base))
        return mul(e, inner)
    if isinstance(e, Func):
        da = d(e.arg)
        if _is(da, 0.0):
            return ZERO
        a = e.arg
        if e.name == "sin":
            outer = Func("cos", a)
        elif e.name == "cos":
            outer = neg(Func("sin", a))
        elif e.name == "exp":
            outer = e
        elif e.name == "log":
            return div(da, a)
        elif e.name == "sqrt":
            return div(da, mul(Const(2.0), e))
        else:
            raise ValueError(f"unknown function {e.name}")
        return mul(outer, da)
    raise TypeError(f"not an expression node: {e!r}")


def max_var_index(e):
    """Largest variable index used in ``e`` (-1 for constant expressions)."""
    if isinstance(e, Var):
        return e.index
    if isinstance(e, Const):
        return -1
    if isinstance(e, (Neg, Func)):
        return max_var_index(e.arg)
    if isinstance(e, Pow):
        return max(max_var_index(e.base), max_var_index(e.exponent))
    return max(max_var_index(e.left), max_var_index(e.right))
