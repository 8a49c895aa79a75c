"""A small expression language for scalar fields on the (t, x) plane.

Expressions are built from the variables t and x, real literals, the binary
operators + - * / ^ (the exponent must be an integer literal), unary minus,
and the functions sin, cos, tan, exp, log, sqrt, tanh, atan and csc.
Precedence is ^ > unary minus > * / > + -, with the usual left associativity
for + - * / and right associativity for ^ (chained literal exponents are
folded).  Evaluation propagates forward-mode dual numbers with a
two-component derivative part, so both first partials d/dt and d/dx come out
exact (no truncation error beyond rounding) in a single pass.

Evaluation accepts scalars or numpy arrays of coordinates; array evaluation
is used by the grid-based cone checks.

There is deliberately no abs(): the cone tests need differentiable fields.
A modulus can be composed as sqrt(re^2 + im^2) where the argument stays
positive, at the caller's own risk near zeros.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .minkowski import SpacetimePoint

# --- abstract syntax ---------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str  # 't' or 'x'


@dataclass(frozen=True)
class Neg:
    arg: "FieldExpr"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of '+', '-', '*', '/'
    lhs: "FieldExpr"
    rhs: "FieldExpr"


@dataclass(frozen=True)
class Pow:
    base: "FieldExpr"
    exponent: int


@dataclass(frozen=True)
class Call:
    func: str
    arg: "FieldExpr"


FieldExpr = Union[Num, Var, Neg, BinOp, Pow, Call]

FUNCTIONS = ("sin", "cos", "tan", "exp", "log", "sqrt", "tanh", "atan", "csc")
VARIABLES = ("t", "x")

ZERO = Num(0.0)


class ParseError(ValueError):
    """Syntax or name error, carrying the byte offset and the expected tokens."""

    def __init__(self, message: str, offset: int, expected: tuple[str, ...] = ()):
        self.offset = offset
        self.expected = expected
        suffix = f" (expected one of: {', '.join(expected)})" if expected else ""
        super().__init__(f"{message} at offset {offset}{suffix}")


class DomainError(ValueError):
    """Evaluation outside a function's real domain, pointing at the subexpression."""

    def __init__(self, message: str, expr: FieldExpr, index: int | None = None):
        self.expr = expr
        self.index = index
        super().__init__(f"{message} in '{to_source(expr)}'")


# --- tokenizer ---------------------------------------------------------------

_OPS = set("+-*/^()")


def _tokenize(src: str) -> list[tuple[str, str, int]]:
    """Return (kind, text, offset) triples; kind in {num, ident, op, end}."""
    tokens = []
    i, n = 0, len(src)
    while i < n:
        ch = src[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _OPS:
            tokens.append(("op", ch, i))
            i += 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and src[i + 1].isdigit()):
            j = i
            while j < n and src[j].isdigit():
                j += 1
            if j < n and src[j] == ".":
                j += 1
                while j < n and src[j].isdigit():
                    j += 1
            if j < n and src[j] in "eE":
                k = j + 1
                if k < n and src[k] in "+-":
                    k += 1
                if k < n and src[k].isdigit():
                    j = k
                    while j < n and src[j].isdigit():
                        j += 1
            tokens.append(("num", src[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            tokens.append(("ident", src[i:j], i))
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", n))
    return tokens


# --- parser ------------------------------------------------------------------


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.tokens = _tokenize(src)
        self.pos = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str) -> None:
        kind, text, off = self.peek()
        if kind != "op" or text != op:
            raise ParseError(f"unexpected token {text or 'end of input'!r}", off, (repr(op),))
        self.advance()

    def parse(self) -> FieldExpr:
        expr = self.expr()
        kind, text, off = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected token {text!r}", off, ("operator", "end of input"))
        return expr

    def expr(self) -> FieldExpr:
        node = self.term()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "+-":
                self.advance()
                node = BinOp(text, node, self.term())
            else:
                return node

    def term(self) -> FieldExpr:
        node = self.unary()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "*/":
                self.advance()
                node = BinOp(text, node, self.unary())
            else:
                return node

    def unary(self) -> FieldExpr:
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> FieldExpr:
        base = self.atom()
        kind, text, _ = self.peek()
        if kind == "op" and text == "^":
            self.advance()
            return Pow(base, self.exponent())
        return base

    def exponent(self) -> int:
        """An optionally negated integer literal; chains fold right-associatively."""
        sign = 1
        kind, text, off = self.peek()
        if kind == "op" and text == "-":
            self.advance()
            sign = -1
            kind, text, off = self.peek()
        if kind != "num" or any(c in text for c in ".eE"):
            raise ParseError(
                f"exponent must be an integer literal, got {text or 'end of input'!r}",
                off,
                ("integer",),
            )
        self.advance()
        value = sign * int(text)
        kind, text, off = self.peek()
        if kind == "op" and text == "^":
            self.advance()
            nested = self.exponent()
            if nested < 0:
                raise ParseError("chained exponent must stay integral", off, ("integer",))
            value = value**nested
        return value

    def atom(self) -> FieldExpr:
        kind, text, off = self.advance()
        if kind == "num":
            return Num(float(text))
        if kind == "ident":
            nkind, ntext, _ = self.peek()
            if nkind == "op" and ntext == "(":
                if text not in FUNCTIONS:
                    raise ParseError(f"unknown function {text!r}", off, FUNCTIONS)
                self.advance()
                arg = self.expr()
                self.expect_op(")")
                return Call(text, arg)
            if text not in VARIABLES:
                raise ParseError(f"unknown identifier {text!r}", off, VARIABLES + FUNCTIONS)
            return Var(text)
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise ParseError(
            f"unexpected token {text or 'end of input'!r}",
            off,
            ("number", "identifier", "'('", "'-'"),
        )


def parse(src: str) -> FieldExpr:
    """Parse an expression source string into its syntax tree."""
    return _Parser(src).parse()


# --- printer -----------------------------------------------------------------

_LEVEL_ADD, _LEVEL_MUL, _LEVEL_UNARY, _LEVEL_POW, _LEVEL_ATOM = 1, 2, 3, 4, 5


def _render(e: FieldExpr, context_level: int) -> str:
    if isinstance(e, Num):
        text, level = repr(e.value), _LEVEL_ATOM
    elif isinstance(e, Var):
        text, level = e.name, _LEVEL_ATOM
    elif isinstance(e, Call):
        text, level = f"{e.func}({_render(e.arg, 0)})", _LEVEL_ATOM
    elif isinstance(e, Neg):
        text, level = f"-{_render(e.arg, _LEVEL_UNARY)}", _LEVEL_UNARY
    elif isinstance(e, Pow):
        text, level = f"{_render(e.base, _LEVEL_ATOM)}^{e.exponent}", _LEVEL_POW
    elif isinstance(e, BinOp):
        if e.op in "+-":
            level = _LEVEL_ADD
        else:
            level = _LEVEL_MUL
        text = f"{_render(e.lhs, level)} {e.op} {_render(e.rhs, level + 1)}"
    else:
        raise TypeError(f"not a field expression: {e!r}")
    if level < context_level:
        return f"({text})"
    return text


def to_source(e: FieldExpr) -> str:
    """Render the tree back to source; parse(to_source(e)) == e for parsed trees."""
    return _render(e, 0)


# --- dual-number evaluation ---------------------------------------------------

# Each node evaluates to a triple (value, d/dt, d/dx) of floats or arrays.


def _check(ok, message: str, node: FieldExpr) -> None:
    ok = np.asarray(ok)
    if not ok.all():
        bad = int(np.argmin(ok)) if ok.ndim else None
        raise DomainError(message, node, index=bad)


def _eval(e: FieldExpr, t, x):
    if isinstance(e, Num):
        return e.value, 0.0, 0.0
    if isinstance(e, Var):
        if e.name == "t":
            return t, 1.0, 0.0
        return x, 0.0, 1.0
    if isinstance(e, Neg):
        v, dt, dx = _eval(e.arg, t, x)
        return -v, -dt, -dx
    if isinstance(e, BinOp):
        av, adt, adx = _eval(e.lhs, t, x)
        bv, bdt, bdx = _eval(e.rhs, t, x)
        if e.op == "+":
            return av + bv, adt + bdt, adx + bdx
        if e.op == "-":
            return av - bv, adt - bdt, adx - bdx
        if e.op == "*":
            return av * bv, adt * bv + av * bdt, adx * bv + av * bdx
        _check(np.asarray(bv) != 0.0, "division by zero", e)
        inv = 1.0 / bv
        v = av * inv
        return v, (adt - v * bdt) * inv, (adx - v * bdx) * inv
    if isinstance(e, Pow):
        bv, bdt, bdx = _eval(e.base, t, x)
        n = e.exponent
        if n == 0:
            return bv * 0.0 + 1.0, 0.0, 0.0
        if n < 0:
            _check(np.asarray(bv) != 0.0, "zero base with negative exponent", e)
        v = bv ** float(n)
        g = float(n) * bv ** float(n - 1)
        return v, g * bdt, g * bdx
    if isinstance(e, Call):
        av, adt, adx = _eval(e.arg, t, x)
        if e.func == "sin":
            v, g = np.sin(av), np.cos(av)
        elif e.func == "cos":
            v, g = np.cos(av), -np.sin(av)
        elif e.func == "tan":
            v = np.tan(av)
            g = 1.0 + v * v
        elif e.func == "exp":
            v = np.exp(av)
            g = v
        elif e.func == "log":
            _check(np.asarray(av) > 0.0, "log of a non-positive value", e)
            v, g = np.log(av), 1.0 / av
        elif e.func == "sqrt":
            _check(np.asarray(av) > 0.0, "sqrt of a non-positive value", e)
            v = np.sqrt(av)
            g = 0.5 / v
        elif e.func == "tanh":
            v = np.tanh(av)
            g = 1.0 - v * v
        elif e.func == "atan":
            v = np.arctan(av)
            g = 1.0 / (1.0 + av * av)
        elif e.func == "csc":
            s = np.sin(av)
            _check(np.asarray(s) != 0.0, "csc at a zero of sin", e)
            v = 1.0 / s
            g = -v * v * np.cos(av)
        else:  # unreachable for parsed trees
            raise DomainError(f"unknown function {e.func!r}", e)
        _check(np.isfinite(np.asarray(v)), "non-finite value", e)
        return v, g * adt, g * adx
    raise TypeError(f"not a field expression: {e!r}")


def _value(e: FieldExpr, t, x):
    """Value-only walk; same domain checks, no derivative propagation."""
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        return t if e.name == "t" else x
    if isinstance(e, Neg):
        return -_value(e.arg, t, x)
    if isinstance(e, BinOp):
        a = _value(e.lhs, t, x)
        b = _value(e.rhs, t, x)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        _check(np.asarray(b) != 0.0, "division by zero", e)
        return a / b
    if isinstance(e, Pow):
        b = _value(e.base, t, x)
        if e.exponent < 0:
            _check(np.asarray(b) != 0.0, "zero base with negative exponent", e)
        return b ** float(e.exponent)
    if isinstance(e, Call):
        a = _value(e.arg, t, x)
        if e.func == "sin":
            return np.sin(a)
        if e.func == "cos":
            return np.cos(a)
        if e.func == "tan":
            v = np.tan(a)
        elif e.func == "exp":
            v = np.exp(a)
        elif e.func == "log":
            _check(np.asarray(a) > 0.0, "log of a non-positive value", e)
            return np.log(a)
        elif e.func == "sqrt":
            _check(np.asarray(a) > 0.0, "sqrt of a non-positive value", e)
            return np.sqrt(a)
        elif e.func == "tanh":
            return np.tanh(a)
        elif e.func == "atan":
            return np.arctan(a)
        elif e.func == "csc":
            s = np.sin(a)
            _check(np.asarray(s) != 0.0, "csc at a zero of sin", e)
            return 1.0 / s
        else:
            raise DomainError(f"unknown function {e.func!r}", e)
        _check(np.isfinite(np.asarray(v)), "non-finite value", e)
        return v
    raise TypeError(f"not a field expression: {e!r}")


@dataclass(frozen=True)
class FieldEval:
    """Value of a field and its two first partial derivatives at an event."""

    value: float
    d_dt: float
    d_dx: float


def eval_with_derivatives(e: FieldExpr, p: SpacetimePoint) -> FieldEval:
    """Evaluate the field and its exact first partials at a single event."""
    v, dt, dx = _eval(e, p.t, p.x)
    return FieldEval(float(v), float(np.asarray(dt)), float(np.asarray(dx)))


def eval_grid(e: FieldExpr, t: np.ndarray, x: np.ndarray):
    """Vectorised evaluation: returns (value, d/dt, d/dx) arrays over the inputs."""
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    v, dt, dx = _eval(e, t, x)
    shape = np.broadcast_shapes(t.shape, x.shape)
    return (
        np.broadcast_to(np.asarray(v, dtype=float), shape).copy(),
        np.broadcast_to(np.asarray(dt, dtype=float), shape).copy(),
        np.broadcast_to(np.asarray(dx, dtype=float), shape).copy(),
    )


def eval_values(e: FieldExpr, t: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Vectorised value-only evaluation over coordinate arrays."""
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    v = _value(e, t, x)
    shape = np.broadcast_shapes(t.shape, x.shape)
    return np.broadcast_to(np.asarray(v, dtype=float), shape).copy()
