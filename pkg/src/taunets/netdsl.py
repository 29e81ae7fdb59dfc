"""A small expression language for nets.

Grammar (whitespace insensitive, no implicit multiplication)::

    expr    := term (('+' | '-') term)*
    term    := factor (('*' | '/') factor)*
    factor  := unary ('^' factor)?
    unary   := '-'? primary
    primary := number | 'eps' | 'x'<i> | '|x|' | fn '(' expr ')' | '(' expr ')'
    fn      := 'ln' | 'exp' | 'sigma' | 'abs' | 'log_eps'

``^`` is right-associative and a leading minus binds tighter than ``^``, so
``-x1^2`` is ``(-x1)^2``.  Expressions are evaluated in signed log form:
``eps^(log_eps(|x|)^2)`` stays exact far below the float range.  Infinite
intermediates are allowed (``ln 0 = -inf``, ``eps^inf = 0``); only a NaN or
``+inf`` final value, or a genuine domain violation such as the log of a
negative number, is reported as an evaluation error.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import _kernels
from ._kernels import row_norms
from .asymptotics import ScalarNet, Slog, from_slog, slog_add, slog_mul, slog_sub, to_slog
from .errors import NetEvaluationError, TaunetsError
from .gfunction import FunctionNet
from .gpoint import Box

FUNCTIONS = ("ln", "exp", "sigma", "abs", "log_eps")
BINARY_OPS = ("+", "-", "*", "/", "^")


class ParseError(TaunetsError, ValueError):
    """Malformed source text.  ``offset`` is a byte offset into the UTF-8 source."""

    def __init__(self, offset: int, expected: str, source: str):
        self.offset = offset
        self.expected = expected
        self.source = source
        raw = source.encode("utf-8")
        self.excerpt = raw[max(0, offset - 20):offset + 20].decode("utf-8", "replace")
        super().__init__(f"at offset {offset}: expected {expected} (near {self.excerpt!r})")


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Num:
    value: float

    def __post_init__(self):
        if not (math.isfinite(self.value) and self.value >= 0):
            raise ValueError("number literals are finite and non-negative; use Neg for signs")


@dataclass(frozen=True)
class Var:
    """``eps``, ``abs_x`` (``|x|``) or ``x`` with a 1-based ``index``."""

    name: str
    index: int = 0


@dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclass(frozen=True)
class Call:
    fn: str
    arg: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


Node = Union[Num, Var, Neg, Call, BinOp]

EPS = Var("eps")
ABS_X = Var("abs_x")


def x(i: int) -> Var:
    return Var("x", i)


def uses_x(e: Node) -> bool:
    if isinstance(e, Var):
        return e.name != "eps"
    if isinstance(e, Num):
        return False
    if isinstance(e, (Neg, Call)):
        return uses_x(e.arg)
    return uses_x(e.left) or uses_x(e.right)


def max_index(e: Node) -> int:
    if isinstance(e, Var):
        return e.index
    if isinstance(e, Num):
        return 0
    if isinstance(e, (Neg, Call)):
        return max_index(e.arg)
    return max(max_index(e.left), max_index(e.right))


# ---------------------------------------------------------------------------
# tokenizer

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<absx>\|\s*x\s*\|)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
""", re.VERBOSE)


@dataclass(frozen=True)
class _Tok:
    kind: str  # num, absx, ident, op, end
    text: str
    offset: int  # byte offset


def tokenize(src: str) -> list[_Tok]:
    toks = []
    pos = 0
    byte = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            raise ParseError(byte, "a number, identifier, '|x|' or operator", src)
        text = m.group()
        if m.lastgroup != "ws":
            toks.append(_Tok(m.lastgroup, text, byte))
        byte += len(text.encode("utf-8"))
        pos = m.end()
    toks.append(_Tok("end", "", byte))
    return toks


# ---------------------------------------------------------------------------
# parser


class _Parser:
    def __init__(self, src: str, dim: int):
        self.src = src
        self.dim = dim
        self.toks = tokenize(src)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, expected: str, tok: _Tok | None = None):
        raise ParseError((tok or self.tok).offset, expected, self.src)

    def accept(self, *ops: str) -> str | None:
        t = self.tok
        if t.kind == "op" and t.text in ops:
            self.i += 1
            return t.text
        return None

    def expect(self, op: str):
        if self.accept(op) is None:
            self.error(f"'{op}'")

    def expr(self) -> Node:
        node = self.term()
        while (op := self.accept("+", "-")) is not None:
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while (op := self.accept("*", "/")) is not None:
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Node:
        base = self.unary()
        if self.accept("^"):
            return BinOp("^", base, self.factor())
        return base

    def unary(self) -> Node:
        if self.accept("-"):
            return Neg(self.primary())
        return self.primary()

    def primary(self) -> Node:
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return Num(float(t.text))
        if t.kind == "absx":
            self.i += 1
            return ABS_X
        if t.kind == "ident":
            self.i += 1
            if t.text == "eps":
                return EPS
            if t.text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(t.text, arg)
            m = re.fullmatch(r"x(\d+)", t.text)
            if m:
                k = int(m.group(1))
                if not 1 <= k <= self.dim:
                    self.error(f"a variable index in 1..{self.dim} (index out of range)", t)
                return x(k)
            self.error(f"a known identifier (eps, x1..x{self.dim}, {', '.join(FUNCTIONS)}); got {t.text!r}", t)
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        self.error("expression")


def parse(src: str, dim: int = 1) -> Node:
    """Parse ``src`` into an AST; raises :class:`ParseError`."""
    if dim < 1:
        raise ValueError("dim must be at least 1")
    p = _Parser(src, dim)
    node = p.expr()
    if p.tok.kind != "end":
        p.error("an operator or end of input")
    return node


def parse_vector(src: str, dim: int = 1) -> list[Node]:
    """Comma separated expressions, e.g. a point spec ``"eps^-2, 0.5"``."""
    p = _Parser(src, dim)
    items = [p.expr()]
    while p.accept(","):
        items.append(p.expr())
    if p.tok.kind != "end":
        p.error("',' or end of input")
    return items


def pretty_print(e: Node) -> str:
    """Canonical fully parenthesized text; ``parse(pretty_print(e)) == e``."""
    if isinstance(e, Num):
        return repr(e.value)
    if isinstance(e, Var):
        return {"eps": "eps", "abs_x": "|x|"}.get(e.name, f"x{e.index}")
    if isinstance(e, Neg):
        return f"(-{pretty_print(e.arg)})"
    if isinstance(e, Call):
        return f"{e.fn}({pretty_print(e.arg)})"
    return f"({pretty_print(e.left)} {e.op} {pretty_print(e.right)})"


# ---------------------------------------------------------------------------
# evaluation


class _DomainViolation(Exception):
    def __init__(self, message: str, mask: np.ndarray):
        self.mask = mask
        super().__init__(message)


def _value(a: Slog) -> np.ndarray:
    return from_slog(*a)


def _slog_of_log(l: np.ndarray) -> Slog:
    """Signed log of the real number ``l`` (itself possibly infinite)."""
    with np.errstate(divide="ignore"):
        return np.sign(l), np.log(np.abs(l))


def _const_value(e: Node) -> float | None:
    """Plain float value of a variable-free literal such as ``3`` or ``-2``."""
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Neg) and isinstance(e.arg, Num):
        return -e.arg.value
    return None


def _power(a: Slog, b: Slog, exact: float | None = None) -> Slog:
    sa, la = a
    bv = _value(b) if exact is None else np.full(np.shape(la), exact)
    with np.errstate(invalid="ignore"):
        l = np.where(la == 0.0, 0.0, bv * la)  # 1**b = 1 even for infinite b
    l = np.where(bv == 0.0, 0.0, l)  # a**0 = 1, including 0**0
    neg = sa < 0
    if np.any(neg):
        integral = np.isfinite(bv) & (np.floor(bv) == bv)
        bad = neg & ~integral
        if np.any(bad):
            raise _DomainViolation("negative base raised to a non-integer power", bad)
    odd = neg & (np.fmod(np.where(np.isfinite(bv), bv, 0.0), 2.0) != 0.0)
    zero_base = sa == 0.0
    if np.any(zero_base & (bv < 0)):
        raise _DomainViolation("zero raised to a negative power", zero_base & (bv < 0))
    s = np.where(odd, -1.0, 1.0)
    s = np.where(zero_base & (bv > 0), 0.0, s)
    s = np.where(np.isneginf(l), 0.0, s)
    return s, np.where(s == 0.0, -np.inf, l)


class _Evaluator:
    """Evaluate a node for a batch of ``(eps_i, x_i)`` pairs."""

    def __init__(self, eps: np.ndarray, X: np.ndarray | None):
        self.eps = eps
        self.ln_eps = np.log(eps)
        self.X = X
        self.n = eps.shape[0]

    def __call__(self, e: Node) -> Slog:
        n = self.n
        if isinstance(e, Num):
            s, l = to_slog(e.value)
            return np.full(n, float(s)), np.full(n, float(l))
        if isinstance(e, Var):
            if e.name == "eps":
                return np.ones(n), self.ln_eps.copy()
            if e.name == "abs_x":
                return to_slog(row_norms(self.X))
            return to_slog(self.X[:, e.index - 1])
        if isinstance(e, Neg):
            s, l = self(e.arg)
            return -s, l
        if isinstance(e, Call):
            return self.call(e.fn, self(e.arg))
        a, b = self(e.left), self(e.right)
        if e.op == "+":
            return slog_add(a, b)
        if e.op == "-":
            return slog_sub(a, b)
        if e.op == "*":
            return slog_mul(a, b)
        if e.op == "/":
            if np.any(b[0] == 0.0):
                raise _DomainViolation("division by zero", b[0] == 0.0)
            s = a[0] * b[0]
            with np.errstate(invalid="ignore"):
                l = a[1] - b[1]
            return s, np.where(s == 0.0, -np.inf, l)
        return _power(a, b, _const_value(e.right))

    def call(self, fn: str, a: Slog) -> Slog:
        s, l = a
        if fn == "abs":
            return np.abs(s), l
        if fn == "exp":
            v = _value(a)
            return np.where(np.isneginf(v), 0.0, 1.0), v
        if fn == "sigma":
            if np.any(s < 0):
                raise _DomainViolation("sigma of a negative number", s < 0)
            return to_slog(_kernels.sigma(_value(a)))
        if np.any(s < 0):
            raise _DomainViolation(f"{fn} of a negative number", s < 0)
        ln_val = np.where(s == 0.0, -np.inf, l)
        ls, ll = _slog_of_log(ln_val)
        if fn == "ln":
            return ls, ll
        # log_eps(a) = ln(a) / ln(eps), ln(eps) < 0
        return -ls, np.where(ls == 0.0, -np.inf, ll - np.log(-self.ln_eps))


def evaluate(e: Node, eps, X=None) -> Slog:
    """Signed log of ``e`` at paired ``eps`` (shape ``(n,)``) and ``X`` (shape ``(n, d)``).

    Raises :class:`NetEvaluationError` (carrying eps and x) on a domain
    violation or a NaN / ``+inf`` result.
    """
    eps = np.atleast_1d(np.asarray(eps, dtype=np.float64))
    if X is not None:
        X = np.asarray(X, dtype=np.float64)
        eps = np.broadcast_to(eps, (X.shape[0],))
    ev = _Evaluator(eps, X)
    try:
        with np.errstate(all="ignore"):
            s, l = ev(e)
    except _DomainViolation as exc:
        i = int(np.flatnonzero(np.broadcast_to(exc.mask, eps.shape))[0])
        raise NetEvaluationError(str(exc), float(eps[i]), None if X is None else X[i]) from None
    s = np.broadcast_to(s, eps.shape).astype(np.float64)
    l = np.broadcast_to(l, eps.shape).astype(np.float64)
    bad = np.isnan(l) | np.isposinf(l) | np.isnan(s)
    if np.any(bad):
        i = int(np.flatnonzero(bad)[0])
        raise NetEvaluationError("expression is NaN or infinite", float(eps[i]), None if X is None else X[i])
    return s, l


def compile_expr(e: Node, dim: int = 1, box: Box | None = None, label: str | None = None,
                 as_function: bool = False):
    """A :class:`FunctionNet` on ``box`` (default ``R^dim``), or a :class:`ScalarNet`
    when no x-variable occurs and ``as_function`` is False.  Gradients are numeric."""
    if max_index(e) > dim:
        raise ValueError(f"expression uses x{max_index(e)} but dim = {dim}")
    label = label or pretty_print(e)
    if not uses_x(e) and not as_function:
        return ScalarNet(lambda eps: evaluate(e, eps), label)
    box = box or Box.whole(dim)
    if box.dim != dim:
        raise ValueError("box dimension does not match dim")
    return FunctionNet(lambda eps, X: evaluate(e, eps, X), box, label)


def compile_source(src: str, dim: int = 1, box: Box | None = None, as_function: bool = False):
    return compile_expr(parse(src, dim), dim, box, src.strip(), as_function)


compile = compile_expr  # noqa: A001 - mirrors parse / pretty_print naming
