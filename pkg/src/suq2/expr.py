"""Text syntax for scalars, algebra elements and tensors.

Grammar (whitespace-insensitive, juxtaposition means multiplication)::

    sum     := ['+'|'-'] tensor (('+'|'-') tensor)*
    tensor  := product ('(x)' product)*
    product := power (['*'|'/'] power)*
    power   := atom ['^' ['-'] INT]
    atom    := NAME | NUMBER | '(' sum ')'

Names: a a* g g* z z* (also the Unicode aliases), 1, r v q qb zeta, and
``i`` in numeric mode.  ``q`` and ``qb`` use the session sign sigma.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple, Union

from . import polsuq2 as P
from .boson import BElement, BMonomial, BTensor, TorusPoly, b_mul, kappa
from .braided import BraidedElement, btp_mul, tensor as leg_tensor
from .polsuq2 import Element, Monomial
from .scalar import Scalar, current, format_poly, format_scalar, is_number


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: Union[Fraction, float]


@dataclass(frozen=True)
class Sym:
    name: str


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exp: int


@dataclass(frozen=True)
class Tensor:
    legs: Tuple["Expr", ...]


Expr = Union[Num, Sym, BinOp, Neg, Pow, Tensor]

_ALIASES = {
    "α*": "a*", "α": "a", "γ*": "g*", "γ": "g", "ζ": "zeta",
    "q̄": "qb", "α^*": "a*", "γ^*": "g*",
}
_NAMES = {"a", "a*", "g", "g*", "z", "z*", "r", "v", "q", "qb", "zeta", "i", "t"}

_TOKEN = re.compile(
    r"\s*(?:(?P<tensor>\(x\)|⊗)|(?P<num>\d+\.\d*(?:[eE][-+]?\d+)?|\d+)"
    r"|(?P<name>zeta|qb|q̄|[αγ]\^?\*?|[agz]\*?|[rvqit]|ζ)|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            pos += len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        val = m.group(kind)
        start = m.start(kind)
        if kind == "name":
            val = _ALIASES.get(val, val)
        out.append((kind, val, start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, val: str):
        kind, v, pos = self.take()
        if v != val:
            raise ParseError(f"expected {val!r}, found {v or 'end of input'!r}", pos)

    def parse(self) -> Expr:
        e = self.sum()
        kind, v, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {v!r}", pos)
        return e

    def sum(self) -> Expr:
        kind, v, _ = self.peek()
        neg = False
        if kind == "op" and v in "+-":
            self.take()
            neg = v == "-"
        e = self.tensor()
        if neg:
            e = Neg(e)
        while True:
            kind, v, _ = self.peek()
            if kind == "op" and v in "+-":
                self.take()
                rhs = self.tensor()
                e = BinOp("+", e, rhs) if v == "+" else BinOp("-", e, rhs)
            else:
                return e

    def tensor(self) -> Expr:
        legs = [self.product()]
        while self.peek()[0] == "tensor":
            self.take()
            legs.append(self.product())
        return legs[0] if len(legs) == 1 else Tensor(tuple(legs))

    def _starts_atom(self) -> bool:
        kind, v, _ = self.peek()
        return kind in ("num", "name") or (kind == "op" and v == "(")

    def product(self) -> Expr:
        e = self.power()
        while True:
            kind, v, _ = self.peek()
            if kind == "op" and v in "*/":
                self.take()
                e = BinOp(v, e, self.power())
            elif self._starts_atom():
                e = BinOp("*", e, self.power())
            else:
                return e

    def power(self) -> Expr:
        base = self.atom()
        kind, v, _ = self.peek()
        if kind == "op" and v == "^":
            self.take()
            sign = 1
            kind, v, pos = self.peek()
            if kind == "op" and v in "+-":
                self.take()
                sign = -1 if v == "-" else 1
            kind, v, pos = self.take()
            if kind == "op" and v == "(":
                kind2, v2, pos2 = self.peek()
                if kind2 == "op" and v2 in "+-":
                    self.take()
                    sign *= -1 if v2 == "-" else 1
                kind, v, pos = self.take()
                if kind != "num" or "." in v:
                    raise ParseError("exponent must be an integer", pos)
                self.expect(")")
            elif kind != "num" or "." in v:
                raise ParseError("exponent must be an integer", pos)
            return Pow(base, sign * int(v))
        return base

    def atom(self) -> Expr:
        kind, v, pos = self.take()
        if kind == "num":
            return Num(float(v) if "." in v or "e" in v.lower() else Fraction(int(v)))
        if kind == "name":
            return Sym(v)
        if kind == "op" and v == "(":
            e = self.sum()
            self.expect(")")
            return e
        raise ParseError(f"unexpected {v or 'end of input'!r}", pos)


def parse(text: str) -> Expr:
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


def _uses(expr: Expr, names) -> bool:
    if isinstance(expr, Sym):
        return expr.name in names
    if isinstance(expr, BinOp):
        return _uses(expr.left, names) or _uses(expr.right, names)
    if isinstance(expr, (Neg,)):
        return _uses(expr.arg, names)
    if isinstance(expr, Pow):
        return _uses(expr.base, names)
    if isinstance(expr, Tensor):
        return any(_uses(l, names) for l in expr.legs)
    return False


def _is_coef(x) -> bool:
    return isinstance(x, Scalar) or is_number(x)


class _Eval:
    def __init__(self, boson: bool):
        self.ctx = current()
        self.boson = boson

    def coef(self, c):
        return self.ctx.coerce(c)

    def lift(self, x):
        """Coefficient -> algebra element of the active flavour."""
        if _is_coef(x):
            return BElement.scalar(x) if self.boson else Element.scalar(x)
        return x

    def ev(self, e: Expr):
        ctx = self.ctx
        if isinstance(e, Num):
            if isinstance(e.value, float):
                return complex(e.value) if not ctx.exact else Scalar(Fraction(str(e.value)))
            return self.coef(e.value)
        if isinstance(e, Sym):
            return self.sym(e.name)
        if isinstance(e, Neg):
            x = self.ev(e.arg)
            return -x
        if isinstance(e, Pow):
            return self.pow(self.ev(e.base), e.exp, e)
        if isinstance(e, Tensor):
            return self.tensor([self.ev(l) for l in e.legs])
        x, y = self.ev(e.left), self.ev(e.right)
        if e.op == "+":
            return self.add(x, y)
        if e.op == "-":
            return self.add(x, -y)
        if e.op == "/":
            if not _is_coef(y):
                raise ValueError("can only divide by a scalar")
            if ctx.is_zero(y):
                raise ZeroDivisionError("division by zero")
            inv = ctx.one / y
            return x * inv if _is_coef(x) else x.scale(inv)
        return self.mul(x, y)

    def sym(self, name: str):
        ctx = self.ctx
        consts = {"r": ctx.r, "v": ctx.v, "q": ctx.q, "qb": ctx.qb, "zeta": ctx.zeta}
        if name in consts:
            return consts[name]
        if name == "i":
            if ctx.exact:
                raise ValueError("'i' is only available in numeric mode")
            return 1j
        if name in ("z", "z*"):
            if not self.boson:
                raise ValueError("z is only allowed in a boson context")
            return BElement.mono(0, 0, 0, 1 if name == "z" else -1)
        if name == "t":
            raise ValueError("t (circle coordinate) cannot be used in expressions")
        mono = {"a": P.A, "a*": P.AS, "g": P.G, "g*": P.GS}[name]
        if self.boson:
            return BElement.mono(*mono, 0)
        return Element.mono(*mono)

    def add(self, x, y):
        if _is_coef(x) and _is_coef(y):
            return x + y
        if isinstance(x, (BraidedElement, BTensor)) or isinstance(y, (BraidedElement, BTensor)):
            if type(x) is not type(y):
                raise ValueError("cannot add a tensor and a non-tensor (or tensors of different kinds)")
            return x + y
        return self.lift(x) + self.lift(y)

    def mul(self, x, y):
        if _is_coef(x) and _is_coef(y):
            return x * y
        if _is_coef(x):
            return y.scale(x)
        if _is_coef(y):
            return x.scale(y)
        if type(x) is not type(y):
            raise ValueError(f"cannot multiply {type(x).__name__} by {type(y).__name__}")
        return x * y

    def pow(self, x, n: int, e):
        if _is_coef(x):
            if n < 0 and self.ctx.is_zero(x):
                raise ZeroDivisionError("negative power of zero")
            return x ** n
        if isinstance(x, BElement):
            return x ** n
        if n < 0:
            raise ValueError("negative powers are only allowed for scalars and z")
        out = self.one_like(x)
        for _ in range(n):
            out = self.mul(out, x)
        return out

    def one_like(self, x):
        if isinstance(x, BraidedElement):
            return BraidedElement.identity(x.order)
        if isinstance(x, BTensor):
            return BTensor.scalar(1)
        return self.lift(self.ctx.one)

    def tensor(self, legs):
        if self.boson:
            if len(legs) != 2:
                raise ValueError("boson tensors have exactly two legs")
            a, b = (self.lift(l) for l in legs)
            if not (isinstance(a, BElement) and isinstance(b, BElement)):
                raise ValueError("tensor legs must be elements")
            return BTensor.pure(a, b)
        flat = []
        for l in legs:
            l = self.lift(l)
            if isinstance(l, BraidedElement):
                flat.append(l)
            else:
                flat.append(leg_tensor(l))
        out = flat[0]
        for nxt in flat[1:]:
            out = _concat(out, nxt)
        return out


def _concat(x: BraidedElement, y: BraidedElement) -> BraidedElement:
    ctx = current()
    acc: dict = {}
    for kx, cx in x.terms.items():
        for ky, cy in y.terms.items():
            P._add_into(acc, kx + ky, cx * cy, ctx)
    return BraidedElement(x.order + y.order, acc)


def evaluate(expr: Expr, boson: bool = None):
    """Evaluate in the active context.  ``boson`` defaults to "uses z"."""
    if boson is None:
        boson = _uses(expr, {"z", "z*"})
    return _Eval(boson).ev(expr)


def parse_value(text: str, boson: bool = None):
    return evaluate(parse(text), boson)


def as_element(x):
    """Promote a coefficient to the unit multiple, for commands expecting elements."""
    if _is_coef(x):
        return Element.scalar(x)
    return x


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------


def _q_form(c: Fraction, i: int, j: int, sigma: int):
    """Write c r^i v^j via q or qb when that leaves no stray power of r."""
    if j == 0:
        return None
    if i == 0 and j % 2 == 0:
        return c, "zeta", j // 2
    if i == j:
        # r^j v^j = sigma^j q^j
        return c * sigma ** (j % 2), "q", j
    if i == -j:
        # r^-j v^j = sigma^j qb^-j
        return c * sigma ** (j % 2), "qb", -j
    return None


def _fmt_pow(name: str, e: int) -> str:
    return name if e == 1 else f"{name}^{e}"


def render_coef(c, sigma: int = None) -> Tuple[str, bool]:
    """Return (text, negative) with the sign pulled out when it is a single term."""
    if is_number(c):
        c = complex(c)
        if c.imag == 0:
            return (repr(abs(c.real)), c.real < 0)
        if c.real == 0:
            return (f"{repr(abs(c.imag))} i", c.imag < 0)
        return (f"({c.real!r} + {c.imag!r} i)" if c.imag >= 0 else f"({c.real!r} - {-c.imag!r} i)", False)
    sigma = current().sigma if sigma is None else sigma
    if c.is_laurent() and len(c.num) == 1:
        ((i, j), k), = c.num.items()
        k = Fraction(k)
        neg = k < 0
        qf = _q_form(abs(k), i, j, sigma)
        if qf is not None:
            k2, name, e = qf
            neg = (k2 < 0) if not neg else (k2 > 0)
            mono = _fmt_pow(name, e)
            mag = abs(k2)
        else:
            mono = " ".join(p for p in (_fmt_pow("r", i) if i else "", _fmt_pow("v", j) if j else "") if p)
            mag = abs(k)
        if not mono:
            return (_fmt_rat(mag), neg)
        if mag == 1:
            return (mono, neg)
        return (f"{_fmt_rat(mag)} {mono}", neg)
    text = format_scalar(c)
    return (f"({text})", False)


def _fmt_rat(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def render_scalar(c) -> str:
    text, neg = render_coef(c)
    if text.startswith("(") and text.endswith(")") and isinstance(c, Scalar):
        text = format_scalar(c)
    return ("-" if neg else "") + text


def render_monomial(m: Monomial) -> str:
    parts = []
    if m.n > 0:
        parts.append(_fmt_pow("a", m.n))
    elif m.n < 0:
        parts.append(_fmt_pow("a*", -m.n))
    if m.m:
        parts.append(_fmt_pow("g", m.m))
    if m.k:
        parts.append(_fmt_pow("g*", m.k))
    return " ".join(parts)


def render_bmonomial(b: BMonomial) -> str:
    s = render_monomial(b.a_part)
    if b.l:
        zs = _fmt_pow("z", b.l) if b.l > 0 else f"z^{b.l}"
        s = f"{s} {zs}".strip()
    return s


def _join(items) -> str:
    """items: list of (coef, body-text); body '' means the unit."""
    if not items:
        return "0"
    out = []
    for idx, (c, body) in enumerate(items):
        ctext, neg = render_coef(c)
        is_one = ctext == "1"
        if body:
            term = body if is_one else f"{ctext} {body}"
        else:
            term = ctext
        if idx == 0:
            out.append(("-" if neg else "") + term)
        else:
            out.append((" - " if neg else " + ") + term)
    return "".join(out)


def _leg_text(x) -> str:
    if isinstance(x, int):
        return _fmt_pow("t", x) if x > 0 else ("1" if x == 0 else f"t^{x}")
    return render_monomial(x) or "1"


def _mono_sort_key(m):
    return (abs(m.n) + m.m + m.k, m.n < 0, -abs(m.n), m.m, m.k)


def render(x) -> str:
    if isinstance(x, Element):
        items = sorted(x.terms.items(), key=lambda kv: _mono_sort_key(kv[0]))
        return _join([(c, render_monomial(m)) for m, c in items])
    if isinstance(x, BElement):
        items = sorted(x.terms.items(), key=lambda kv: (_mono_sort_key(kv[0].a_part), kv[0].l))
        return _join([(c, render_bmonomial(b)) for b, c in items])
    if isinstance(x, BraidedElement):
        def key(kv):
            return tuple(_mono_sort_key(l) if not isinstance(l, int) else (l,) for l in kv[0])

        items = sorted(x.terms.items(), key=key)
        return _join([(c, "(" + " (x) ".join(_leg_text(l) for l in k) + ")") for k, c in items])
    if isinstance(x, BTensor):
        items = sorted(x.terms.items(), key=lambda kv: (
            _mono_sort_key(kv[0][0].a_part), kv[0][0].l, _mono_sort_key(kv[0][1].a_part), kv[0][1].l))
        return _join([
            (c, f"({render_bmonomial(a) or '1'} (x) {render_bmonomial(b) or '1'})") for (a, b), c in items
        ])
    if isinstance(x, TorusPoly):
        items = sorted(x.terms.items())
        return _join([(c, _leg_text(l) if l else "") for l, c in items])
    if isinstance(x, Scalar) or is_number(x):
        return render_scalar(x)
    if isinstance(x, (int, Fraction)):
        return str(x)
    raise TypeError(f"cannot render {type(x).__name__}")


__all__ = [
    "parse", "evaluate", "parse_value", "render", "render_scalar", "ParseError",
    "Num", "Sym", "BinOp", "Neg", "Pow", "Tensor", "as_element", "format_poly",
]
