"""Exact coefficients in Q(r, v) and the session configuration.

A scalar is a reduced fraction of two Laurent polynomials in the commuting
variables ``r`` (a real number in (0, 1)) and ``v`` (a unit complex number,
so ``conj(v) = 1/v``).  The deformation parameter is recovered as
``q = sigma * r * v`` with ``zeta = v**2 = q / conj(q)``.

Canonical form: the denominator is a genuine polynomial not divisible by
``r`` or ``v``, coprime to the numerator and monic with respect to the
lexicographic order on ``(rexp, vexp)``.  Equality is then plain equality of
the two coefficient maps.
"""

from __future__ import annotations

import cmath
import contextvars
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterator, Optional, Tuple

import mpmath

Key = Tuple[int, int]
Poly = Dict[Key, object]  # coefficient values are int or Fraction


def _c(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def _padd(a: Poly, b: Poly, sign: int = 1) -> Poly:
    out = dict(a)
    for k, c in b.items():
        s = out.get(k, 0) + sign * c
        if s:
            out[k] = _c(s)
        else:
            out.pop(k, None)
    return out


def _pmul(a: Poly, b: Poly) -> Poly:
    if len(a) == 1 and len(b) == 1:
        (ka, ca), = a.items()
        (kb, cb), = b.items()
        return {(ka[0] + kb[0], ka[1] + kb[1]): _c(ca * cb)}
    out: Poly = {}
    for (i, j), c in a.items():
        for (k, l), d in b.items():
            key = (i + k, j + l)
            s = out.get(key, 0) + c * d
            if s:
                out[key] = _c(s)
            else:
                del out[key]
    return out


def _pscale(a: Poly, c) -> Poly:
    return {k: _c(x * c) for k, x in a.items()}


def _pshift(a: Poly, di: int, dj: int) -> Poly:
    if di == 0 and dj == 0:
        return a
    return {(i + di, j + dj): c for (i, j), c in a.items()}


def _min_exps(a: Poly) -> Key:
    return min(i for i, _ in a), min(j for _, j in a)


_ONE_POLY: Poly = {(0, 0): 1}


@lru_cache(maxsize=None)
def _sympy_ring():
    from sympy import QQ
    from sympy.polys.rings import ring

    R, _, _ = ring("r,v", QQ)
    return R, QQ


def _to_sympy(p: Poly):
    R, QQ = _sympy_ring()
    return R.from_dict({k: QQ(Fraction(c).numerator, Fraction(c).denominator) for k, c in p.items()})


def _from_sympy(p) -> Poly:
    return {
        tuple(k): _c(Fraction(int(c.numerator), int(c.denominator)))
        for k, c in p.terms()
    }


def _reduce(num: Poly, den: Poly) -> Tuple[Poly, Poly]:
    """Cancel the polynomial gcd of num and den (den has no monomial factor)."""
    i0, j0 = _min_exps(num)
    n = _pshift(num, -i0, -j0)
    g, n2, d2 = _to_sympy(n).cofactors(_to_sympy(den))
    if g.is_ground:
        return num, den
    return _pshift(_from_sympy(n2), i0, j0), _from_sympy(d2)


def _canonical(num: Poly, den: Poly, reduce: bool) -> Tuple[Poly, Poly]:
    if not num:
        return {}, _ONE_POLY
    a, b = _min_exps(den)
    if a or b:
        den = _pshift(den, -a, -b)
        num = _pshift(num, -a, -b)
    if len(den) == 1:
        (c,) = den.values()
        return (_pscale(num, Fraction(1) / c) if c != 1 else num), _ONE_POLY
    if reduce:
        num, den = _reduce(num, den)
        if len(den) == 1:
            (c,) = den.values()
            return _pscale(num, Fraction(1) / c), _ONE_POLY
    lead = den[max(den)]
    if lead != 1:
        inv = Fraction(1) / lead
        num, den = _pscale(num, inv), _pscale(den, inv)
    return num, den


class Scalar:
    """Element of Q(r, v).  Immutable and hashable."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, value=0):
        if isinstance(value, Scalar):
            self.num, self.den = value.num, value.den
        else:
            value = _c(Fraction(value)) if not isinstance(value, int) else value
            self.num = {(0, 0): value} if value else {}
            self.den = _ONE_POLY
        self._hash = None

    @classmethod
    def _raw(cls, num: Poly, den: Poly) -> "Scalar":
        s = object.__new__(cls)
        s.num, s.den, s._hash = num, den, None
        return s

    @classmethod
    def from_parts(cls, num: Poly, den: Poly = None, reduce: bool = True) -> "Scalar":
        num = {k: _c(Fraction(c)) for k, c in num.items() if c}
        den = _ONE_POLY if den is None else {k: _c(Fraction(c)) for k, c in den.items() if c}
        if not den:
            raise ZeroDivisionError("zero denominator")
        n, d = _canonical(num, den, reduce)
        return cls._raw(n, d)

    @classmethod
    def monomial(cls, coef=1, rexp: int = 0, vexp: int = 0) -> "Scalar":
        coef = _c(Fraction(coef))
        return cls._raw({(rexp, vexp): coef} if coef else {}, _ONE_POLY)

    # -- predicates -----------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.num)

    def is_laurent(self) -> bool:
        return self.den is _ONE_POLY or self.den == _ONE_POLY

    def is_rational(self) -> bool:
        return self.is_laurent() and all(k == (0, 0) for k in self.num)

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not a rational number")
        return Fraction(self.num.get((0, 0), 0))

    # -- arithmetic -----------------------------------------------------
    @staticmethod
    def _coerce(other) -> Optional["Scalar"]:
        if isinstance(other, Scalar):
            return other
        if isinstance(other, (int, Fraction)):
            return Scalar(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.num:
            return self
        if not self.num:
            return o
        if self.den == o.den:
            num = _padd(self.num, o.num)
            if self.den is _ONE_POLY or self.den == _ONE_POLY:
                return Scalar._raw(num, _ONE_POLY)
            return Scalar._raw(*_canonical(num, self.den, True))
        num = _padd(_pmul(self.num, o.den), _pmul(o.num, self.den))
        return Scalar._raw(*_canonical(num, _pmul(self.den, o.den), True))

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw({k: -c for k, c in self.num.items()}, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self.num or not o.num:
            return ZERO
        num = _pmul(self.num, o.num)
        if self.is_laurent() and o.is_laurent():
            return Scalar._raw(num, _ONE_POLY)
        return Scalar._raw(*_canonical(num, _pmul(self.den, o.den), True))

    __rmul__ = __mul__

    def inv(self) -> "Scalar":
        if not self.num:
            raise ZeroDivisionError("inverse of zero scalar")
        return Scalar._raw(*_canonical(dict(self.den), dict(self.num), False))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inv()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inv() ** (-e)
        if len(self.num) == 1 and self.is_laurent():
            ((i, j), c), = self.num.items()
            return Scalar._raw({(i * e, j * e): _c(Fraction(c) ** e)}, _ONE_POLY)
        out, base = ONE, self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def conj(self) -> "Scalar":
        num = {(i, -j): c for (i, j), c in self.num.items()}
        den = {(i, -j): c for (i, j), c in self.den.items()}
        return Scalar._raw(*_canonical(num, den, False))

    # -- comparison -----------------------------------------------------
    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((frozenset(self.num.items()), frozenset(self.den.items())))
        return self._hash

    # -- evaluation -----------------------------------------------------
    def evaluate(self, r, v):
        """Substitute numbers for r and v (complex, or mpmath at the precision of r)."""
        mp = getattr(r, "context", None)
        if mp is not None:
            conv = lambda c: mp.mpf(Fraction(c).numerator) / Fraction(c).denominator
        else:
            conv = complex
        den = sum(conv(c) * r**i * v**j for (i, j), c in self.den.items())
        if den == 0:
            raise ZeroDivisionError("pole of the scalar at the evaluation point")
        return sum(conv(c) * r**i * v**j for (i, j), c in self.num.items()) / den

    def subs(self, r=None, v=None) -> "Scalar":
        """Exact partial substitution of rational values for r and/or v."""

        def sub(p: Poly) -> Poly:
            out: Poly = {}
            for (i, j), c in p.items():
                c = Fraction(c)
                if r is not None:
                    c, i = c * Fraction(r) ** i, 0
                if v is not None:
                    c, j = c * Fraction(v) ** j, 0
                out = _padd(out, {(i, j): _c(c)})
            return out

        den = sub(self.den)
        if not den:
            raise ZeroDivisionError("substitution hits a pole")
        return Scalar.from_parts(sub(self.num), den)

    # -- text / json ----------------------------------------------------
    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return f"Scalar({format_scalar(self)!r})"

    def to_json(self) -> dict:
        def enc(p):
            return [[str(c), i, j] for (i, j), c in sorted(p.items())]

        return {"num": enc(self.num), "den": enc(self.den)}

    @classmethod
    def from_json(cls, obj) -> "Scalar":
        def dec(rows):
            return {(int(i), int(j)): Fraction(c) for c, i, j in rows}

        return cls.from_parts(dec(obj["num"]), dec(obj["den"]) if obj.get("den") else None)


ZERO = Scalar(0)
ONE = Scalar(1)
R = Scalar.monomial(1, 1, 0)
V = Scalar.monomial(1, 0, 1)


def _fmt_rat(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _fmt_mono(i: int, j: int) -> str:
    parts = []
    for name, e in (("r", i), ("v", j)):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return " ".join(parts)


def format_poly(p: Poly) -> str:
    """Render a Laurent polynomial, lowest r-degree first."""
    if not p:
        return "0"
    out = []
    for idx, ((i, j), c) in enumerate(sorted(p.items())):
        c = Fraction(c)
        sign = "-" if c < 0 else "+"
        c = abs(c)
        mono = _fmt_mono(i, j)
        if not mono:
            body = _fmt_rat(c)
        elif c == 1:
            body = mono
        else:
            body = f"{_fmt_rat(c)} {mono}"
        if idx == 0:
            out.append(("-" if sign == "-" else "") + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


def format_scalar(x: Scalar) -> str:
    num = format_poly(x.num)
    if x.is_laurent():
        return num
    if len(x.num) > 1:
        num = f"({num})"
    return f"{num}/({format_poly(x.den)})"


# ---------------------------------------------------------------------------
# session configuration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Context:
    """Session configuration: exact Q(r, v) coefficients or complex floats.

    In numeric mode ``q0`` is the concrete deformation parameter and all
    coefficients are Python complex numbers, or mpmath complex numbers with
    ``dps`` decimal digits when ``dps`` is set.
    """

    mode: str = "exact"
    sigma: int = 1
    q0: Optional[complex] = None
    dps: Optional[int] = None
    _consts: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if self.mode not in ("exact", "numeric"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.sigma not in (1, -1):
            raise ValueError("sigma must be +1 or -1")
        if self.mode == "numeric":
            if self.q0 is None:
                raise ValueError("numeric mode needs q")
            q = complex(self.q0)
            if not 0 < abs(q) < 1:
                raise ValueError("need 0 < |q| < 1")
            if q.real != 0 and (q.real > 0) != (self.sigma > 0):
                raise ValueError("sigma inconsistent with sgn(Re q)")
            if self.dps is None:
                lib, q = cmath, q
            else:
                # private context: precision does not leak into global mpmath state
                lib = mpmath.MPContext()
                lib.dps = int(self.dps)
                q = lib.mpc(q.real, q.imag)
            r = abs(q)
            v = self.sigma * q / r
            consts = dict(r=r, v=v, zeta=v * v, q=q, qb=q.conjugate(), one=q * 0 + 1,
                          zero=q * 0, math=lib)
        else:
            if self.q0 is not None or self.dps is not None:
                raise ValueError("q and dps are only meaningful in numeric mode")
            s = self.sigma
            consts = dict(
                r=R, v=V, zeta=V * V, q=Scalar.monomial(s, 1, 1),
                qb=Scalar.monomial(s, 1, -1), one=ONE, zero=ZERO,
            )
        object.__setattr__(self, "_consts", consts)

    @classmethod
    def numeric(cls, q0: complex, sigma: Optional[int] = None, dps: Optional[int] = None) -> "Context":
        q0 = complex(q0)
        if sigma is None:
            if q0.real == 0:
                raise ValueError("Re q = 0: sigma must be declared")
            sigma = 1 if q0.real > 0 else -1
        return cls("numeric", sigma, q0, dps)

    @property
    def exact(self) -> bool:
        return self.mode == "exact"

    def __getattr__(self, name):
        consts = object.__getattribute__(self, "_consts")
        if consts is not None and name in consts:
            return consts[name]
        raise AttributeError(name)

    def coerce(self, c):
        if self.exact:
            if isinstance(c, Scalar):
                return c
            if isinstance(c, (int, Fraction)):
                return Scalar(c)
            raise TypeError(f"cannot use {c!r} as an exact coefficient")
        if isinstance(c, Scalar):
            return c.evaluate(self.r, self.v)
        if self.dps is None:
            return complex(c)
        if isinstance(c, Fraction):
            return self.math.mpc(self.math.mpf(c.numerator) / c.denominator)
        return self.math.mpc(c)

    def rpow(self, e: int):
        return Scalar.monomial(1, e, 0) if self.exact else self.r ** e

    def vpow(self, e: int):
        return Scalar.monomial(1, 0, e) if self.exact else self.v ** e

    def zpow(self, e: int):
        return Scalar.monomial(1, 0, 2 * e) if self.exact else self.v ** (2 * e)

    def qpow(self, e: int):
        if self.exact:
            return Scalar.monomial(self.sigma ** (e % 2), e, e)
        return self.q ** e

    def qbpow(self, e: int):
        if self.exact:
            return Scalar.monomial(self.sigma ** (e % 2), e, -e)
        return self.qb ** e

    def conj(self, c):
        return c.conj() if self.exact else c.conjugate()

    def is_zero(self, c) -> bool:
        return not c if self.exact else c == 0


_current: contextvars.ContextVar[Context] = contextvars.ContextVar("suq2_context", default=Context())


def current() -> Context:
    return _current.get()


@contextmanager
def using(ctx: Context) -> Iterator[Context]:
    """Run a block with ``ctx`` as the active session configuration."""
    token = _current.set(ctx)
    try:
        yield ctx
    finally:
        _current.reset(token)


def numeric_eval(x: Scalar, q0: complex, sigma: Optional[int] = None) -> complex:
    """Evaluate at r = |q0| and v = sigma * q0 / |q0| (the principal root of zeta)."""
    q0 = complex(q0)
    r = abs(q0)
    if not 0 < r < 1:
        raise ValueError("need 0 < |q0| < 1")
    if sigma is None:
        if q0.real == 0:
            raise ValueError("Re q0 = 0: sigma must be declared")
        sigma = 1 if q0.real > 0 else -1
    return x.evaluate(r, sigma * q0 / r)


def principal_sqrt_zeta(q0: complex) -> complex:
    z = q0 / q0.conjugate()
    return cmath.exp(0.5j * cmath.phase(z))


def is_number(x) -> bool:
    """A numeric-mode coefficient: Python complex or an mpmath complex."""
    return isinstance(x, complex) or type(x).__name__ == "mpc"


def isclose(a: complex, b: complex, rel: float = 1e-12, abs_tol: float = 1e-12) -> bool:
    return abs(a - b) <= max(rel * max(abs(a), abs(b)), abs_tol)


__all__ = [
    "Scalar", "Context", "ZERO", "ONE", "R", "V", "current", "using",
    "numeric_eval", "format_scalar", "isclose", "is_number", "principal_sqrt_zeta",
]
