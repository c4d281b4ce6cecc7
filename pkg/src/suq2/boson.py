"""The bosonization Pol(B): Pol(SU_q(2)) with a unitary z adjoined.

Extra relations: ``z alpha = alpha z`` and ``z gamma = zeta^-1 gamma z``, so
``z^l a = zeta^(-l deg a) a z^l`` for homogeneous ``a``.  Basis monomials are
``(n, m, k, l)`` = alpha-part, gamma-part, gamma*-part, z^l.

The coproduct of B is an ordinary (untwisted) tensor square, represented by
:class:`BTensor`.  The twisted route B~ = A [x] C(T) is realised through
:func:`Psi_triple` and :func:`delta_Btilde`.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product as cartesian
from typing import Dict, Iterable, NamedTuple, Tuple

from . import polsuq2 as P
from .braided import BraidedElement, delta_mono, map_leg
from .polsuq2 import Element, Monomial, _add_into
from .scalar import Context, current


class BMonomial(NamedTuple):
    n: int = 0
    m: int = 0
    k: int = 0
    l: int = 0

    @property
    def a_part(self) -> Monomial:
        return Monomial(self.n, self.m, self.k)

    @property
    def deg(self) -> int:
        """Total T-degree (gamma counts 1, gamma* counts -1, z counts 1)."""
        return self.m - self.k + self.l


def _bm(mono: Monomial, l: int) -> BMonomial:
    return BMonomial(mono.n, mono.m, mono.k, l)


B_ONE = BMonomial()


class _Lin:
    """Shared linear-combination plumbing for BElement, BTensor and TorusPoly."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {} if terms is None else terms

    def __bool__(self):
        return bool(self.terms)

    def _with(self, key, c):
        ctx = current()
        c = ctx.coerce(c)
        if not ctx.is_zero(c):
            self.terms[key] = c
        return self

    def __eq__(self, other):
        if type(other) is type(self):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __add__(self, other):
        if not isinstance(other, type(self)):
            other = type(self).scalar(other)
        ctx = current()
        acc = dict(self.terms)
        for key, c in other.terms.items():
            _add_into(acc, key, c, ctx)
        return type(self)(acc)

    __radd__ = __add__

    def __neg__(self):
        return type(self)({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        ctx = current()
        c = ctx.coerce(c)
        if ctx.is_zero(c):
            return type(self)()
        return type(self)({k: c * x for k, x in self.terms.items()})

    def __rmul__(self, other):
        return self.scale(other)

    def __str__(self):
        from .expr import render

        return render(self)

    __repr__ = __str__


class BElement(_Lin):
    @classmethod
    def scalar(cls, c) -> "BElement":
        return cls()._with(B_ONE, c)

    @classmethod
    def mono(cls, n=0, m=0, k=0, l=0, coef=1) -> "BElement":
        return cls()._with(BMonomial(n, m, k, l), coef)

    def __mul__(self, other):
        if isinstance(other, BElement):
            return b_mul(self, other)
        return self.scale(other)

    def __pow__(self, e: int):
        if e < 0:
            return b_star(self) ** (-e)
        out = BElement.scalar(1)
        for _ in range(e):
            out = b_mul(out, self)
        return out

    def to_json(self) -> dict:
        return {"terms": [
            {"n": b.n, "m": b.m, "k": b.k, "l": b.l, "coef": P.coef_to_json(c)}
            for b, c in sorted(self.terms.items())
        ]}

    @classmethod
    def from_json(cls, obj) -> "BElement":
        ctx = current()
        acc: dict = {}
        for t in obj["terms"]:
            _add_into(acc, BMonomial(t["n"], t["m"], t["k"], t.get("l", 0)),
                      ctx.coerce(P.coef_from_json(t["coef"])), ctx)
        return cls(acc)


class BTensor(_Lin):
    """Plain tensor square of BElement: keys are (BMonomial, BMonomial)."""

    @classmethod
    def scalar(cls, c) -> "BTensor":
        return cls()._with((B_ONE, B_ONE), c)

    @classmethod
    def pure(cls, x: BElement, y: BElement) -> "BTensor":
        ctx = current()
        acc: dict = {}
        for bx, cx in x.terms.items():
            for by, cy in y.terms.items():
                _add_into(acc, (bx, by), cx * cy, ctx)
        return cls(acc)

    def __mul__(self, other):
        if isinstance(other, BTensor):
            ctx = current()
            acc: dict = {}
            for (a1, a2), c1 in self.terms.items():
                for (b1, b2), c2 in other.terms.items():
                    for m1, d1 in b_mono_mul(ctx, a1, b1):
                        for m2, d2 in b_mono_mul(ctx, a2, b2):
                            _add_into(acc, (m1, m2), c1 * c2 * d1 * d2, ctx)
            return BTensor(acc)
        return self.scale(other)

    def to_json(self) -> dict:
        return {"terms": [
            {"legs": [list(a), list(b)], "coef": P.coef_to_json(c)}
            for (a, b), c in sorted(self.terms.items())
        ]}


class TorusPoly(_Lin):
    """Laurent polynomial in the circle coordinate t: map l -> coefficient."""

    @classmethod
    def scalar(cls, c) -> "TorusPoly":
        return cls()._with(0, c)

    def __mul__(self, other):
        if isinstance(other, TorusPoly):
            ctx = current()
            acc: dict = {}
            for a, ca in self.terms.items():
                for b, cb in other.terms.items():
                    _add_into(acc, a + b, ca * cb, ctx)
            return TorusPoly(acc)
        return self.scale(other)

    def conj(self) -> "TorusPoly":
        ctx = current()
        return TorusPoly({-l: ctx.conj(c) for l, c in self.terms.items()})

    def constant_term(self):
        return self.terms.get(0, current().zero)

    def to_json(self) -> dict:
        return {"terms": [{"l": l, "coef": P.coef_to_json(c)} for l, c in sorted(self.terms.items())]}


class TorusTensor(_Lin):
    """B (x) C(T) or C(T) (x) B: keys (BMonomial, int) or (int, BMonomial)."""

    @classmethod
    def scalar(cls, c):
        raise TypeError("ambiguous scalar in TorusTensor")


# ---------------------------------------------------------------------------
# algebra structure
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def b_mono_mul(ctx: Context, x: BMonomial, y: BMonomial) -> Tuple[Tuple[BMonomial, object], ...]:
    # (a z^l1)(b z^l2) = zeta^(-l1 deg b) (a b) z^(l1 + l2)
    twist = ctx.zpow(-x.l * y.a_part.deg) if x.l else ctx.one
    return tuple(
        (_bm(mono, x.l + y.l), twist * c) for mono, c in P.mono_mul(ctx, x.a_part, y.a_part)
    )


def b_mul(x: BElement, y: BElement) -> BElement:
    ctx = current()
    acc: dict = {}
    for bx, cx in x.terms.items():
        for by, cy in y.terms.items():
            c = cx * cy
            for mono, cm in b_mono_mul(ctx, bx, by):
                _add_into(acc, mono, c * cm, ctx)
    return BElement(acc)


@lru_cache(maxsize=None)
def _b_mono_star(ctx: Context, x: BMonomial) -> Tuple[Tuple[BMonomial, object], ...]:
    # (a z^l)* = z^-l a* = zeta^(-l deg a) a* z^-l
    twist = ctx.zpow(-x.l * x.a_part.deg)
    return tuple(
        (_bm(mono, -x.l), twist * c) for mono, c in P._mono_star(ctx, x.a_part).terms.items()
    )


def b_star(x: BElement) -> BElement:
    ctx = current()
    acc: dict = {}
    for b, c in x.terms.items():
        cc = ctx.conj(c)
        for mono, cm in _b_mono_star(ctx, b):
            _add_into(acc, mono, cc * cm, ctx)
    return BElement(acc)


def z(power: int = 1) -> BElement:
    return BElement.mono(0, 0, 0, power)


def kappa(x: Element) -> BElement:
    return BElement({_bm(m, 0): c for m, c in x.terms.items()})


def a_part(x: BElement) -> Element:
    """Inverse of kappa on its range; raises if x has z-terms."""
    if any(b.l for b in x.terms):
        raise ValueError("element is not in the range of kappa")
    return Element({b.a_part: c for b, c in x.terms.items()})


def _gen_delta_B(ctx: Context, g: BMonomial) -> BTensor:
    a, as_, c, cs = (BMonomial(1), BMonomial(-1), BMonomial(0, 1), BMonomial(0, 0, 1))
    if g == a:
        # alpha (x) alpha - q gamma* z (x) gamma
        return BTensor({(a, a): ctx.one, (BMonomial(0, 0, 1, 1), c): -ctx.q})
    if g == c:
        return BTensor({(c, a): ctx.one, (BMonomial(-1, 0, 0, 1), c): ctx.one})
    if g.l:
        return BTensor({(g, g): ctx.one})
    # alpha*, gamma*: Delta_B is a *-homomorphism
    base = _gen_delta_B(ctx, a if g == as_ else c)
    acc: dict = {}
    for (x1, x2), coef in base.terms.items():
        cc = ctx.conj(coef)
        for m1, d1 in _b_mono_star(ctx, x1):
            for m2, d2 in _b_mono_star(ctx, x2):
                _add_into(acc, (m1, m2), cc * d1 * d2, ctx)
    return BTensor(acc)


@lru_cache(maxsize=None)
def delta_B_mono(ctx: Context, x: BMonomial) -> BTensor:
    if x == B_ONE:
        return BTensor({(B_ONE, B_ONE): ctx.one})
    if x.l:
        prefix, last = BMonomial(x.n, x.m, x.k, x.l - (1 if x.l > 0 else -1)), BMonomial(0, 0, 0, 1 if x.l > 0 else -1)
    elif x.k:
        prefix, last = BMonomial(x.n, x.m, x.k - 1), BMonomial(0, 0, 1)
    elif x.m:
        prefix, last = BMonomial(x.n, x.m - 1), BMonomial(0, 1)
    else:
        step = 1 if x.n > 0 else -1
        prefix, last = BMonomial(x.n - step), BMonomial(step)
    return delta_B_mono(ctx, prefix) * _gen_delta_B(ctx, last)


def delta_B(x: BElement) -> BTensor:
    ctx = current()
    acc: dict = {}
    for b, c in x.terms.items():
        for key, cd in delta_B_mono(ctx, b).terms.items():
            _add_into(acc, key, c * cd, ctx)
    return BTensor(acc)


def haar_B(x: BElement):
    ctx = current()
    total = ctx.zero
    for b, c in x.terms.items():
        if b.l == 0:
            total = total + c * P.haar_mono(ctx, b.a_part)
    return total


def sigma_hB_imag(x: BElement, s) -> BElement:
    """Modular group of h_B at time i*s (2s integer): alpha -> r^(2s) alpha."""
    ctx = current()
    if ctx.exact and not (2 * s) == int(2 * s):
        raise ValueError("exact mode needs a half-integer s")
    acc = {}
    for b, c in x.terms.items():
        acc[b] = c * ctx.rpow(int(2 * s * b.n)) if ctx.exact else c * ctx.r ** (2 * s * b.n)
    return BElement(acc)


# ---------------------------------------------------------------------------
# comparison maps
# ---------------------------------------------------------------------------


def psi(x: BraidedElement) -> BTensor:
    """psi(a (x) b) = kappa(a) z^(deg b) (x) kappa(b)."""
    if x.order != 2:
        raise ValueError("psi needs an order-2 element")
    acc = {}
    ctx = current()
    for (a, b), c in x.terms.items():
        _add_into(acc, (_bm(a, b.deg), _bm(b, 0)), c, ctx)
    return BTensor(acc)


def Psi_triple(x: BraidedElement) -> BTensor:
    """Psi on A [x] A [x] C(T): keys (a, b, l) map to kappa(a) z^(deg b + l) (x) kappa(b) z^l.

    This is the multiplicative extension of a -> a (x) 1, b -> z^(deg b) (x) b
    and t -> z (x) z.
    """
    if x.order != 3:
        raise ValueError("Psi_triple needs an order-3 element")
    ctx = current()
    acc: dict = {}
    for (a, b, l), c in x.terms.items():
        if not isinstance(l, int):
            if l != P.ONE_M:
                raise ValueError("third leg must be a circle monomial")
            l = 0
        _add_into(acc, (_bm(a, b.deg + l), _bm(b, l)), c, ctx)
    return BTensor(acc)


def pi_char(x: BElement) -> TorusPoly:
    ctx = current()
    acc: dict = {}
    for b, c in x.terms.items():
        if b.m == 0 and b.k == 0:
            _add_into(acc, b.l, c, ctx)
    return TorusPoly(acc)


def delta_Btilde(x: BElement) -> BTensor:
    """Delta on B~ = A [x] C(T) computed as Psi o (Delta (x) id)."""
    ctx = current()
    acc: dict = {}
    for b, c in x.terms.items():
        for (d1, d2), cd in delta_mono(ctx, b.a_part).terms.items():
            _add_into(acc, (d1, d2, b.l), c * cd, ctx)
    return Psi_triple(BraidedElement(3, acc))


def id_tensor_pi(t: BTensor) -> TorusTensor:
    """(id (x) pi): keys (BMonomial, l)."""
    ctx = current()
    acc: dict = {}
    for (x1, x2), c in t.terms.items():
        if x2.m == 0 and x2.k == 0:
            _add_into(acc, (x1, x2.l), c, ctx)
    return TorusTensor(acc)


def pi_tensor_id(t: BTensor) -> TorusTensor:
    """(pi (x) id): keys (l, BMonomial)."""
    ctx = current()
    acc: dict = {}
    for (x1, x2), c in t.terms.items():
        if x1.m == 0 and x1.k == 0:
            _add_into(acc, (x1.l, x2), c, ctx)
    return TorusTensor(acc)


def slice_h_torus(t: BTensor) -> BElement:
    """(id (x) h_T o pi): keep the second legs with pi-image t^0."""
    ctx = current()
    acc: dict = {}
    for (x1, l), c in id_tensor_pi(t).terms.items():
        if l == 0:
            _add_into(acc, x1, c, ctx)
    return BElement(acc)


def slice_hB(t: BTensor, leg: int) -> BElement:
    """(h_B (x) id) for leg=0, (id (x) h_B) for leg=1."""
    ctx = current()
    acc: dict = {}
    for key, c in t.terms.items():
        h = haar_B(BElement({key[leg]: ctx.one}))
        if not ctx.is_zero(h):
            _add_into(acc, key[1 - leg], c * h, ctx)
    return BElement(acc)


def delta_B_leg(t: BTensor, leg: int) -> Dict[Tuple[BMonomial, ...], object]:
    """(Delta_B (x) id) or (id (x) Delta_B) as a plain triple map (for coassociativity)."""
    ctx = current()
    acc: dict = {}
    for (x1, x2), c in t.terms.items():
        src = x1 if leg == 0 else x2
        for (d1, d2), cd in delta_B_mono(ctx, src).terms.items():
            key = (d1, d2, x2) if leg == 0 else (x1, d1, d2)
            _add_into(acc, key, c * cd, ctx)
    return acc


def bmonomials(max_abs_n: int, max_m: int, max_l: int) -> list:
    return [_bm(m, l) for m in P.monomials(max_abs_n, max_m) for l in range(-max_l, max_l + 1)]


def slice_kappa_h(x: BraidedElement) -> BElement:
    """kappa o (id [x] h)."""
    return kappa(map_leg(x, 1, "h"))


__all__ = [
    "BMonomial", "BElement", "BTensor", "TorusPoly", "TorusTensor", "b_mul", "b_star", "z",
    "kappa", "delta_B", "haar_B", "sigma_hB_imag", "psi", "Psi_triple", "pi_char",
    "delta_Btilde", "id_tensor_pi", "pi_tensor_id", "slice_h_torus", "slice_hB",
    "delta_B_leg", "bmonomials", "slice_kappa_h", "a_part",
]
