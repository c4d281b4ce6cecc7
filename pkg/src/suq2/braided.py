"""Braided tensor powers of Pol(SU_q(2)) and the braided Hopf structure.

An order-n element is a map from n-tuples of basis monomials to
coefficients; the key ``(a1, ..., an)`` stands for
``iota_1(a1) ... iota_n(an)``.  Legs commute up to the braiding

    iota_i(x) iota_j(y) = zeta^(deg x deg y) iota_j(y) iota_i(x)   (i < j)

so that the product of two keys picks up ``prod_{i>j} zeta^(-deg b_i deg c_j)``.

A leg may also hold a plain ``int`` l, meaning the circle coordinate t^l of
C(T) graded by l.  That is how the triple A (x) A (x) C(T) is represented.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product as cartesian
from typing import Callable, Dict, Iterable, Tuple

from . import polsuq2 as P
from .polsuq2 import Element, Monomial, _add_into
from .scalar import Context, current

Key = Tuple[object, ...]


def leg_deg(x) -> int:
    return x if isinstance(x, int) else x.deg


def _leg_mul(ctx: Context, x, y):
    if isinstance(x, int):
        return ((x + y, ctx.one),)
    return P.mono_mul(ctx, x, y)


class BraidedElement:
    __slots__ = ("order", "terms")

    def __init__(self, order: int, terms: Dict[Key, object] = None):
        self.order = order
        self.terms: Dict[Key, object] = {} if terms is None else terms

    @classmethod
    def from_terms(cls, order: int, items: Iterable[Tuple[Key, object]]) -> "BraidedElement":
        ctx = current()
        acc: dict = {}
        for key, c in items:
            key = tuple(k if isinstance(k, int) else Monomial(*k) for k in key)
            if len(key) != order:
                raise ValueError("key length does not match order")
            _add_into(acc, key, ctx.coerce(c), ctx)
        return cls(order, acc)

    @classmethod
    def identity(cls, order: int) -> "BraidedElement":
        return cls.from_terms(order, [((P.ONE_M,) * order, 1)])

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, BraidedElement):
            return self.order == other.order and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __add__(self, other: "BraidedElement"):
        _same_order(self, other)
        ctx = current()
        acc = dict(self.terms)
        for key, c in other.terms.items():
            _add_into(acc, key, c, ctx)
        return BraidedElement(self.order, acc)

    def __neg__(self):
        return BraidedElement(self.order, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "BraidedElement":
        ctx = current()
        c = ctx.coerce(c)
        if ctx.is_zero(c):
            return BraidedElement(self.order)
        return BraidedElement(self.order, {k: c * x for k, x in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, BraidedElement):
            return btp_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __str__(self):
        from .expr import render

        return render(self)

    __repr__ = __str__

    def to_json(self) -> dict:
        def leg(x):
            return {"l": x} if isinstance(x, int) else {"n": x.n, "m": x.m, "k": x.k}

        return {"order": self.order, "terms": [
            {"legs": [leg(x) for x in key], "coef": P.coef_to_json(c)}
            for key, c in sorted(self.terms.items(), key=lambda kv: repr(kv[0]))
        ]}

    @classmethod
    def from_json(cls, obj) -> "BraidedElement":
        def leg(d):
            return d["l"] if "l" in d else Monomial(d["n"], d["m"], d["k"])

        return cls.from_terms(obj["order"], (
            (tuple(leg(x) for x in t["legs"]), P.coef_from_json(t["coef"])) for t in obj["terms"]
        ))


def _same_order(x: BraidedElement, y: BraidedElement) -> None:
    if x.order != y.order:
        raise ValueError(f"order mismatch: {x.order} vs {y.order}")


def _need_order(x: BraidedElement, n: int) -> None:
    if x.order != n:
        raise ValueError(f"expected an order-{n} element, got order {x.order}")


def tensor(*legs: Element) -> BraidedElement:
    """iota_1(x1) ... iota_n(xn): plain expansion of the leg elements."""
    ctx = current()
    acc: dict = {}
    for combo in cartesian(*(list(x.terms.items()) for x in legs)):
        c = ctx.one
        for _, cx in combo:
            c = c * cx
        _add_into(acc, tuple(m for m, _ in combo), c, ctx)
    return BraidedElement(len(legs), acc)


@lru_cache(maxsize=None)
def key_mul(ctx: Context, b: Key, c: Key) -> Tuple[Tuple[Key, object], ...]:
    e = 0
    for i in range(len(b)):
        db = leg_deg(b[i])
        if db:
            for j in range(i):
                e -= db * leg_deg(c[j])
    twist = ctx.zpow(e)
    legs = [_leg_mul(ctx, x, y) for x, y in zip(b, c)]
    acc: dict = {}
    for combo in cartesian(*legs):
        coef = twist
        for _, cm in combo:
            coef = coef * cm
        _add_into(acc, tuple(m for m, _ in combo), coef, ctx)
    return tuple(acc.items())


def btp_mul(x: BraidedElement, y: BraidedElement) -> BraidedElement:
    _same_order(x, y)
    ctx = current()
    acc: dict = {}
    for kx, cx in x.terms.items():
        for ky, cy in y.terms.items():
            c = cx * cy
            for key, ck in key_mul(ctx, kx, ky):
                _add_into(acc, key, c * ck, ctx)
    return BraidedElement(x.order, acc)


def btp_star(x: BraidedElement) -> BraidedElement:
    ctx = current()
    acc: dict = {}
    for key, c in x.terms.items():
        e = 0
        for i in range(len(key)):
            for j in range(i + 1, len(key)):
                e -= leg_deg(key[i]) * leg_deg(key[j])
        coef = ctx.conj(c) * ctx.zpow(e)
        legs = [
            ((-l, ctx.one),) if isinstance(l, int) else tuple(P._mono_star(ctx, l).terms.items())
            for l in key
        ]
        for combo in cartesian(*legs):
            cc = coef
            for _, cm in combo:
                cc = cc * cm
            _add_into(acc, tuple(m for m, _ in combo), cc, ctx)
    return BraidedElement(x.order, acc)


# ---------------------------------------------------------------------------
# comultiplication
# ---------------------------------------------------------------------------


def _gen_delta(ctx: Context, g: Monomial) -> BraidedElement:
    a, as_, c, cs = P.A, P.AS, P.G, P.GS
    if g == a:
        terms = {(a, a): ctx.one, (cs, c): -ctx.q}
    elif g == c:
        terms = {(c, a): ctx.one, (as_, c): ctx.one}
    elif g == as_:
        terms = {(as_, as_): ctx.one, (c, cs): -ctx.q}
    else:
        terms = {(cs, as_): ctx.one, (a, cs): ctx.one}
    return BraidedElement(2, terms)


@lru_cache(maxsize=None)
def delta_mono(ctx: Context, x: Monomial) -> BraidedElement:
    word = x.word()
    if not word:
        return BraidedElement(2, {(P.ONE_M, P.ONE_M): ctx.one})
    if x.k:
        prefix, last = Monomial(x.n, x.m, x.k - 1), P.GS
    elif x.m:
        prefix, last = Monomial(x.n, x.m - 1, 0), P.G
    else:
        step = 1 if x.n > 0 else -1
        prefix, last = Monomial(x.n - step, 0, 0), (P.A if step > 0 else P.AS)
    return btp_mul(delta_mono(ctx, prefix), _gen_delta(ctx, last))


def _linear(x, f, order: int) -> BraidedElement:
    ctx = current()
    acc: dict = {}
    for k, c in x.terms.items():
        for k2, c2 in f(k).terms.items():
            _add_into(acc, k2, c * c2, ctx)
    return BraidedElement(order, acc)


def delta(x: Element) -> BraidedElement:
    ctx = current()
    return _linear(x, lambda m: delta_mono(ctx, m), 2)


def braided_flip(x: BraidedElement, inverse: bool = False) -> BraidedElement:
    """chi(a (x) b) = zeta^(-deg a deg b) b (x) a; the inverse uses zeta^(+deg a deg b)."""
    _need_order(x, 2)
    ctx = current()
    s = 1 if inverse else -1
    acc: dict = {}
    for (a, b), c in x.terms.items():
        _add_into(acc, (b, a), c * ctx.zpow(s * leg_deg(a) * leg_deg(b)), ctx)
    return BraidedElement(2, acc)


LegMap = Callable[[Element], object]


def _resolve_map(F) -> Tuple[Callable, bool]:
    """Return (function on Elements, contracts?)."""
    if callable(F):
        return F, False
    table = {
        "id": (lambda e: e, False),
        "S": (P.antipode, False),
        "R": (P.unitary_antipode, False),
        "theta": (P.residual, False),
        "theta_inv": (lambda e: P.residual(e, inverse=True), False),
        "eps": (P.counit, True),
        "h": (P.haar, True),
    }
    if isinstance(F, tuple) and F[0] in ("tau", "sigma", "sigma_h"):
        kind, t = F
        return (lambda e: P.automorphism(e, kind, t)), False
    if F not in table:
        raise ValueError(f"unsupported leg map {F!r}")
    return table[F]


def map_leg(x: BraidedElement, leg: int, F) -> BraidedElement | Element:
    """Apply F to leg ``leg`` (0-based).

    F is one of "S", "R", "theta", "theta_inv", ("tau", t), ("sigma", t),
    "eps", "h", or a callable Element -> Element.  ``eps`` and ``h`` contract
    the leg; an order-2 element then becomes an Element.
    """
    fn, contracts = _resolve_map(F)
    ctx = current()
    acc: dict = {}
    for key, c in x.terms.items():
        val = fn(Element({key[leg]: ctx.one}))
        if contracts:
            if ctx.is_zero(val):
                continue
            rest = key[:leg] + key[leg + 1:]
            _add_into(acc, rest, c * val, ctx)
        else:
            for mono, cm in val.terms.items():
                _add_into(acc, key[:leg] + (mono,) + key[leg + 1:], c * cm, ctx)
    if contracts:
        if x.order == 2:
            return Element({k[0]: v for k, v in acc.items()})
        return BraidedElement(x.order - 1, acc)
    return BraidedElement(x.order, acc)


def map_legs(x: BraidedElement, *maps) -> BraidedElement:
    """Apply a degree-preserving map on every leg, e.g. (S (x) S)."""
    out = x
    for i, F in enumerate(maps):
        if F not in (None, "id"):
            out = map_leg(out, i, F)
    return out


def mu(x: BraidedElement) -> Element:
    _need_order(x, 2)
    ctx = current()
    acc: dict = {}
    for (a, b), c in x.terms.items():
        for mono, cm in P.mono_mul(ctx, a, b):
            _add_into(acc, mono, c * cm, ctx)
    return Element(acc)


def delta_leg(x: BraidedElement, leg: int) -> BraidedElement:
    """(Delta (x) id) for leg=0 or (id (x) Delta) for leg=1 on an order-2 element."""
    _need_order(x, 2)
    ctx = current()
    acc: dict = {}
    for key, c in x.terms.items():
        for (d1, d2), cd in delta_mono(ctx, key[leg]).terms.items():
            new = (d1, d2, key[1]) if leg == 0 else (key[0], d1, d2)
            _add_into(acc, new, c * cd, ctx)
    return BraidedElement(3, acc)


def random_braided(rng, order: int = 2, size: int = 2, terms: int = 3) -> BraidedElement:
    out = BraidedElement(order)
    for _ in range(rng.randint(1, terms)):
        legs = [P.random_element(rng, size=size, terms=1) for _ in range(order)]
        out = out + tensor(*legs)
    return out


def isclose(x: BraidedElement, y: BraidedElement, tol: float = 1e-10) -> bool:
    keys = set(x.terms) | set(y.terms)
    vals = [abs(complex(c)) for c in list(x.terms.values()) + list(y.terms.values())]
    scale = max(vals + [1.0])
    return all(abs(complex(x.terms.get(k, 0)) - complex(y.terms.get(k, 0))) <= tol * scale for k in keys)
