"""The *-algebra Pol(SU_q(2)) in the basis alpha^n gamma^m gamma*^k.

Relations (``q`` complex, ``r = |q|``)::

    alpha* alpha + gamma* gamma = 1      alpha alpha* + r^2 gamma* gamma = 1
    alpha gamma = qb gamma alpha         alpha gamma* = q gamma* alpha
    gamma gamma* = gamma* gamma

A monomial is ``(n, m, k)`` with ``n < 0`` standing for ``alpha*^|n|``.
Coefficients live in the active :class:`~suq2.scalar.Context`, so the same
code runs over exact ``Q(r, v)`` scalars and over complex floats.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Dict, Iterable, List, NamedTuple, Tuple

from .scalar import Context, current


class Monomial(NamedTuple):
    n: int = 0
    m: int = 0
    k: int = 0

    @property
    def deg(self) -> int:
        return self.m - self.k

    def word(self) -> List["Monomial"]:
        """The generator word alpha-part, gamma-part, gamma*-part."""
        a = A if self.n > 0 else AS
        return [a] * abs(self.n) + [G] * self.m + [GS] * self.k


ONE_M = Monomial(0, 0, 0)
A = Monomial(1, 0, 0)
AS = Monomial(-1, 0, 0)
G = Monomial(0, 1, 0)
GS = Monomial(0, 0, 1)


def _add_into(acc: dict, key, c, ctx: Context) -> None:
    s = acc.get(key)
    s = c if s is None else s + c
    if ctx.is_zero(s):
        acc.pop(key, None)
    else:
        acc[key] = s


class Element:
    """Finite linear combination of monomials; immutable by convention."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms: Dict[Monomial, object] = {} if terms is None else terms

    @classmethod
    def from_terms(cls, items: Iterable[Tuple[Monomial, object]], ctx: Context = None) -> "Element":
        ctx = ctx or current()
        acc: dict = {}
        for mono, c in items:
            _add_into(acc, Monomial(*mono), ctx.coerce(c), ctx)
        return cls(acc)

    @classmethod
    def mono(cls, n=0, m=0, k=0, coef=1) -> "Element":
        return cls.from_terms([(Monomial(n, m, k), coef)])

    @classmethod
    def scalar(cls, c) -> "Element":
        return cls.from_terms([(ONE_M, c)])

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Element):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        if not isinstance(other, Element):
            other = Element.scalar(other)
        ctx = current()
        acc = dict(self.terms)
        for mono, c in other.terms.items():
            _add_into(acc, mono, c, ctx)
        return Element(acc)

    __radd__ = __add__

    def __neg__(self):
        return Element({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Element):
            other = Element.scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return Element.scalar(other) + (-self)

    def scale(self, c) -> "Element":
        ctx = current()
        c = ctx.coerce(c)
        if ctx.is_zero(c):
            return Element()
        return Element({m: c * x for m, x in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Element):
            return mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of an algebra element")
        out = Element.scalar(1)
        for _ in range(e):
            out = mul(out, self)
        return out

    def homogeneous_degree(self):
        degs = {m.deg for m in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def __repr__(self):
        from .expr import render

        return f"Element({render(self)!r})"

    def __str__(self):
        from .expr import render

        return render(self)

    def to_json(self) -> dict:
        return {"terms": [
            {"n": m.n, "m": m.m, "k": m.k, "coef": coef_to_json(c)}
            for m, c in sorted(self.terms.items())
        ]}

    @classmethod
    def from_json(cls, obj) -> "Element":
        return cls.from_terms(
            (Monomial(t["n"], t["m"], t["k"]), coef_from_json(t["coef"])) for t in obj["terms"]
        )


def coef_to_json(c):
    from .scalar import Scalar

    if not isinstance(c, Scalar):
        c = complex(c)
        return {"re": c.real, "im": c.imag}
    return c.to_json()


def coef_from_json(obj):
    from .scalar import Scalar

    if "re" in obj:
        return complex(obj["re"], obj["im"])
    return Scalar.from_json(obj)


def alpha() -> Element:
    return Element.mono(1, 0, 0)


def alpha_star() -> Element:
    return Element.mono(-1, 0, 0)


def gamma() -> Element:
    return Element.mono(0, 1, 0)


def gamma_star() -> Element:
    return Element.mono(0, 0, 1)


def one() -> Element:
    return Element.scalar(1)


# ---------------------------------------------------------------------------
# multiplication
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _alpha_product(ctx: Context, n1: int, n2: int) -> Tuple[Tuple[int, object], ...]:
    """alpha^n1 alpha^n2 = alpha^(n1+n2) * sum_j c_j N^j with N = gamma gamma*.

    Returned as a tuple of (j, c_j).  Uses alpha alpha* = 1 - r^2 N,
    alpha* alpha = 1 - N, N alpha* = r^2 alpha* N and N alpha = r^-2 alpha N.
    """
    if n1 == 0 or n2 == 0 or (n1 > 0) == (n2 > 0):
        return ((0, ctx.one),)
    if n1 > 0:
        p = -n2
        # alpha^n1 alpha*^p = alpha^(n1-1) alpha*^(p-1) (1 - r^(2p) N)
        factor = -ctx.rpow(2 * p)
    else:
        p = n2
        # alpha*^|n1| alpha^p = alpha*^(|n1|-1) alpha^(p-1) (1 - r^(-2(p-1)) N)
        factor = -ctx.rpow(-2 * (p - 1))
    inner = _alpha_product(ctx, n1 - 1 if n1 > 0 else n1 + 1, n2 + 1 if n2 < 0 else n2 - 1)
    acc: dict = {}
    for j, c in inner:
        _add_into(acc, j, c, ctx)
        _add_into(acc, j + 1, c * factor, ctx)
    return tuple(sorted(acc.items()))


@lru_cache(maxsize=None)
def mono_mul(ctx: Context, x: Monomial, y: Monomial) -> Tuple[Tuple[Monomial, object], ...]:
    """Normal form of the product of two basis monomials."""
    # move alpha^(y.n) left past gamma^(x.m) gamma*^(x.k)
    c = ctx.one
    if y.n and (x.m or x.k):
        c = ctx.qbpow(-x.m * y.n) * ctx.qpow(-x.k * y.n)
    m, k = x.m + y.m, x.k + y.k
    n = x.n + y.n
    return tuple(
        (Monomial(n, m + j, k + j), c * cj) for j, cj in _alpha_product(ctx, x.n, y.n)
    )


def mul(x: Element, y: Element) -> Element:
    ctx = current()
    acc: dict = {}
    for mx, cx in x.terms.items():
        for my, cy in y.terms.items():
            c = cx * cy
            for mono, cm in mono_mul(ctx, mx, my):
                _add_into(acc, mono, c * cm, ctx)
    return Element(acc)


def product(*xs: Element) -> Element:
    out = one()
    for x in xs:
        out = mul(out, x)
    return out


# ---------------------------------------------------------------------------
# linear maps
# ---------------------------------------------------------------------------


def linear_map(x: Element, f) -> Element:
    """Extend ``f: Monomial -> Element`` linearly."""
    ctx = current()
    acc: dict = {}
    for mono, c in x.terms.items():
        for m2, c2 in f(mono).terms.items():
            _add_into(acc, m2, c * c2, ctx)
    return Element(acc)


def diagonal_map(x: Element, factor) -> Element:
    """Multiply each monomial by ``factor(mono)`` (a character-like scaling)."""
    ctx = current()
    acc = {}
    for mono, c in x.terms.items():
        s = c * factor(mono)
        if not ctx.is_zero(s):
            acc[mono] = s
    return Element(acc)


def linear_functional(x: Element, f):
    ctx = current()
    total = ctx.zero
    for mono, c in x.terms.items():
        total = total + c * f(mono)
    return total


@lru_cache(maxsize=None)
def _mono_star(ctx: Context, x: Monomial) -> Element:
    # (alpha^n gamma^m gamma*^k)* = gamma^k gamma*^m alpha^(-n)
    terms = mono_mul(ctx, Monomial(0, x.k, x.m), Monomial(-x.n, 0, 0))
    return Element(dict(terms))


def star(x: Element) -> Element:
    ctx = current()
    acc: dict = {}
    for mono, c in x.terms.items():
        cc = ctx.conj(c)
        for m2, c2 in _mono_star(ctx, mono).terms.items():
            _add_into(acc, m2, cc * c2, ctx)
    return Element(acc)


def degree_split(x: Element) -> Dict[int, Element]:
    parts: Dict[int, dict] = {}
    for mono, c in x.terms.items():
        parts.setdefault(mono.deg, {})[mono] = c
    return {d: Element(t) for d, t in sorted(parts.items())}


def counit_mono(ctx: Context, x: Monomial):
    return ctx.one if x.m == 0 and x.k == 0 else ctx.zero


def counit(x: Element):
    ctx = current()
    return linear_functional(x, lambda m: counit_mono(ctx, m))


@lru_cache(maxsize=None)
def haar_mono(ctx: Context, x: Monomial):
    """h(alpha^n gamma^m gamma*^k) = [n=0][m=k] (1 - r^2) / (1 - r^(2(m+1)))."""
    if x.n != 0 or x.m != x.k:
        return ctx.zero
    if ctx.exact:
        from .scalar import Scalar

        # (1 - r^2)/(1 - r^(2m+2)) = 1/(1 + r^2 + ... + r^(2m)), built reduced
        den = {(2 * i, 0): 1 for i in range(x.m + 1)}
        return Scalar.from_parts({(0, 0): 1}, den, reduce=False)
    r2 = ctx.r ** 2
    return (1 - r2) / (1 - r2 ** (x.m + 1))


def haar(x: Element):
    ctx = current()
    return linear_functional(x, lambda m: haar_mono(ctx, m))


def _gen_antipode(ctx: Context, g: Monomial) -> Element:
    if g == A:
        return Element({AS: ctx.one})
    if g == AS:
        return Element({A: ctx.one})
    if g == G:
        return Element({G: -ctx.qb})
    return Element({GS: -ctx.qpow(-1)})


@lru_cache(maxsize=None)
def antipode_mono(ctx: Context, x: Monomial) -> Element:
    """Fold S(w g) = zeta^(-deg w deg g) S(g) S(w) over the generator word."""
    acc = Element({ONE_M: ctx.one})
    d = 0
    for g in x.word():
        acc = mul(_gen_antipode(ctx, g), acc)
        if d and g.deg:
            acc = acc.scale(ctx.zpow(-d * g.deg))
        d += g.deg
    return acc


def antipode(x: Element) -> Element:
    ctx = current()
    return linear_map(x, lambda m: antipode_mono(ctx, m))


def _check_time(ctx: Context, t: complex) -> None:
    if ctx.exact:
        t = complex(t)
        if t.real != 0 or not (2 * t.imag).is_integer():
            raise ValueError(
                "exact mode only supports imaginary times i*s with s a half-integer"
            )


def _char_factor(ctx: Context, t: complex, e: int):
    """|q|^(2 i t e) as a coefficient; exact only for t = i*s, 2s integer."""
    if e == 0:
        return ctx.one
    t = complex(t)
    if ctx.exact:
        return ctx.rpow(int(round(-2 * t.imag * e)))
    m = ctx.math
    return m.exp(2j * t * e * m.log(ctx.r))


def tau(x: Element, t: complex) -> Element:
    """Scaling group: tau_t(gamma) = |q|^(2it) gamma, tau_t(alpha) = alpha."""
    ctx = current()
    _check_time(ctx, t)
    return diagonal_map(x, lambda m: _char_factor(ctx, t, m.deg))


def sigma_h(x: Element, t: complex) -> Element:
    """Modular group of h: sigma_t(alpha) = |q|^(-2it) alpha, gamma fixed."""
    ctx = current()
    _check_time(ctx, t)
    return diagonal_map(x, lambda m: _char_factor(ctx, t, -m.n))


def automorphism(x: Element, kind: str, time: complex) -> Element:
    if kind == "tau":
        return tau(x, time)
    if kind in ("sigma", "sigma_h"):
        return sigma_h(x, time)
    raise ValueError(f"unknown automorphism {kind!r}")


def residual(x: Element, inverse: bool = False) -> Element:
    """theta(a) = v^(deg(a)^2) a on homogeneous a; inverse uses v^(-deg^2)."""
    ctx = current()
    s = -1 if inverse else 1
    return diagonal_map(x, lambda m: ctx.vpow(s * m.deg * m.deg))


def unitary_antipode(x: Element) -> Element:
    """R = S o tau_{i/2} o theta."""
    return antipode(tau(residual(x), 0.5j))


def monomials(max_abs_n: int, max_m: int, max_k: int = None) -> List[Monomial]:
    """All basis monomials with |n| <= max_abs_n, m <= max_m, k <= max_k."""
    max_k = max_m if max_k is None else max_k
    return [
        Monomial(n, m, k)
        for n in range(-max_abs_n, max_abs_n + 1)
        for m in range(max_m + 1)
        for k in range(max_k + 1)
    ]


def random_element(rng, size: int = 3, terms: int = 3, coef_range: int = 3) -> Element:
    """Random element with monomial exponents <= size and small Laurent coefficients."""
    ctx = current()
    items = []
    for _ in range(rng.randint(1, terms)):
        mono = Monomial(rng.randint(-size, size), rng.randint(0, size), rng.randint(0, size))
        c = rng.randint(-coef_range, coef_range) or 1
        if ctx.exact:
            from .scalar import Scalar

            c = Scalar.monomial(c, rng.randint(-1, 1), rng.randint(-2, 2))
        else:
            c = c * ctx.r ** rng.randint(-1, 1) * ctx.v ** rng.randint(-2, 2)
        items.append((mono, c))
    return Element.from_terms(items)


def isclose(x: Element, y: Element, tol: float = 1e-10) -> bool:
    """Numeric comparison of two elements (relative to the largest coefficient)."""
    keys = set(x.terms) | set(y.terms)
    scale = max([abs(complex(c)) for c in list(x.terms.values()) + list(y.terms.values())] + [1.0])
    return all(abs(complex(x.terms.get(k, 0)) - complex(y.terms.get(k, 0))) <= tol * scale for k in keys)


def evaluate_element(x: Element, q0: complex, sigma: int = None) -> Element:
    """Exact element -> numeric element at q = q0 (coefficients via numeric_eval)."""
    from .scalar import numeric_eval

    return Element({m: numeric_eval(c, q0, sigma) for m, c in x.terms.items()})
