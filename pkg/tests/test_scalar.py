import cmath
import json
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from suq2.scalar import (ONE, R, V, ZERO, Context, Scalar, current, numeric_eval,
                         principal_sqrt_zeta, using)

laurent_terms = st.lists(
    st.tuples(st.integers(-4, 4), st.integers(-3, 3), st.integers(-3, 3)), min_size=0, max_size=4
)


def _laurent(terms):
    out = ZERO
    for c, i, j in terms:
        out = out + Scalar.monomial(c, i, j)
    return out


@st.composite
def scalars(draw):
    x = _laurent(draw(laurent_terms))
    if draw(st.booleans()):
        d = _laurent(draw(laurent_terms))
        if d:
            x = x / d
    return x


PT = (0.37, cmath.exp(0.83j))  # r, v


def ev(x):
    return x.evaluate(*PT)


def _sym(x):
    r, v = sp.symbols("r v")
    num = sum(sp.Rational(c) * r**i * v**j for (i, j), c in x.num.items())
    den = sum(sp.Rational(c) * r**i * v**j for (i, j), c in x.den.items())
    return num / den, r, v


def test_constants_and_field_ops():
    assert R * R.inv() == ONE
    assert (R + V) - V == R
    assert Scalar(Fraction(1, 2)) + Scalar(Fraction(1, 2)) == ONE
    assert str(Scalar.monomial(3, -1, 2)) == "3 r^-1 v^2"
    assert (R ** -2) * R ** 2 == ONE


def test_canonical_form_is_reduced():
    # (1 - r^2)/(1 - r^4) must reduce to 1/(1 + r^2)
    x = (ONE - R ** 2) / (ONE - R ** 4)
    assert x == ONE / (ONE + R ** 2)
    assert x.den == {(0, 0): 1, (2, 0): 1}


def test_gcd_against_sympy_cancel():
    r, v = sp.symbols("r v")
    a = (ONE + R * V) * (ONE - R ** 2)
    b = (ONE + R * V) * (ONE + V ** 3)
    x = a / b
    want = sp.cancel(((1 + r * v) * (1 - r**2)) / ((1 + r * v) * (1 + v**3)))
    got, _, _ = _sym(x)
    assert sp.simplify(got - want) == 0
    assert len(x.den) == 2  # the common factor is gone


@given(scalars(), scalars())
def test_field_axioms(x, y):
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) - y == x
    if y:
        assert (x / y) * y == x


@given(scalars())
def test_conj_is_involution(x):
    assert x.conj().conj() == x


def test_conj_involution_1000(rng):
    for _ in range(1000):
        terms = [(rng.randint(-4, 4), rng.randint(-3, 3), rng.randint(-3, 3)) for _ in range(rng.randint(0, 4))]
        x = _laurent(terms)
        if rng.random() < 0.3:
            d = _laurent([(rng.randint(1, 3), rng.randint(0, 2), rng.randint(-2, 2))])
            x = x / (d + ONE)
        assert x.conj().conj() == x


@given(scalars())
def test_conj_matches_complex_conjugation(x):
    assert cmath.isclose(ev(x.conj()), ev(x).conjugate(), rel_tol=1e-9, abs_tol=1e-9)


@given(scalars(), scalars())
def test_evaluation_is_a_homomorphism(x, y):
    assert cmath.isclose(ev(x + y), ev(x) + ev(y), rel_tol=1e-9, abs_tol=1e-9)
    assert cmath.isclose(ev(x * y), ev(x) * ev(y), rel_tol=1e-9, abs_tol=1e-9)


@given(scalars())
def test_evaluate_against_sympy(x):
    e, r, v = _sym(x)
    want = complex(e.subs({r: sp.Float(PT[0], 30), v: sp.Float(PT[1].real, 30) + sp.I * sp.Float(PT[1].imag, 30)}).evalf(30))
    assert cmath.isclose(ev(x), want, rel_tol=1e-9, abs_tol=1e-9)


@given(scalars())
def test_json_round_trip(x):
    assert Scalar.from_json(json.loads(json.dumps(x.to_json()))) == x


def test_subs_rational_r():
    x = ONE / (ONE + R ** 2)
    assert x.subs(r=Fraction(1, 2)) == Scalar(Fraction(4, 5))
    assert x.subs(r=Fraction(1, 2)).is_rational()


def test_zero_division():
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO


def test_context_constants(exact):
    ctx = current()
    assert ctx.q == R * V and ctx.qb == R / V and ctx.zeta == V ** 2
    with using(Context(sigma=-1)) as c2:
        assert c2.q == -(R * V)


def test_numeric_context_parameters():
    q0 = 0.3 + 0.4j
    ctx = Context.numeric(q0)
    assert ctx.sigma == 1
    assert abs(ctx.r - 0.5) < 1e-15
    assert cmath.isclose(ctx.q, q0)
    assert cmath.isclose(ctx.zeta, q0 / q0.conjugate())
    assert cmath.isclose(ctx.v, principal_sqrt_zeta(q0))
    assert Context.numeric(-0.3 + 0.4j).sigma == -1


def test_numeric_context_errors():
    with pytest.raises(ValueError):
        Context.numeric(0.4j)  # Re q = 0 needs a declared sigma
    with pytest.raises(ValueError):
        Context.numeric(1.5)
    with pytest.raises(ValueError):
        Context("numeric", -1, 0.3 + 0.4j)  # inconsistent sigma
    with pytest.raises(ValueError):
        Context(q0=0.5)
    assert Context.numeric(0.4j, sigma=-1).v == pytest.approx(-1j)


def test_numeric_eval_of_q():
    assert cmath.isclose(numeric_eval(R * V, 0.3 + 0.4j), 0.3 + 0.4j)
    with using(Context(sigma=-1)):
        assert cmath.isclose(numeric_eval(current().q, -0.3 + 0.4j, sigma=-1), -0.3 + 0.4j)


def test_extended_precision_context():
    ctx = Context.numeric(0.3 + 0.4j, dps=40)
    x = ctx.coerce(ONE / (ONE + R ** 2))
    assert abs(complex(x) - 0.8) < 1e-15
    assert ctx.math.dps == 40
