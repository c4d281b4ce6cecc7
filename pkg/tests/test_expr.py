import random

import pytest

from suq2 import polsuq2 as P
from suq2.boson import BElement, b_mul, kappa, z
from suq2.braided import delta, random_braided
from suq2.expr import ParseError, parse, parse_value, render, render_scalar
from suq2.polsuq2 import Monomial
from suq2.scalar import ONE, R, current


def test_relation_normalizes_to_zero(exact):
    assert parse_value("a g - qb g a") == P.Element()


def test_delta_alpha_from_text(exact):
    assert parse_value("(a (x) a) - q (g* (x) g)") == delta(P.alpha())


def test_single_monomial(exact):
    x = parse_value("g^2 g*")
    assert list(x.terms) == [Monomial(0, 2, 1)]


def test_precedence(exact):
    assert parse_value("2 a^2 + 1") == P.alpha() * P.alpha() * P.Element.scalar(2) + P.one()
    assert parse_value("(a + 1)^2") == parse_value("a^2 + 2 a + 1")
    assert parse_value("a - g - g*") == P.alpha() - P.gamma() - P.gamma_star()


def test_whitespace_insensitive(exact):
    assert parse_value("a*g*") == parse_value("  a*  g* ")
    assert parse_value("a g") == parse_value("a * g")
    # a postfix star binds to the name
    assert parse_value("a*g") == P.alpha_star() * P.gamma()


def test_unicode_aliases(exact):
    assert parse_value("α γ*") == parse_value("a g*")
    assert parse_value("γ") == P.gamma()


def test_scalars(exact):
    assert parse_value("(1-r^2)/(1-r^4)") == ONE / (ONE + R ** 2)
    assert render_scalar(parse_value("1/2 r^-1")) == render_scalar(ONE / (2 * R))


@pytest.mark.parametrize("text,pos", [("a + * g", 4), ("(a g", 4), ("a ^ x", 4), ("a $ g", 2)])
def test_syntax_errors_have_positions(exact, text, pos):
    with pytest.raises(ParseError) as err:
        parse(text)
    assert err.value.pos == pos


def test_unbalanced_tensor_legs(exact):
    with pytest.raises((ParseError, ValueError)):
        parse_value("(a (x) a) + g")


def test_boson_from_text(exact):
    x = parse_value("z g")
    assert x == b_mul(z(1), kappa(P.gamma()))
    assert render(x) == "zeta^-1 g z"


def test_round_trip_elements(exact):
    rng = random.Random(11)
    for _ in range(500):
        x = P.random_element(rng)
        text = render(x)
        assert render(parse_value(text)) == text
        assert parse_value(text) == x


def test_round_trip_tensors_and_boson(exact):
    rng = random.Random(12)
    for _ in range(50):
        X = random_braided(rng, 2)
        assert parse_value(render(X)) == X
    x = b_mul(kappa(P.alpha() * P.gamma_star()), z(-2)) + BElement.scalar(3)
    assert parse_value(render(x)) == x


def test_round_trip_numeric(numeric):
    rng = random.Random(13)
    for _ in range(50):
        x = P.random_element(rng)
        text = render(x)
        assert render(parse_value(text)) == text


def test_render_examples(exact):
    assert render(P.antipode(P.gamma())) == "-qb g"
    assert render(P.Element()) == "0"
    assert render(P.one()) == "1"
