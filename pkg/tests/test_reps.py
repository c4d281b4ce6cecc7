import json

import pytest

from suq2 import polsuq2 as P
from suq2 import reps as RP
from suq2.polsuq2 import Element, mul, star
from suq2.reps import Representation
from suq2.scalar import current


def candidate_tensor(u, v):
    """Tensor product with the twist exponent taken from the column index of v."""
    ctx = current()
    n, m = u.weights, v.weights
    idx = [(k, l) for k in range(u.dim) for l in range(v.dim)]
    rows = []
    for k, l in idx:
        row = []
        for k2, l2 in idx:
            e = mul(u.entries[k][k2], v.entries[l][l2])
            row.append(e.scale(ctx.zpow((n[k] - n[k2]) * m[l2])) if e else e)
        rows.append(row)
    return Representation(rows, [n[k] + m[l] for k, l in idx])


def test_fundamental_validates(exact):
    u = RP.fundamental()
    rep = RP.validate(u)
    assert rep.ok, rep.failures
    assert RP.matrix_coeff(u, 1, 2) == P.gamma_star().scale(-current().q)


def test_trivial_reps_validate(exact):
    assert RP.validate(RP.trivial()).ok
    assert RP.validate(RP.trivial(weight=3, dim=2)).ok
    assert RP.validate(RP.trivial(weights=[0, 1, -2])).ok


def test_wrong_weight_fails_invariance(exact):
    u = RP.fundamental()
    bad = Representation(u.entries, [0, 2])
    rep = RP.validate(bad)
    assert not rep.ok
    assert any("invariance" in f for f in rep.failures)


def test_tensor_square_validates_and_candidate_fails(exact):
    u = RP.fundamental()
    assert RP.validate(RP.tensor(u, u)).ok
    cand = RP.validate(candidate_tensor(u, u))
    assert not cand.ok
    assert any("corepresentation at (1,1)" in f for f in cand.failures)


def test_tensor_entry(exact):
    u = RP.fundamental()
    uu = RP.tensor(u, u)
    # rows/cols ordered (1,1),(1,2),(2,1),(2,2)
    ctx = current()
    assert uu[(0, 3)] == (P.gamma_star() * P.gamma_star()).scale(ctx.q ** 2)
    assert uu.weights == [0, 1, 1, 2]


@pytest.mark.parametrize("j", [0, 1, 2, 3])
def test_tensor_powers(exact, j):
    w = RP.tensor_power(RP.fundamental(), j)
    assert w.dim == 2 ** j
    assert RP.validate(w).ok
    assert RP.antipode_coeff_check(w).ok
    assert RP.counit_rep_check(w).ok


def test_tensor_with_shifted_trivial(exact):
    u = RP.fundamental()
    assert RP.validate(RP.tensor(u, RP.trivial(weight=2))).ok
    assert RP.validate(RP.tensor(RP.trivial(weight=-1), u)).ok


def test_coefficient_span(exact):
    rep = RP.coeff_span_check(2)
    assert rep.ok, rep.failures
    n_targets = len([m for m in P.monomials(2, 2) if abs(m.n) + m.m + m.k <= 2])
    assert len(rep.certificates) == n_targets
    cert = rep.certificates[(0, 1, 0)]
    assert cert


def test_boson_lift(exact):
    u = RP.fundamental()
    assert RP.boson_lift_check(u).ok
    assert RP.boson_lift_check(RP.tensor(u, u)).ok


def test_intertwiners(exact):
    u = RP.fundamental()
    assert RP.is_intertwiner([[1, 0], [0, 1]], u, u)
    assert not RP.is_intertwiner([[0, 1], [1, 0]], u, u)
    assert not RP.is_intertwiner([[1, 0], [0, 2]], u, u)
    t = RP.trivial(weights=[0, 1])
    assert RP.is_intertwiner([[1, 0], [0, 3]], t, t)
    assert not RP.is_intertwiner([[1, 1], [0, 1]], t, t)
    with pytest.raises(ValueError):
        RP.is_intertwiner([[1, 0]], u, u)


def test_tensor_with_trivial_is_u(exact):
    u1 = RP.tensor(RP.fundamental(), RP.trivial())
    assert RP.is_intertwiner([[1, 0], [0, 1]], u1, RP.fundamental())


def test_json_round_trip(exact):
    uu = RP.tensor(RP.fundamental(), RP.fundamental())
    back = Representation.from_json(json.loads(json.dumps(uu.to_json())))
    assert back.weights == uu.weights
    assert all(back[(i, j)] == uu[(i, j)] for i in range(4) for j in range(4))


def test_unitarity_in_numeric_mode(numeric):
    u = RP.tensor(RP.fundamental(), RP.fundamental())
    for k in range(u.dim):
        for l in range(u.dim):
            s = sum((mul(u[(k, j)], star(u[(l, j)])) for j in range(u.dim)), Element())
            diff = s - P.one() if k == l else s
            assert all(abs(complex(c)) < 1e-12 for c in diff.terms.values())
