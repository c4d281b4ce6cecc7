import json
import random

import numpy as np
import pytest
import scipy.sparse as sps
from hypothesis import given, strategies as st

from suq2 import polsuq2 as P
from suq2.braided import (BraidedElement, braided_flip, btp_mul, btp_star, delta, delta_leg,
                          map_leg, map_legs, mu, random_braided, tensor)
from suq2.polsuq2 import Element, Monomial
from suq2.scalar import current

from conftest import Q0

K, J = 8, 12


class PairOracle:
    """iota1(a) = pi(a) (x) 1 and iota2(b) = Z^deg(b) (x) pi(b), Z e_{k,j} = zeta^-j e_{k,j}.

    Then iota2(b) iota1(c) = zeta^(-deg b deg c) iota1(c) iota2(b).
    """

    def __init__(self, q0):
        r = abs(q0)
        qb = q0.conjugate()
        zeta = q0 / qb
        nj = 2 * J + 1
        a = sps.lil_matrix((K, K))
        for k in range(1, K):
            a[k - 1, k] = np.sqrt(1 - r ** (2 * k))
        shift = sps.eye(nj, k=-1)
        self.alpha = sps.kron(a.tocsr(), sps.eye(nj)).tocsr()
        self.gamma = sps.kron(sps.diags([qb ** k for k in range(K)]), shift).tocsr()
        js = np.tile(np.arange(-J, J + 1), K)
        self.Z = sps.diags(zeta ** (-js.astype(float)))
        self.dim = K * nj
        self.I = sps.eye(self.dim)
        self.js, self.ks = js, np.repeat(np.arange(K), nj)

    def pi_mono(self, m: Monomial):
        a = self.alpha if m.n >= 0 else self.alpha.conj().T
        out = sps.eye(self.dim)
        for _ in range(abs(m.n)):
            out = out @ a
        for _ in range(m.m):
            out = out @ self.gamma
        for _ in range(m.k):
            out = out @ self.gamma.conj().T
        return out

    def __call__(self, X: BraidedElement):
        out = None
        for (b1, b2), c in X.terms.items():
            term = complex(c) * sps.kron(self.pi_mono(b1) @ self.Z ** b2.deg if b2.deg >= 0 else
                                         self.pi_mono(b1) @ sps.diags(1 / self.Z.diagonal()) ** (-b2.deg),
                                         self.pi_mono(b2))
            out = term if out is None else out + term
        return out

    def safe_vector(self, rng, *elements):
        """Random v (x) v supported where no word of the given elements leaves the grid.

        Normal-form words gamma^m gamma*^k shift j by up to max(m, k) on the
        way, alpha*^n raises k by n; depths add up over the elements.
        """
        kd = jd = 0
        for X in elements:
            kd += max((-b.n for key in X.terms for b in key if b.n < 0), default=0)
            jd += max((max(b.m, b.k) for key in X.terms for b in key), default=0)
        if kd >= K or jd >= J:
            raise ValueError("grid too small for these elements")
        ok = (self.ks < K - kd) & (np.abs(self.js) <= J - jd)
        v = np.where(ok, rng.normal(size=self.dim) + 1j * rng.normal(size=self.dim), 0)
        return np.kron(v, v)


@pytest.fixture(scope="module")
def oracle():
    return PairOracle(Q0)


def test_delta_on_generators(exact):
    ctx = current()
    a, g, as_, gs = P.alpha(), P.gamma(), P.alpha_star(), P.gamma_star()
    assert delta(a) == tensor(a, a) - tensor(gs, g).scale(ctx.q)
    assert delta(g) == tensor(g, a) + tensor(as_, g)


def test_key_product_twist(exact):
    ctx = current()
    g, gs, a = P.gamma(), P.gamma_star(), P.alpha()
    # (1 (x) g)(g (x) 1) = zeta^-1 (g (x) g)
    assert btp_mul(tensor(P.one(), g), tensor(g, P.one())) == tensor(g, g).scale(ctx.zpow(-1))
    assert btp_mul(tensor(g, P.one()), tensor(P.one(), g)) == tensor(g, g)
    assert btp_mul(tensor(P.one(), gs), tensor(g, a)) == tensor(g, gs * a).scale(ctx.zpow(1))


def test_braided_product_matches_operator_oracle(numeric, oracle):
    rng = random.Random(3)
    nrng = np.random.default_rng(3)
    for _ in range(10):
        X = random_braided(rng, 2, size=1)
        Y = random_braided(rng, 2, size=1)
        XY = btp_mul(X, Y)
        v = oracle.safe_vector(nrng, X, Y, XY)
        lhs = oracle(XY) @ v
        rhs = oracle(X) @ (oracle(Y) @ v)
        assert np.abs(lhs - rhs).max() <= 1e-9 * max(1.0, np.abs(rhs).max())


def test_braided_star_matches_adjoint(numeric, oracle):
    rng = random.Random(4)
    nrng = np.random.default_rng(4)
    for _ in range(10):
        X = random_braided(rng, 2, size=1)
        v = oracle.safe_vector(nrng, X, btp_star(X))
        w = oracle.safe_vector(nrng, X, btp_star(X))
        lhs = np.vdot(w, oracle(btp_star(X)) @ v)
        rhs = np.vdot(oracle(X) @ w, v)
        assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(rhs))


def test_delta_is_multiplicative(exact, rng):
    for _ in range(40):
        x, y = P.random_element(rng, size=2), P.random_element(rng, size=2)
        assert delta(x * y) == btp_mul(delta(x), delta(y))


@given(st.integers(0, 10 ** 6))
def test_braided_product_associative(seed):
    rng = random.Random(seed)
    X, Y, Z = (random_braided(rng, 2) for _ in range(3))
    assert btp_mul(btp_mul(X, Y), Z) == btp_mul(X, btp_mul(Y, Z))


def test_flip_formula_and_inverse(exact, rng):
    ctx = current()
    g, gs = P.gamma(), P.gamma_star()
    assert braided_flip(tensor(g, gs)) == tensor(gs, g).scale(ctx.zpow(1))
    for _ in range(30):
        X = random_braided(rng, 2)
        assert braided_flip(braided_flip(X), inverse=True) == X


def test_map_leg_slices(exact):
    x = P.gamma() * P.gamma_star()
    D = delta(x)
    assert map_leg(D, 0, "eps") == x
    assert map_leg(D, 1, "h") == Element.scalar(P.haar(x))
    assert mu(map_leg(delta(P.alpha()), 0, "S")) == P.one()


def test_tau_sigma_comultiplication_identities(exact, rng):
    # Delta tau_t = (tau_t x tau_t) Delta = (sigma_t x sigma_-t) Delta
    # Delta sigma_t = (tau_t x sigma_t) Delta = (sigma_t x tau_-t) Delta
    t = 0.5j
    for _ in range(20):
        x = P.random_element(rng)
        D = delta(x)
        assert delta(P.tau(x, t)) == map_legs(D, ("tau", t), ("tau", t))
        assert delta(P.tau(x, t)) == map_legs(D, ("sigma", t), ("sigma", -t))
        assert delta(P.sigma_h(x, t)) == map_legs(D, ("tau", t), ("sigma", t))
        assert delta(P.sigma_h(x, t)) == map_legs(D, ("sigma", t), ("tau", -t))


def test_tau_comultiplication_real_time(numeric, rng):
    from suq2.braided import isclose
    for _ in range(10):
        x = P.random_element(rng)
        D = delta(x)
        assert isclose(delta(P.tau(x, 0.37)), map_legs(D, ("tau", 0.37), ("tau", 0.37)))


def test_coassociativity_random(exact, rng):
    for _ in range(20):
        x = P.random_element(rng)
        D = delta(x)
        assert delta_leg(D, 0) == delta_leg(D, 1)


def test_braided_json_round_trip(exact, rng):
    for _ in range(20):
        X = random_braided(rng, 2)
        assert BraidedElement.from_json(json.loads(json.dumps(X.to_json()))) == X
