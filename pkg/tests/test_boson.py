import json
import random

import numpy as np
import pytest
import scipy.sparse as sps

from suq2 import boson as B
from suq2 import polsuq2 as P
from suq2.boson import BElement, BMonomial, BTensor, b_mul, b_star, delta_B, haar_B, kappa, psi, z
from suq2.braided import delta, random_braided, tensor
from suq2.scalar import ONE, R, current

from conftest import Q0

K, J, L = 7, 10, 10


def random_b(rng, size=2, terms=3):
    out = BElement()
    for _ in range(rng.randint(1, terms)):
        x = P.random_element(rng, size=size, terms=1)
        out = out + b_mul(kappa(x), z(rng.randint(-2, 2)))
    return out


class BosonOracle:
    """pi(a) (x) 1 for a in Pol(SU_q(2)) and z -> Z (x) shift, Z e_{k,j} = zeta^-j e_{k,j}."""

    def __init__(self, q0):
        r, qb = abs(q0), q0.conjugate()
        zeta = q0 / qb
        nj = 2 * J + 1
        a = sps.lil_matrix((K, K))
        for k in range(1, K):
            a[k - 1, k] = np.sqrt(1 - r ** (2 * k))
        self.alpha = sps.kron(sps.kron(a.tocsr(), sps.eye(nj)), sps.eye(2 * L + 1)).tocsr()
        g = sps.kron(sps.diags([qb ** k for k in range(K)]), sps.eye(nj, k=-1))
        self.gamma = sps.kron(g, sps.eye(2 * L + 1)).tocsr()
        js = np.tile(np.arange(-J, J + 1), K)
        Z = sps.diags(zeta ** (-js.astype(float)))
        self.z = sps.kron(Z, sps.eye(2 * L + 1, k=-1)).tocsr()
        self.dim = self.alpha.shape[0]
        self.ks = np.repeat(np.repeat(np.arange(K), nj), 2 * L + 1)
        self.js = np.repeat(np.tile(np.arange(-J, J + 1), K), 2 * L + 1)
        self.ls = np.tile(np.arange(-L, L + 1), K * nj)

    def mono(self, b: BMonomial):
        out = sps.eye(self.dim, format="csr")
        a = self.alpha if b.n >= 0 else self.alpha.conj().T
        for op, e in ((a, abs(b.n)), (self.gamma, b.m), (self.gamma.conj().T, b.k)):
            for _ in range(e):
                out = out @ op
        zz = self.z if b.l >= 0 else self.z.conj().T
        for _ in range(abs(b.l)):
            out = out @ zz
        return out

    def __call__(self, x: BElement):
        return sum((complex(c) * self.mono(b) for b, c in x.terms.items()), sps.csr_matrix((self.dim, self.dim)))

    def safe(self, rng, *elements):
        kd = sum(max((-b.n for b in x.terms if b.n < 0), default=0) for x in elements)
        jd = sum(max((max(b.m, b.k) for b in x.terms), default=0) for x in elements)
        ld = sum(max((abs(b.l) for b in x.terms), default=0) for x in elements)
        assert kd < K and jd < J and ld < L
        ok = (self.ks < K - kd) & (np.abs(self.js) <= J - jd) & (np.abs(self.ls) <= L - ld)
        return np.where(ok, rng.normal(size=self.dim) + 1j * rng.normal(size=self.dim), 0)


@pytest.fixture(scope="module")
def oracle():
    return BosonOracle(Q0)


def test_commutation_with_z(exact):
    ctx = current()
    g, a = kappa(P.gamma()), kappa(P.alpha())
    zz = z(1)
    assert b_mul(b_mul(zz, g), z(-1)) == g.scale(ctx.zpow(-1))
    assert b_mul(b_mul(zz, a), z(-1)) == a
    assert b_mul(zz, b_star(zz)) == BElement.scalar(1)


def test_product_matches_operator_oracle(numeric, oracle):
    rng = random.Random(2)
    nrng = np.random.default_rng(2)
    for _ in range(15):
        x, y = random_b(rng, size=1), random_b(rng, size=1)
        xy = b_mul(x, y)
        v = oracle.safe(nrng, x, y, xy)
        lhs = oracle(xy) @ v
        rhs = oracle(x) @ (oracle(y) @ v)
        assert np.abs(lhs - rhs).max() <= 1e-9 * max(1.0, np.abs(rhs).max())


def test_star_matches_adjoint(numeric, oracle):
    rng = random.Random(3)
    nrng = np.random.default_rng(3)
    for _ in range(10):
        x = random_b(rng, size=1)
        xs = b_star(x)
        v, w = oracle.safe(nrng, x, xs), oracle.safe(nrng, x, xs)
        assert abs(np.vdot(w, oracle(xs) @ v) - np.vdot(oracle(x) @ w, v)) <= 1e-9 * max(1, np.linalg.norm(v) * np.linalg.norm(w))


def test_delta_B_on_generators(exact):
    ctx = current()
    a, g, as_, gs = (kappa(f()) for f in (P.alpha, P.gamma, P.alpha_star, P.gamma_star))
    zz = z(1)
    assert delta_B(a) == BTensor.pure(a, a) - BTensor.pure(b_mul(gs, zz), g).scale(ctx.q)
    assert delta_B(g) == BTensor.pure(g, a) + BTensor.pure(b_mul(as_, zz), g)
    assert delta_B(zz) == BTensor.pure(zz, zz)


def test_delta_B_multiplicative(exact, rng):
    for _ in range(25):
        x, y = random_b(rng), random_b(rng)
        assert delta_B(b_mul(x, y)) == delta_B(x) * delta_B(y)


def test_delta_B_is_star_map(exact, rng):
    for _ in range(20):
        x = random_b(rng)
        D = delta_B(x)
        lhs = delta_B(b_star(x))
        rhs = BTensor()
        for (a, b), c in D.terms.items():
            rhs = rhs + BTensor.pure(b_star(BElement({a: current().one})), b_star(BElement({b: current().one}))).scale(current().conj(c))
        assert lhs == rhs


def test_psi_intertwines_coproducts(exact):
    for m in P.monomials(2, 2):
        x = P.Element({m: current().one})
        assert psi(delta(x)) == delta_B(kappa(x))


def test_psi_is_multiplicative(exact, rng):
    from suq2.braided import btp_mul
    for _ in range(20):
        X, Y = random_braided(rng, 2), random_braided(rng, 2)
        assert psi(btp_mul(X, Y)) == psi(X) * psi(Y)


def test_haar_B(exact):
    assert haar_B(z(1)) == 0 * ONE
    assert haar_B(BElement.scalar(1)) == ONE
    assert haar_B(b_mul(kappa(P.gamma() * P.gamma_star()), z(0))) == ONE / (ONE + R ** 2)
    assert haar_B(b_mul(kappa(P.gamma() * P.gamma_star()), z(2))) == 0 * ONE


def test_modular_group_of_h_B(exact):
    a = kappa(P.alpha())
    assert B.sigma_hB_imag(a, 1) == a.scale(R ** 2)
    assert B.sigma_hB_imag(z(1), 1) == z(1)


def test_pi_character(exact):
    x = b_mul(kappa(P.alpha()), z(2)) + kappa(P.gamma())
    assert B.pi_char(x).terms == {2: current().one}
    assert B.pi_char(kappa(P.alpha_star() * P.alpha())).terms == {0: current().one}


def test_a_part_inverts_kappa(exact, rng):
    for _ in range(10):
        x = P.random_element(rng)
        assert B.a_part(kappa(x)) == x
    with pytest.raises(ValueError):
        B.a_part(z(1))


def test_belement_json(exact, rng):
    for _ in range(10):
        x = random_b(rng)
        assert BElement.from_json(json.loads(json.dumps(x.to_json()))) == x


def test_delta_B_coassociative(exact, rng):
    for _ in range(10):
        D = delta_B(random_b(rng))
        assert B.delta_B_leg(D, 0) == B.delta_B_leg(D, 1)


def test_haar_B_bi_invariant(exact, rng):
    for _ in range(10):
        x = random_b(rng)
        h = BElement.scalar(haar_B(x))
        D = delta_B(x)
        assert B.slice_hB(D, 0) == h
        assert B.slice_hB(D, 1) == h


def test_delta_Btilde_agrees(exact, rng):
    for _ in range(10):
        x = random_b(rng)
        assert B.delta_Btilde(x) == delta_B(x)


def test_torus_slice_detects_A(exact):
    inside = kappa(P.alpha() * P.gamma())
    outside = b_mul(kappa(P.alpha()), z(1))
    assert B.slice_h_torus(B.delta_Btilde(inside)) == inside
    assert B.slice_h_torus(B.delta_Btilde(outside)) != outside
    assert B.slice_h_torus(B.delta_Btilde(z(-2))) == BElement()


def test_boson_in_numeric_mode(numeric, rng):
    for _ in range(5):
        x, y = random_b(rng), random_b(rng)
        lhs = delta_B(b_mul(x, y))
        rhs = delta_B(x) * delta_B(y)
        for key in set(lhs.terms) | set(rhs.terms):
            a, b = lhs.terms.get(key, 0), rhs.terms.get(key, 0)
            assert abs(complex(a) - complex(b)) <= 1e-9 * max(1.0, abs(complex(b)))
