"""Finite-dimensional unitary representations of braided SU_q(2).

A representation is a square matrix ``u`` over Pol(SU_q(2)) together with
integer T-weights ``n_k`` of the carrier space.  It must be unitary, each
entry ``u_kl`` must be homogeneous of degree ``n_k - n_l``, and
``Delta(u_kl) = sum_j u_kj (x) u_jl``.

Tensor product: entry ((k,l),(k',l')) of u T v is
``zeta^((n_k - n_k') m_l) u_kk' v_ll'``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from . import polsuq2 as P
from .boson import BElement, b_mul, b_star, delta_B, kappa, pi_char, z, BTensor
from .braided import BraidedElement, delta, tensor as leg_tensor
from .polsuq2 import Element, Monomial, counit, mul, star
from .scalar import current


@dataclass
class Representation:
    entries: List[List[Element]]
    weights: List[int]

    def __post_init__(self):
        d = len(self.entries)
        if any(len(row) != d for row in self.entries) or len(self.weights) != d:
            raise ValueError("entries must be square and match the weight vector")

    @property
    def dim(self) -> int:
        return len(self.weights)

    def __getitem__(self, idx: Tuple[int, int]) -> Element:
        return self.entries[idx[0]][idx[1]]

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "weights": list(self.weights),
            "entries": [[e.to_json() for e in row] for row in self.entries],
        }

    @classmethod
    def from_json(cls, obj) -> "Representation":
        return cls([[Element.from_json(e) for e in row] for row in obj["entries"]], list(obj["weights"]))


@dataclass
class Report:
    name: str
    failures: List[str] = field(default_factory=list)
    certificates: Dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, msg: str) -> None:
        self.failures.append(msg)

    def __bool__(self):
        return self.ok


def fundamental() -> Representation:
    ctx = current()
    return Representation(
        [[P.alpha(), P.gamma_star().scale(-ctx.q)], [P.gamma(), P.alpha_star()]], [0, 1]
    )


def trivial(weight: int = 0, dim: int = 1, weights: Optional[Sequence[int]] = None) -> Representation:
    """Identity matrix with the given weights (default all equal to ``weight``)."""
    weights = list(weights) if weights is not None else [weight] * dim
    d = len(weights)
    return Representation(
        [[P.one() if i == j else Element() for j in range(d)] for i in range(d)], weights
    )


def matrix_coeff(rep: Representation, row: int, col: int) -> Element:
    """1-based matrix coefficient, as in u_{row,col}."""
    return rep.entries[row - 1][col - 1]


def validate(rep: Representation) -> Report:
    rep_ = Report("validate")
    d, u = rep.dim, rep.entries
    one = P.one()
    for k in range(d):
        for l in range(d):
            e = u[k][l]
            if e:
                dg = e.homogeneous_degree()
                if dg != rep.weights[k] - rep.weights[l]:
                    rep_.fail(f"invariance at ({k + 1},{l + 1}): degree {dg}, expected "
                              f"{rep.weights[k] - rep.weights[l]}")
            target = one if k == l else Element()
            if sum((mul(u[k][j], star(u[l][j])) for j in range(d)), Element()) != target:
                rep_.fail(f"unitarity u u* at ({k + 1},{l + 1})")
            if sum((mul(star(u[j][k]), u[j][l]) for j in range(d)), Element()) != target:
                rep_.fail(f"unitarity u* u at ({k + 1},{l + 1})")
            rhs = BraidedElement(2)
            for j in range(d):
                rhs = rhs + leg_tensor(u[k][j], u[j][l])
            if delta(e) != rhs:
                rep_.fail(f"corepresentation at ({k + 1},{l + 1})")
    return rep_


def tensor(u: Representation, v: Representation) -> Representation:
    ctx = current()
    n, m = u.weights, v.weights
    idx = [(k, l) for k in range(u.dim) for l in range(v.dim)]
    entries = []
    for k, l in idx:
        row = []
        for k2, l2 in idx:
            e = mul(u.entries[k][k2], v.entries[l][l2])
            row.append(e.scale(ctx.zpow((n[k] - n[k2]) * m[l])) if e else e)
        entries.append(row)
    return Representation(entries, [n[k] + m[l] for k, l in idx])


def tensor_power(u: Representation, j: int) -> Representation:
    out = trivial()
    for _ in range(j):
        out = tensor(out, u)
    return out


def antipode_coeff_check(rep: Representation) -> Report:
    out = Report("antipode_coeff")
    for a in range(rep.dim):
        for b in range(rep.dim):
            if P.antipode(rep.entries[a][b]) != star(rep.entries[b][a]):
                out.fail(f"S(u_{a + 1}{b + 1}) != star(u_{b + 1}{a + 1})")
    return out


def counit_rep_check(rep: Representation) -> Report:
    out = Report("counit_rep")
    ctx = current()
    for a in range(rep.dim):
        for b in range(rep.dim):
            want = ctx.one if a == b else ctx.zero
            if counit(rep.entries[a][b]) != want:
                out.fail(f"eps(u_{a + 1}{b + 1}) != {int(a == b)}")
    return out


def is_intertwiner(T, u: Representation, v: Representation) -> bool:
    """T is a dim(v) x dim(u) scalar matrix."""
    ctx = current()
    T = [[ctx.coerce(c) for c in row] for row in T]
    if len(T) != v.dim or any(len(row) != u.dim for row in T):
        raise ValueError("T has incompatible shape")
    for l in range(v.dim):
        for k in range(u.dim):
            if not ctx.is_zero(T[l][k]) and v.weights[l] != u.weights[k]:
                return False
    for l in range(v.dim):
        for j in range(u.dim):
            lhs = sum((u.entries[k][j].scale(T[l][k]) for k in range(u.dim)), Element())
            rhs = sum((v.entries[l][i].scale(T[i][j]) for i in range(v.dim)), Element())
            if lhs != rhs:
                return False
    return True


def boson_lift(u: Representation) -> List[List[BElement]]:
    """v_kl = kappa(u_kl) z^(n_l)."""
    return [
        [b_mul(kappa(u.entries[k][l]), z(u.weights[l])) for l in range(u.dim)]
        for k in range(u.dim)
    ]


def boson_lift_check(u: Representation) -> Report:
    out = Report("boson_lift")
    v = boson_lift(u)
    d = u.dim
    one = BElement.scalar(1)
    for k in range(d):
        for l in range(d):
            target = one if k == l else BElement()
            if sum((b_mul(v[k][j], b_star(v[l][j])) for j in range(d)), BElement()) != target:
                out.fail(f"unitarity v v* at ({k + 1},{l + 1})")
            if sum((b_mul(b_star(v[j][k]), v[j][l]) for j in range(d)), BElement()) != target:
                out.fail(f"unitarity v* v at ({k + 1},{l + 1})")
            rhs = BTensor()
            for j in range(d):
                rhs = rhs + BTensor.pure(v[k][j], v[j][l])
            if delta_B(v[k][l]) != rhs:
                out.fail(f"Delta_B corepresentation at ({k + 1},{l + 1})")
            pi = pi_char(v[k][l])
            want = {u.weights[k]: current().one} if k == l else {}
            if pi.terms != want:
                out.fail(f"(pi x id) v != diag(t^weights) at ({k + 1},{l + 1})")
    return out


# ---------------------------------------------------------------------------
# span of matrix coefficients
# ---------------------------------------------------------------------------


def _bidegree(m: Monomial) -> Tuple[int, int]:
    # alpha-exponent and gamma-degree are both gradings of the algebra
    return m.n, m.deg


class _Echelon:
    """Incremental Gauss-Jordan basis over the exact scalar field."""

    def __init__(self):
        self.rows: List[Tuple[Monomial, dict, dict]] = []  # (pivot, vector, combination)

    def reduce(self, vec: dict, comb: dict) -> Tuple[dict, dict]:
        vec, comb = dict(vec), dict(comb)
        ctx = current()
        for piv, rv, rc in self.rows:
            c = vec.get(piv)
            if c is None:
                continue
            for key, x in rv.items():
                P._add_into(vec, key, -c * x, ctx)
            for key, x in rc.items():
                P._add_into(comb, key, -c * x, ctx)
        return vec, comb

    def add(self, vec: dict, label) -> None:
        ctx = current()
        vec, comb = self.reduce(vec, {label: ctx.one})
        if not vec:
            return
        piv = min(vec)
        inv = ctx.one / vec[piv]
        vec = {k: x * inv for k, x in vec.items()}
        comb = {k: x * inv for k, x in comb.items()}
        # keep the basis fully reduced so a single pass suffices
        new_rows = []
        for p2, rv, rc in self.rows:
            c = rv.get(piv)
            if c is not None:
                rv, rc = dict(rv), dict(rc)
                for key, x in vec.items():
                    P._add_into(rv, key, -c * x, ctx)
                for key, x in comb.items():
                    P._add_into(rc, key, -c * x, ctx)
            new_rows.append((p2, rv, rc))
        new_rows.append((piv, vec, comb))
        self.rows = new_rows


def coeff_span_check(N: int, extra: int = 2) -> Report:
    """Every basis monomial with |n|+m+k <= N is a combination of matrix
    coefficients of the tensor powers u^{T j}, j <= N + extra.

    Certificates map each monomial to {(j, row, col): coefficient}; each is
    re-verified by recombination.
    """
    out = Report("coeff_span")
    ctx = current()
    u = fundamental()
    reps = [tensor_power(u, j) for j in range(N + extra + 1)]
    columns: Dict[Tuple[int, int, int], Element] = {}
    blocks: Dict[Tuple[int, int], _Echelon] = {}
    for j, rep in enumerate(reps):
        for a in range(rep.dim):
            for b in range(rep.dim):
                e = rep.entries[a][b]
                if not e:
                    continue
                label = (j, a + 1, b + 1)
                columns[label] = e
                bideg = {_bidegree(m) for m in e.terms}
                if len(bideg) != 1:
                    out.fail(f"coefficient {label} is not bihomogeneous")
                    continue
                blocks.setdefault(bideg.pop(), _Echelon()).add(e.terms, label)
    targets = [
        m for m in P.monomials(N, N) if abs(m.n) + m.m + m.k <= N
    ]
    for m in targets:
        ech = blocks.get(_bidegree(m))
        if ech is None:
            out.fail(f"monomial {tuple(m)} not in span (no coefficients of that bidegree)")
            continue
        vec, comb = ech.reduce({m: ctx.one}, {})
        if vec:
            out.fail(f"monomial {tuple(m)} not in span")
            continue
        cert = {lab: -c for lab, c in comb.items()}
        recomb = sum((columns[lab].scale(c) for lab, c in cert.items()), Element())
        if recomb != Element({m: ctx.one}):
            out.fail(f"certificate for {tuple(m)} does not recombine")
            continue
        out.certificates[tuple(m)] = cert
    return out


__all__ = [
    "Representation", "Report", "fundamental", "trivial", "matrix_coeff", "validate",
    "tensor", "tensor_power", "antipode_coeff_check", "counit_rep_check",
    "is_intertwiner", "boson_lift", "boson_lift_check", "coeff_span_check",
]
