"""Verification suites shared by the CLI and the test-suite.

Each suite returns a :class:`SuiteResult`: a list of named checks, each with
the first counterexample found.  Checks inside a suite are independent and
run on a thread pool capped by ``SUQ2_THREADS`` (default 1); results keep
their declaration order.
"""

from __future__ import annotations

import contextvars
import os
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, List, Optional

import numpy as np

from . import boson as B
from . import polsuq2 as P
from . import qtorus as T
from . import reps as RP
from .braided import (BraidedElement, braided_flip, btp_star, delta, delta_leg, map_leg,
                      map_legs, mu, random_braided, tensor)
from .polsuq2 import Element, antipode, counit, haar, mul, star
from .scalar import Context, current, numeric_eval, using

SUITES = ("hopf", "haar", "polar", "reps", "boson", "qtorus", "modes")


@dataclass
class Check:
    label: str
    ok: bool
    counterexample: Optional[str] = None
    seconds: float = 0.0
    data: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"label": self.label, "pass": self.ok, "seconds": round(self.seconds, 4)}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if self.data:
            out["data"] = self.data
        return out


@dataclass
class SuiteResult:
    suite: str
    params: dict
    checks: List[Check]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def first_failure(self) -> Optional[Check]:
        return next((c for c in self.checks if not c.ok), None)

    def to_json(self) -> dict:
        return {"suite": self.suite, "params": self.params, "pass": self.ok,
                "checks": [c.to_json() for c in self.checks]}

    def to_text(self) -> str:
        lines = []
        for c in self.checks:
            mark = "PASS" if c.ok else "FAIL"
            lines.append(f"{mark}  {c.label}  ({c.seconds:.2f}s)")
            if not c.ok:
                lines.append(f"      counterexample: {c.counterexample}")
        lines.append(f"{self.suite}: {'ok' if self.ok else 'FAILED'}")
        return "\n".join(lines)


def threads() -> int:
    try:
        return max(1, int(os.environ.get("SUQ2_THREADS", "1")))
    except ValueError:
        return 1


def _timed(label: str, fn: Callable[[], object]) -> Check:
    """fn returns None on success, a counterexample string, or a Check-like tuple."""
    t0 = time.perf_counter()
    try:
        res = fn()
    except Exception as exc:  # a crash is a failed identity, reported with its message
        return Check(label, False, f"{type(exc).__name__}: {exc}", time.perf_counter() - t0)
    data = {}
    if isinstance(res, tuple):
        res, data = res
    return Check(label, res is None, res, time.perf_counter() - t0, data)


def run_checks(items: List[tuple]) -> List[Check]:
    """items: (label, fn).  Each task runs in a copy of the caller's context."""
    n = threads()
    if n <= 1:
        return [_timed(label, fn) for label, fn in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        futs = [ex.submit(contextvars.copy_context().run, _timed, label, fn) for label, fn in items]
        return [f.result() for f in futs]


def _first(cases: Iterable, pred: Callable[[object], bool], show=str) -> Optional[str]:
    for x in cases:
        if not pred(x):
            return show(x)
    return None


def _basis(max_degree: int) -> List[Element]:
    return [Element({m: current().one}) for m in P.monomials(max_degree, max_degree)]


def _randoms(seed: int, count: int, size: int = 3) -> List[Element]:
    rng = random.Random(seed)
    return [P.random_element(rng, size=size) for _ in range(count)]


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------


def hopf(max_degree: int = 2, seed: int = 0, n_random: int = 200) -> SuiteResult:
    cases = _basis(max_degree) + _randoms(seed, n_random)

    def counit_law(x):
        D = delta(x)
        return map_leg(D, 0, "eps") == x and map_leg(D, 1, "eps") == x

    def antipode_law(x):
        D = delta(x)
        e = Element.scalar(counit(x))
        return mu(map_leg(D, 0, "S")) == e and mu(map_leg(D, 1, "S")) == e

    def coassoc(x):
        D = delta(x)
        return delta_leg(D, 0) == delta_leg(D, 1)

    def anti_comult(x):
        return delta(antipode(x)) == map_legs(braided_flip(delta(x)), "S", "S")

    def star_s_star_s(x):
        return star(antipode(star(antipode(x)))) == x

    def delta_star(x):
        return delta(star(x)) == btp_star(delta(x))

    checks = [
        ("counit law (eps x id)Delta = id = (id x eps)Delta", counit_law),
        ("antipode law mu(S x id)Delta = eps(.)1 = mu(id x S)Delta", antipode_law),
        ("coassociativity (Delta x id)Delta = (id x Delta)Delta", coassoc),
        ("Delta S = (S x S) flip Delta", anti_comult),
        ("*S*S = id", star_s_star_s),
        ("Delta is a *-map into the braided tensor product", delta_star),
    ]
    return SuiteResult("hopf", {"max_degree": max_degree, "seed": seed, "random": n_random},
                       run_checks([(lab, lambda f=f: _first(cases, f)) for lab, f in checks]))


def haar_suite(max_degree: int = 3, seed: int = 0, n_random: int = 50, max_m: int = 6) -> SuiteResult:
    ctx = current()
    cases = _basis(max_degree)
    extra = cases + _randoms(seed, n_random)

    def moments():
        one = ctx.one
        for m in range(max_m + 1):
            x = P.product(*([P.gamma()] * m + [P.gamma_star()] * m)) if m else P.one()
            r2 = ctx.rpow(2)
            want = (one - r2) / (one - ctx.rpow(2 * (m + 1))) if ctx.exact else (1 - ctx.r ** 2) / (1 - ctx.r ** (2 * m + 2))
            got = haar(x)
            if (got != want) if ctx.exact else abs(got - want) > 1e-12:
                return f"m={m}: h = {got}, expected {want}"
        return None

    def invariance(x):
        D = delta(x)
        h = Element.scalar(haar(x))
        return map_leg(D, 0, "h") == h and map_leg(D, 1, "h") == h

    def eq(fn):
        return lambda x: haar(fn(x)) == haar(x)

    checks = [
        ("h(g^m g*^m) = (1-r^2)/(1-r^(2(m+1))), m <= %d" % max_m, moments),
        ("invariance (id x h)Delta = h(.)1 = (h x id)Delta",
         lambda: _first(cases, invariance)),
        ("h o S = h", lambda: _first(extra, eq(antipode))),
        ("h o R = h", lambda: _first(extra, eq(P.unitary_antipode))),
        ("h o theta = h", lambda: _first(extra, eq(P.residual))),
        ("h(x* x) >= 0 (positivity, numeric at q = 0.3+0.4i)", lambda: _positivity(seed)),
    ]
    return SuiteResult("haar", {"max_degree": max_degree, "seed": seed, "random": n_random},
                       run_checks(checks))


def _positivity(seed: int, count: int = 50) -> Optional[str]:
    with using(Context.numeric(0.3 + 0.4j)):
        for x in _randoms(seed, count):
            h = complex(haar(mul(star(x), x)))
            if h.real < -1e-12 or abs(h.imag) > 1e-10 * max(1.0, abs(h)):
                return f"h(x* x) = {h} for x = {x}"
    return None


def failure_witness() -> Element:
    """Delta(R(alpha)) - (R x R) flip Delta(alpha), as an order-2 braided element."""
    a = P.alpha()
    return delta(P.unitary_antipode(a)) - map_legs(braided_flip(delta(a)), "R", "R")


def polar(max_degree: int = 3, seed: int = 0) -> SuiteResult:
    cases = _basis(max_degree)

    def decomposition(x):
        rhs = P.unitary_antipode(P.tau(P.residual(x, inverse=True), -0.5j))
        return antipode(x) == rhs

    def r_gamma():
        for s in (1, -1):
            with using(Context(sigma=s)):
                if P.unitary_antipode(P.gamma()) != P.gamma().scale(-s):
                    return f"sigma={s}: R(g) = {P.unitary_antipode(P.gamma())}"
        return None

    def witness():
        ctx = current()
        w = failure_witness()
        want = tensor(P.gamma(), P.gamma_star()).scale(ctx.q * (ctx.zeta - ctx.one))
        if w != want:
            return f"witness = {w}"
        if not w:
            return "witness vanishes although zeta != 1"
        # numerically: vanishes exactly when v^2 = 1
        for q0, zero in ((0.5, True), (-0.5, True), (0.3 + 0.4j, False), (0.6j, False)):
            with using(Context.numeric(q0, sigma=1 if q0.real >= 0 else -1)):
                w = failure_witness()
                small = all(abs(c) < 1e-14 for c in w.terms.values())
                if small != zero:
                    return f"q0={q0}: witness {'nonzero' if zero else 'zero'}"
        return None

    def r_involutive(x):
        return P.unitary_antipode(P.unitary_antipode(x)) == x

    checks = [
        ("S = R tau_{-i/2} theta^-1", lambda: _first(cases, decomposition)),
        ("R(g) = -sigma g for sigma = +1, -1", r_gamma),
        ("R fails to be anti-comultiplicative: witness = q(zeta-1) g (x) g*", witness),
        ("R o R = id", lambda: _first(cases, r_involutive)),
    ]
    return SuiteResult("polar", {"max_degree": max_degree, "seed": seed}, run_checks(checks))


def reps_suite(max_degree: int = 2, seed: int = 0) -> SuiteResult:
    u = RP.fundamental()
    uu = RP.tensor(u, u)
    uuu = RP.tensor(uu, u)

    def rep_ok(report_fn, *reps):
        def run():
            for name, rep in reps:
                rpt = report_fn(rep)
                if not rpt.ok:
                    return f"{name}: {rpt.failures[0]}"
            return None
        return run

    def span():
        rpt = RP.coeff_span_check(max_degree)
        if not rpt.ok:
            return rpt.failures[0]
        return None, {"certificates": len(rpt.certificates)}

    checks = [
        ("validate: unitarity, invariance, corepresentation",
         rep_ok(RP.validate, ("u", u), ("u T u", uu))),
        ("S(u_np) = star(u_pn)",
         rep_ok(RP.antipode_coeff_check, ("u", u), ("u T u", uu), ("u T u T u", uuu))),
        ("(eps x id) u = identity matrix",
         rep_ok(RP.counit_rep_check, ("u", u), ("u T u", uu), ("u T u T u", uuu))),
        (f"matrix coefficients of u^(T j) span degree <= {max_degree}", span),
        ("boson lift is a unitary Delta_B corepresentation",
         rep_ok(RP.boson_lift_check, ("u", u), ("u T u", uu))),
    ]
    return SuiteResult("reps", {"max_degree": max_degree}, run_checks(checks))


def boson_suite(max_degree: int = 2, seed: int = 0, n_random: int = 20, max_l: int = 2) -> SuiteResult:
    ctx = current()
    basis = _basis(max_degree)
    bbasis = [B.BElement({b: ctx.one}) for b in B.bmonomials(max_degree, max_degree, max_l)]
    show = lambda e: str(e)

    def psi_delta(x):
        return B.psi(delta(x)) == B.delta_B(B.kappa(x))

    def slice_compat():
        rng = random.Random(seed)
        for _ in range(n_random):
            X = random_braided(rng)
            if B.slice_hB(B.psi(X), 1) != B.slice_kappa_h(X):
                return str(X)
        return None

    def bi_invariance(e):
        D = B.delta_B(e)
        h = B.BElement.scalar(B.haar_B(e))
        return B.slice_hB(D, 0) == h and B.slice_hB(D, 1) == h

    def coassoc(e):
        D = B.delta_B(e)
        return B.delta_B_leg(D, 0) == B.delta_B_leg(D, 1)

    def dichotomy(e):
        (b,) = e.terms
        return (B.slice_h_torus(B.delta_Btilde(e)) == e) == (b.l == 0)

    gens = [P.alpha(), P.gamma(), P.alpha_star(), P.gamma_star()]

    def eq_id_pi():
        for a in gens[:2]:
            k = B.kappa(a)
            (b,) = k.terms
            if B.id_tensor_pi(B.delta_Btilde(k)).terms != {(b, 0): ctx.one}:
                return str(a)
        return None

    def eq_pi_id():
        for a in gens:
            k = B.kappa(a)
            (b,) = k.terms
            if B.pi_tensor_id(B.delta_Btilde(k)).terms != {(b.deg, b): ctx.one}:
                return str(a)
        return None

    def tilde(e):
        return B.delta_Btilde(e) == B.delta_B(e)

    checks = [
        ("psi Delta = Delta_B kappa", lambda: _first(basis, psi_delta)),
        ("(id x h_B) psi = kappa (id x h)", slice_compat),
        ("Delta_B coassociative", lambda: _first(bbasis, coassoc, show)),
        ("h_B bi-invariant", lambda: _first(bbasis, bi_invariance, show)),
        ("(id x h_T pi) Delta_B~ (x) = x iff x lies in A", lambda: _first(bbasis, dichotomy, show)),
        ("(id x pi) Delta_B~ kappa(a) = kappa(a) (x) 1 on generators", eq_id_pi),
        ("(pi x id) Delta_B~ gives the T-degree on generators", eq_pi_id),
        ("Delta_B~ = Psi (Delta x id) reproduces Delta_B", lambda: _first(bbasis, tilde, show)),
    ]
    return SuiteResult("boson", {"max_degree": max_degree, "max_l": max_l, "seed": seed},
                       run_checks(checks))


def qtorus_suite(seed: int = 0, trials: int = 100, R: int = 6) -> SuiteResult:
    def phi0():
        worst = 0.0
        for d in (2, 3, 5, 7):
            rep = T.boca(d)
            for n in range(d):
                for m in range(d):
                    err = float(abs(T.phi0(rep.word(n, m), rep) - rep.word(m, n)).max())
                    worst = max(worst, err)
                    if err > 1e-12:
                        return f"d={d}, (n,m)=({n},{m}): error {err:.3g}"
        return None, {"max_error": worst}

    def rho():
        for d in (2, 3, 5):
            r = T.rho_measure(d)
            if r.pairing_error > 1e-9 or abs(r.total_variation - d) > 1e-9:
                return f"d={d}: pairing {r.pairing_error:.3g}, variation {r.total_variation}"
        return None

    def commutation():
        worst = max(T.boca(d).commutation_residual() for d in range(1, 17))
        grid = T.torus_commutation_residual(complex(np.exp(2j * np.pi * 0.381966)))
        if worst > 1e-12 or grid > 1e-10:
            return f"Boca residual {worst:.3g}, grid residual {grid:.3g}"
        return None, {"boca": worst, "grid": grid}

    def flip():
        ratios = {}
        for d in (2, 3, 5):
            rpt = T.flip_bound_check(d, trials=trials, seed=seed)
            ratios[d] = rpt.max_ratio
            if not rpt.passed:
                return f"d={d}: ratio {rpt.max_ratio} > {rpt.bound}"
        return None, {"max_ratio": ratios}

    def star_seq():
        s = T.star_sequence(R=R, theta=T.golden_rotation())
        if not s.ok:
            return f"residuals {s.residuals}"
        return None, {"n": s.n, "m": s.m}

    def spectrum():
        rpt = T.spectrum_eval_bound(0.5, seed=seed)
        if abs(rpt.bound - 9) > 1e-12 or not rpt.passed:
            return f"max {rpt.max_ratio} vs bound {rpt.bound}"
        return None, {"max_norm": rpt.max_ratio}

    checks = [
        ("phi0(U0^n V0^m) = U0^m V0^n, d in 2,3,5,7", phi0),
        ("rho pairs to zeta^(nm) with total variation d", rho),
        ("U0 V0 = zeta V0 U0 and grid torus commutation", commutation),
        ("||flip(a)|| <= d^2 ||a||, d in 2,3,5", flip),
        (f"double-limit sequences (zeta^(n m) -> 1 one way, -1 the other) at the golden rotation, R <= {R}", star_seq),
        ("evaluation on Sp(gamma) bounded by ((1+|q|)/(1-|q|))^2 = 9", spectrum),
    ]
    return SuiteResult("qtorus", {"seed": seed, "trials": trials, "R": R}, run_checks(checks))


def cross_mode(seed: int = 0, count: int = 100, q0: complex = 0.3 + 0.4j, tol: float = 1e-10,
               dps: Optional[int] = 30) -> SuiteResult:
    """Exact result evaluated at q0 versus the same computation in numeric mode.

    Haar values of products can be ill-conditioned (large alternating
    coefficients of powers of g g*), so by default the numeric side runs with
    ``dps`` digits; ``dps=None`` uses plain complex floats.
    """
    exact = Context()
    num = Context.numeric(q0, dps=dps)
    with using(exact):
        xs = _randoms(seed, count)
        ys = _randoms(seed + 1, count)

    def num_el(x):
        return Element({m: num.coerce(c) for m, c in x.terms.items()})

    def rel(a, b, scale=1.0):
        # relative error; exact zeros fall back to an absolute bound on the scale
        a, b = complex(a), complex(b)
        return abs(a - b) <= tol * (abs(a) if a != 0 else scale)

    def rel_el(ex: Element, nu: Element) -> bool:
        scale = max([abs(complex(c)) for c in ex.terms.values()] + [1.0])
        return all(rel(ex.terms.get(k, 0), nu.terms.get(k, 0), scale)
                   for k in set(ex.terms) | set(nu.terms))

    ops = {
        "mul": lambda x, y: mul(x, y),
        "S": lambda x, y: antipode(x),
        "R": lambda x, y: P.unitary_antipode(x),
        "h": lambda x, y: haar(mul(x, y)),
    }

    def make(name, op):
        def run():
            for x, y in zip(xs, ys):
                with using(exact):
                    ex = op(x, y)
                with using(num):
                    nu = op(num_el(x), num_el(y))
                if isinstance(ex, Element):
                    if not rel_el(P.evaluate_element(ex, q0), nu):
                        return f"{name} on x = {x}"
                elif not rel(numeric_eval(ex, q0), nu):
                    return f"{name} on x = {x}: {ex} vs {nu}"
            return None
        return run

    return SuiteResult("modes", {"seed": seed, "count": count, "q0": [q0.real, q0.imag], "dps": dps},
                       run_checks([(f"{n}: exact then evaluated = numeric", make(n, op))
                                   for n, op in ops.items()]))


def run_suite(name: str, max_degree: Optional[int] = None, seed: int = 0) -> SuiteResult:
    kw = {"seed": seed}
    if name == "hopf":
        return hopf(max_degree if max_degree is not None else 2, **kw)
    if name == "haar":
        return haar_suite(max_degree if max_degree is not None else 3, **kw)
    if name == "polar":
        return polar(max_degree if max_degree is not None else 3, **kw)
    if name == "reps":
        return reps_suite(max_degree if max_degree is not None else 2, **kw)
    if name == "boson":
        return boson_suite(max_degree if max_degree is not None else 2, **kw)
    if name == "qtorus":
        return qtorus_suite(**kw)
    if name == "modes":
        return cross_mode(**kw)
    raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")


__all__ = ["Check", "SuiteResult", "SUITES", "hopf", "haar_suite", "polar", "reps_suite",
           "boson_suite", "qtorus_suite", "cross_mode", "failure_witness", "run_suite",
           "run_checks", "threads"]
