"""One test per acceptance criterion; each prints a PASS/FAIL line."""

import time

import pytest

from suq2 import polsuq2 as P
from suq2 import verify as VF
from suq2.braided import tensor
from suq2.scalar import Context, current, using


@pytest.fixture
def report(capsys):
    def emit(n, title, ok, detail="", mark=None):
        mark = mark or ("PASS" if ok else "FAIL")
        with capsys.disabled():
            print(f"\n[criterion {n}] {mark}  {title}{'  ' + detail if detail else ''}")
    return emit


def _suite(report, n, title, res, limit=None, seconds=None):
    ok = res.ok and (limit is None or seconds < limit)
    bad = res.first_failure()
    detail = f"{len(res.checks)} checks"
    if seconds is not None:
        detail += f", {seconds:.1f}s"
    if bad is not None:
        detail += f", first failure: {bad.label}: {bad.counterexample}"
    report(n, title, ok, detail)
    assert res.ok, res.to_text()
    if limit is not None:
        assert seconds < limit


def test_1_hopf(report):
    t0 = time.perf_counter()
    res = VF.hopf(max_degree=2, seed=0, n_random=200)
    _suite(report, 1, "Hopf suite", res, 60, time.perf_counter() - t0)


def test_2_haar(report):
    _suite(report, 2, "Haar suite", VF.haar_suite(max_degree=3, seed=0))


def test_3_polar(report):
    _suite(report, 3, "polar decomposition", VF.polar(max_degree=3, seed=0))


def test_4_failure_witness(report):
    ok = True
    with using(Context()):
        ctx = current()
        w = VF.failure_witness()
        ok &= w == tensor(P.gamma(), P.gamma_star()).scale(ctx.q * (ctx.zeta - ctx.one))
        ok &= bool(w)
    for q0, vanishes in ((0.5, True), (-0.5, True), (0.3 + 0.4j, False), (0.6j, False)):
        with using(Context.numeric(q0, sigma=-1 if q0.real < 0 else 1)):
            small = all(abs(c) < 1e-14 for c in VF.failure_witness().terms.values())
            ok &= small == vanishes
    report(4, "failure witness q(zeta-1) g (x) g*, zero iff v^2 = 1", ok)
    assert ok


def test_5_reps(report):
    _suite(report, 5, "representations", VF.reps_suite(max_degree=2))


def test_6_boson(report):
    _suite(report, 6, "bosonization", VF.boson_suite(max_degree=2, seed=0))


def test_7_qtorus(report):
    t0 = time.perf_counter()
    res = VF.qtorus_suite(seed=0, trials=100, R=6)
    _suite(report, 7, "quantum torus numerics", res, 120, time.perf_counter() - t0)


def test_8_cross_mode(report):
    res = VF.cross_mode(seed=0, count=100, q0=0.3 + 0.4j, tol=1e-10, dps=30)
    plain = VF.cross_mode(seed=0, count=100, q0=0.3 + 0.4j, tol=1e-10, dps=None)
    bad = plain.first_failure()
    note = "double precision alone: " + ("all within 1e-10" if bad is None else f"fails '{bad.label}'")
    _suite(report, 8, "exact vs numeric at q0 = 0.3+0.4i (30 digits)", res)
    report(8, "diagnostic", True, note, mark="NOTE")
