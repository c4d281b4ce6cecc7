import pytest

from suq2 import verify as VF
from suq2.braided import tensor
from suq2 import polsuq2 as P
from suq2.scalar import Context, current, using


def test_exception_counts_as_failure():
    def boom():
        raise ZeroDivisionError("nope")

    (c,) = VF.run_checks([("crash", boom)])
    assert not c.ok
    assert "ZeroDivisionError" in c.counterexample


def test_first_failure_and_text():
    res = VF.SuiteResult("demo", {}, VF.run_checks([("good", lambda: None), ("bad", lambda: "x=3"),
                                                    ("later", lambda: "y")]))
    assert not res.ok
    assert res.first_failure().label == "bad"
    text = res.to_text()
    assert "FAIL  bad" in text and "counterexample: x=3" in text
    assert res.to_json()["pass"] is False


def test_checks_keep_order_and_context_when_threaded(monkeypatch):
    monkeypatch.setenv("SUQ2_THREADS", "4")
    with using(Context(sigma=-1)):
        checks = VF.run_checks([(str(i), lambda i=i: None if current().sigma == -1 else "lost")
                                for i in range(12)])
    assert [c.label for c in checks] == [str(i) for i in range(12)]
    assert all(c.ok for c in checks)


def test_witness_value(exact):
    ctx = current()
    w = VF.failure_witness()
    assert w == tensor(P.gamma(), P.gamma_star()).scale(ctx.q * (ctx.zeta - ctx.one))


@pytest.mark.parametrize("q0,vanishes", [(0.5, True), (-0.5, True), (0.3 + 0.4j, False), (0.6j, False)])
def test_witness_numeric(q0, vanishes):
    with using(Context.numeric(q0, sigma=-1 if q0.real < 0 else 1)):
        w = VF.failure_witness()
        assert all(abs(c) < 1e-14 for c in w.terms.values()) == vanishes


@pytest.mark.parametrize("name", ["haar", "polar", "reps", "boson"])
def test_small_suites_pass(name):
    res = VF.run_suite(name, max_degree=1, seed=3)
    assert res.ok, res.first_failure()


def test_unknown_suite():
    with pytest.raises(ValueError):
        VF.run_suite("nothing", None, 0)
