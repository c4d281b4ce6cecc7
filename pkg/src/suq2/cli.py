"""Command-line front end: ``suq2 <command> [args] [flags]``.

Exit codes: 0 success, 1 an identity/check failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import List, Optional

from . import boson as B
from . import polsuq2 as P
from . import qtorus as T
from . import reps as RP
from . import verify as VF
from .braided import BraidedElement, braided_flip, btp_star, delta, mu
from .expr import ParseError, as_element, parse_value, render
from .polsuq2 import Element
from .scalar import Context, Scalar, is_number, using

EXPR_COMMANDS = ("nf", "star", "deg", "eps", "haar", "S", "R", "theta", "tau", "sigma", "delta",
                 "flip", "mu", "kappa", "deltaB", "haarB", "psi", "pi")
REP_COMMANDS = ("lift", "validate-rep", "tensor-rep")
EXPERIMENTS = ("boca", "phi0", "rho", "flip", "growth", "star", "spectrum", "commutation", "multiplier")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="suq2", description="Symbolic braided SU_q(2) toolkit.")
    p.add_argument("command", help="one of: " + ", ".join(EXPR_COMMANDS + REP_COMMANDS + ("verify", "qtorus")))
    p.add_argument("args", nargs="*", help="expression, representation, suite or experiment")
    p.add_argument("--mode", choices=("exact", "numeric"))
    p.add_argument("--r", dest="r", help="substitute r = p/q into an exact result")
    p.add_argument("--sigma", type=int, choices=(1, -1), help="sign of Re q (+1 or -1)")
    p.add_argument("--q", dest="q", help="numeric q as re,im (use --q=-0.3,0.4 for a leading minus)")
    p.add_argument("--dps", type=int, help="numeric working precision in digits (default: double)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-degree", type=int)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--time", help="time t for tau/sigma, e.g. 0.5i or 0.3; write --time=-1i for a leading minus")
    p.add_argument("--inverse", action="store_true", help="inverse map (theta, flip)")
    p.add_argument("--d", type=int, default=3, help="root-of-unity order for qtorus")
    p.add_argument("--n", type=int, default=1, help="numerator of zeta = exp(2 pi i n/d)")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--samples", type=int, default=64, help="grid size per torus axis")
    p.add_argument("--R", dest="R", type=int, default=6, help="depth for qtorus star")
    p.add_argument("--z", help="complex z for qtorus multiplier, re,im")
    p.add_argument("--csv", action="store_true", help="CSV output for qtorus growth")
    return p


def _complex_pair(text: str) -> complex:
    try:
        parts = [float(s) for s in text.split(",")]
    except ValueError:
        raise UsageError(f"expected re,im, got {text!r}")
    if len(parts) == 1:
        return complex(parts[0])
    if len(parts) != 2:
        raise UsageError(f"expected re,im, got {text!r}")
    return complex(parts[0], parts[1])


def _time(text: Optional[str]) -> complex:
    if text is None:
        raise UsageError("--time is required for tau and sigma")
    t = text.strip().replace(" ", "").replace("i", "j")
    if t.endswith("j") and t[:-1] in ("", "+", "-"):
        t = t[:-1] + "1j"
    try:
        return complex(t)
    except ValueError:
        raise UsageError(f"cannot read time {text!r}")


def make_context(ns) -> Context:
    mode = ns.mode or ("numeric" if ns.q is not None else "exact")
    if mode == "exact":
        if ns.q is not None:
            raise UsageError("--q needs --mode numeric")
        if ns.dps is not None:
            raise UsageError("--dps needs --mode numeric")
        return Context(sigma=ns.sigma or 1)
    if ns.q is None:
        raise UsageError("--mode numeric needs --q re,im")
    if ns.r is not None:
        raise UsageError("--r only applies in exact mode")
    try:
        return Context.numeric(_complex_pair(ns.q), ns.sigma, ns.dps)
    except ValueError as exc:
        raise UsageError(str(exc))


# ---------------------------------------------------------------------------
# results
# ---------------------------------------------------------------------------


def _subst_r(x, r: Fraction):
    def f(c):
        return c.subs(r=r) if isinstance(c, Scalar) else c

    if isinstance(x, Scalar):
        return f(x)
    if isinstance(x, BraidedElement):
        return BraidedElement(x.order, {k: f(c) for k, c in x.terms.items()})
    if hasattr(x, "terms"):
        return type(x)({k: f(c) for k, c in x.terms.items()})
    return x


def _to_json(x):
    if isinstance(x, Scalar) or is_number(x):
        return P.coef_to_json(x)
    if isinstance(x, (int, str)) or x is None:
        return x
    if isinstance(x, dict):
        return {str(k): _to_json(v) for k, v in x.items()}
    if isinstance(x, list):
        return [_to_json(v) for v in x]
    return x.to_json()


def _need(x, kinds, what):
    if not isinstance(x, kinds):
        raise UsageError(f"{what} expects {' or '.join(k.__name__ for k in kinds)}, got {type(x).__name__}")
    return x


def _as_b(x):
    x = as_element(x)
    if isinstance(x, Element):
        return B.kappa(x)
    return _need(x, (B.BElement,), "boson command")


def apply_command(cmd: str, x, ns):
    """Run an expression command on a parsed value; returns the result value."""
    if cmd == "nf":
        return x
    if cmd == "star":
        x = as_element(x)
        if isinstance(x, BraidedElement):
            return btp_star(x)
        if isinstance(x, B.BElement):
            return B.b_star(x)
        return P.star(_need(x, (Element,), cmd))
    if cmd == "deg":
        x = as_element(x)
        if isinstance(x, B.BElement):
            degs = sorted({b.deg for b in x.terms})
            return degs[0] if len(degs) == 1 else {d: B.BElement({b: c for b, c in x.terms.items() if b.deg == d}) for d in degs}
        x = _need(x, (Element,), cmd)
        split = P.degree_split(x)
        return next(iter(split)) if len(split) == 1 else split
    if cmd in ("eps", "haar", "S", "R", "theta", "tau", "sigma", "kappa"):
        x = as_element(x)
        if cmd == "haar" and isinstance(x, B.BElement):
            return B.haar_B(x)
        x = _need(x, (Element,), cmd)
        if cmd == "eps":
            return P.counit(x)
        if cmd == "haar":
            return P.haar(x)
        if cmd == "S":
            return P.antipode(x)
        if cmd == "R":
            return P.unitary_antipode(x)
        if cmd == "theta":
            return P.residual(x, inverse=ns.inverse)
        if cmd == "kappa":
            return B.kappa(x)
        t = _time(ns.time)
        return P.tau(x, t) if cmd == "tau" else P.sigma_h(x, t)
    if cmd == "delta":
        x = as_element(x)
        if isinstance(x, B.BElement):
            return B.delta_B(x)
        return delta(_need(x, (Element,), cmd))
    if cmd == "flip":
        return braided_flip(_need(x, (BraidedElement,), cmd), inverse=ns.inverse)
    if cmd == "mu":
        return mu(_need(x, (BraidedElement,), cmd))
    if cmd == "psi":
        return B.psi(_need(x, (BraidedElement,), cmd))
    if cmd == "deltaB":
        return B.delta_B(_as_b(x))
    if cmd == "haarB":
        return B.haar_B(_as_b(x))
    if cmd == "pi":
        return B.pi_char(_as_b(x))
    raise UsageError(f"unknown command {cmd!r}")


def _render_any(x) -> str:
    if isinstance(x, dict):
        return "\n".join(f"{k}: {_render_any(v)}" for k, v in x.items())
    if isinstance(x, int):
        return str(x)
    return render(x)


# ---------------------------------------------------------------------------
# representations
# ---------------------------------------------------------------------------


def load_rep(text: str) -> RP.Representation:
    s = text.strip()
    if s == "u":
        return RP.fundamental()
    if s.startswith("u^T"):
        try:
            j = int(s[3:])
        except ValueError:
            raise UsageError(f"bad tensor power in {text!r}")
        return RP.tensor_power(RP.fundamental(), j)
    if s.startswith("trivial"):
        w = int(s.split(":", 1)[1]) if ":" in s else 0
        return RP.trivial(w)
    try:
        with open(s) as fh:
            return RP.Representation.from_json(json.load(fh))
    except FileNotFoundError:
        raise UsageError(f"unknown representation {text!r} (use u, u^T<j>, trivial[:w] or a JSON file)")


def _render_matrix(entries, weights) -> str:
    lines = [f"weights: {list(weights)}"]
    for i, row in enumerate(entries, start=1):
        for j, e in enumerate(row, start=1):
            if e:
                lines.append(f"[{i},{j}] {render(e)}")
    return "\n".join(lines)


def _report_json(rpt) -> dict:
    return {"name": rpt.name, "pass": rpt.ok, "failures": rpt.failures}


def run_rep_command(ns, out) -> int:
    if ns.command == "tensor-rep":
        if len(ns.args) != 2:
            raise UsageError("tensor-rep needs two representations")
        rep = RP.tensor(load_rep(ns.args[0]), load_rep(ns.args[1]))
        if ns.format == "json":
            out.write(json.dumps(rep.to_json()) + "\n")
        else:
            out.write(_render_matrix(rep.entries, rep.weights) + "\n")
        return 0
    if len(ns.args) != 1:
        raise UsageError(f"{ns.command} needs one representation")
    rep = load_rep(ns.args[0])
    if ns.command == "lift":
        v = RP.boson_lift(rep)
        if ns.format == "json":
            out.write(json.dumps({"weights": rep.weights,
                                  "entries": [[e.to_json() for e in row] for row in v]}) + "\n")
        else:
            out.write(_render_matrix(v, rep.weights) + "\n")
        return 0
    reports = [RP.validate(rep), RP.antipode_coeff_check(rep), RP.counit_rep_check(rep)]
    ok = all(r.ok for r in reports)
    if ns.format == "json":
        out.write(json.dumps({"pass": ok, "reports": [_report_json(r) for r in reports]}) + "\n")
    else:
        for r in reports:
            out.write(f"{'PASS' if r.ok else 'FAIL'}  {r.name}\n")
            if not r.ok:
                out.write(f"      {r.failures[0]}\n")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# qtorus experiments
# ---------------------------------------------------------------------------


def _cmatrix(M) -> list:
    return [[[float(c.real), float(c.imag)] for c in row] for row in M]


def run_experiment(name: str, ns) -> dict:
    d, n = ns.d, ns.n
    if name == "boca":
        rep = T.boca(d, n)
        res = rep.commutation_residual()
        return {"experiment": "boca", "params": {"d": d, "n": n}, "max_ratio": res, "bound": 1e-12,
                "pass": res <= 1e-12, "U0": _cmatrix(rep.U0), "V0": _cmatrix(rep.V0)}
    if name == "phi0":
        rep = T.boca(d, n)
        err = max(float(abs(T.phi0(rep.word(a, b), rep) - rep.word(b, a)).max())
                  for a in range(d) for b in range(d))
        return {"experiment": "phi0", "params": {"d": d, "n": n}, "max_ratio": err, "bound": 1e-12,
                "pass": err <= 1e-12}
    if name == "rho":
        r = T.rho_measure(d, n)
        ok = r.pairing_error <= 1e-9 and abs(r.total_variation - d) <= 1e-9
        return {"experiment": "rho", "params": {"d": d, "n": n}, "max_ratio": r.pairing_error,
                "bound": 1e-9, "pass": ok, "total_variation": r.total_variation}
    if name == "flip":
        return T.flip_bound_check(d, n, trials=ns.trials, samples=ns.samples, seed=ns.seed).to_json()
    if name == "growth":
        series = T.flip_growth_series()
        return {"experiment": "growth", "params": {}, "series": series,
                "max_ratio": max(r for _, r in series), "bound": None, "pass": True}
    if name == "star":
        s = T.star_sequence(R=ns.R, theta=T.golden_rotation())
        worst = max(max(a, b) * R for R, (a, b) in enumerate(s.residuals, start=1))
        return {"experiment": "star", "params": {"R": ns.R, "theta": "golden"}, "n": s.n, "m": s.m,
                "residuals": s.residuals, "max_ratio": worst, "bound": 1.0, "pass": s.ok}
    if name == "spectrum":
        q0 = _complex_pair(ns.q) if ns.q else 0.5
        return T.spectrum_eval_bound(q0, d=max(d, 2), n=n, seed=ns.seed).to_json()
    if name == "commutation":
        import cmath

        res = T.torus_commutation_residual(cmath.exp(2j * cmath.pi * n / d))
        return {"experiment": "commutation", "params": {"d": d, "n": n}, "max_ratio": res,
                "bound": 1e-10, "pass": res <= 1e-10}
    if name == "multiplier":
        z = _complex_pair(ns.z) if ns.z else 0.5
        m = T.multiplier_gz(z)
        return {"experiment": "multiplier", "params": {"z": [z.real, z.imag]},
                "max_ratio": m.l1_norm, "bound": m.cb_bound, "pass": m.l1_norm <= m.cb_bound + 1e-12,
                "values": {str(k): [v.real, v.imag] for k, v in sorted(m.values.items())}}
    raise UsageError(f"unknown experiment {name!r}; choose from {', '.join(EXPERIMENTS)}")


def _experiment_text(rep: dict) -> str:
    if rep["experiment"] == "growth":
        return "\n".join(f"d={d}  ratio={r:.4f}" for d, r in rep["series"])
    lines = [f"{rep['experiment']}: {'PASS' if rep['pass'] else 'FAIL'}",
             f"  params: {rep['params']}", f"  max_ratio: {rep['max_ratio']}", f"  bound: {rep['bound']}"]
    if "n" in rep and isinstance(rep["n"], list):
        lines += [f"  n: {rep['n']}", f"  m: {rep['m']}"]
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# main
# ---------------------------------------------------------------------------


def run(argv: List[str], out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        ns = build_parser().parse_args(argv)
        ctx = make_context(ns)
        r = None
        if ns.r is not None:
            try:
                r = Fraction(ns.r)
            except (ValueError, ZeroDivisionError):
                raise UsageError(f"--r expects p/q, got {ns.r!r}")
            if not 0 < r < 1:
                raise UsageError("--r must lie in (0, 1)")
        with using(ctx):
            return _dispatch(ns, r, out)
    except UsageError as exc:
        err.write(f"suq2: usage error: {exc}\n")
        return 2
    except ParseError as exc:
        err.write(f"suq2: parse error: {exc}\n")
        return 2
    except (ValueError, TypeError) as exc:
        err.write(f"suq2: {exc}\n")
        return 2


def _dispatch(ns, r, out) -> int:
    cmd = ns.command
    if cmd == "verify":
        if len(ns.args) != 1 or ns.args[0] not in VF.SUITES:
            raise UsageError(f"verify needs one suite: {', '.join(VF.SUITES)}")
        res = VF.run_suite(ns.args[0], max_degree=ns.max_degree, seed=ns.seed)
        out.write((json.dumps(res.to_json()) if ns.format == "json" else res.to_text()) + "\n")
        return 0 if res.ok else 1
    if cmd == "qtorus":
        if len(ns.args) != 1:
            raise UsageError(f"qtorus needs one experiment: {', '.join(EXPERIMENTS)}")
        rep = run_experiment(ns.args[0], ns)
        if ns.csv and rep["experiment"] == "growth":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["d", "ratio"])
            w.writerows(rep["series"])
            out.write(buf.getvalue())
        elif ns.format == "json":
            out.write(json.dumps(rep) + "\n")
        else:
            out.write(_experiment_text(rep) + "\n")
        return 0 if rep["pass"] else 1
    if cmd in REP_COMMANDS:
        return run_rep_command(ns, out)
    if cmd not in EXPR_COMMANDS:
        raise UsageError(f"unknown command {cmd!r}")
    if len(ns.args) != 1:
        raise UsageError(f"{cmd} needs exactly one expression")
    x = parse_value(ns.args[0])
    res = apply_command(cmd, x, ns)
    if r is not None:
        res = {k: _subst_r(v, r) for k, v in res.items()} if isinstance(res, dict) else _subst_r(res, r)
    if ns.format == "json":
        out.write(json.dumps({"command": cmd, "input": ns.args[0], "result": _to_json(res),
                              "text": _render_any(res)}) + "\n")
    else:
        out.write(_render_any(res) + "\n")
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
