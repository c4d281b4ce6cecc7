"""Numerics for the noncommutative torus, multipliers and the flip map.

Conventions: ``UV = zeta VU``.  At a primitive d-th root of unity
``zeta = exp(2 pi i n / d)`` the torus algebra is realised by
``U = z1 (x) U0`` and ``V = z2 (x) V0`` with the d x d cyclic shift ``U0`` and
``V0 = diag(zeta^k)``; norms are maxima of matrix norms over (z1, z2).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath
import numpy as np

Key = Tuple[int, int]


# ---------------------------------------------------------------------------
# torus elements
# ---------------------------------------------------------------------------


@dataclass
class TorusElement:
    """Finite sum of a_nm U^n V^m."""

    coeffs: Dict[Key, complex]
    zeta: complex

    def __add__(self, other: "TorusElement") -> "TorusElement":
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return TorusElement(out, self.zeta)

    def scale(self, c: complex) -> "TorusElement":
        return TorusElement({k: c * v for k, v in self.coeffs.items()}, self.zeta)

    def __mul__(self, other: "TorusElement") -> "TorusElement":
        # U^a V^b U^c V^d = zeta^(-b c) U^(a+c) V^(b+d)
        out: Dict[Key, complex] = {}
        for (a, b), x in self.coeffs.items():
            for (c, d), y in other.coeffs.items():
                key = (a + c, b + d)
                out[key] = out.get(key, 0) + x * y * self.zeta ** (-b * c)
        return TorusElement(out, self.zeta)

    def adjoint(self) -> "TorusElement":
        # (U^n V^m)* = V^-m U^-n = zeta^(-nm) U^-n V^-m
        return TorusElement(
            {(-n, -m): np.conj(c) * self.zeta ** (-n * m) for (n, m), c in self.coeffs.items()},
            self.zeta,
        )

    def close_to(self, other: "TorusElement", tol: float = 1e-12) -> bool:
        keys = set(self.coeffs) | set(other.coeffs)
        return all(abs(self.coeffs.get(k, 0) - other.coeffs.get(k, 0)) <= tol for k in keys)


def U(zeta: complex, power: int = 1) -> TorusElement:
    return TorusElement({(power, 0): 1.0}, zeta)


def V(zeta: complex, power: int = 1) -> TorusElement:
    return TorusElement({(0, power): 1.0}, zeta)


def random_torus_element(rng: np.random.Generator, zeta: complex, radius: int = 2,
                         terms: Optional[int] = None) -> TorusElement:
    keys = [(n, m) for n in range(-radius, radius + 1) for m in range(-radius, radius + 1)]
    if terms is not None:
        idx = rng.choice(len(keys), size=min(terms, len(keys)), replace=False)
        keys = [keys[i] for i in idx]
    c = rng.normal(size=len(keys)) + 1j * rng.normal(size=len(keys))
    return TorusElement(dict(zip(keys, c)), zeta)


# ---------------------------------------------------------------------------
# Boca representation
# ---------------------------------------------------------------------------


@dataclass
class BocaRep:
    d: int
    n: int
    U0: np.ndarray
    V0: np.ndarray

    @property
    def zeta(self) -> complex:
        return np.exp(2j * np.pi * self.n / self.d)

    def word(self, n: int, m: int) -> np.ndarray:
        return np.linalg.matrix_power(self.U0, n % self.d) @ np.linalg.matrix_power(self.V0, m % self.d)

    def commutation_residual(self) -> float:
        return float(np.linalg.norm(self.U0 @ self.V0 - self.zeta * self.V0 @ self.U0, 2))


def boca(d: int, n: int = 1) -> BocaRep:
    if d < 1 or math.gcd(n, d) != 1:
        raise ValueError(f"need gcd(n, d) = 1, got n={n}, d={d}")
    U0 = np.zeros((d, d), dtype=complex)
    for i in range(d):
        U0[i, (i + 1) % d] = 1
    zeta = np.exp(2j * np.pi * n / d)
    V0 = np.diag(zeta ** np.arange(d))
    return BocaRep(d, n, U0, V0)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("SUQ2_THREADS", "1")))
    except ValueError:
        return 1


def sample_points(samples: int = 64, n_random: int = 100, seed: int = 0) -> np.ndarray:
    """(P, 2) array of torus points: a samples x samples grid plus random points."""
    t = 2 * np.pi * np.arange(samples) / samples
    g1, g2 = np.meshgrid(t, t, indexing="ij")
    grid = np.stack([g1.ravel(), g2.ravel()], axis=1)
    rnd = np.random.default_rng(seed).uniform(0, 2 * np.pi, size=(n_random, 2))
    return np.exp(1j * np.concatenate([grid, rnd]))


def _symbol_norms(coeffs: Dict[Key, complex], rep: BocaRep, pts: np.ndarray,
                  chunk: int = 2048) -> np.ndarray:
    keys = list(coeffs)
    if not keys:
        return np.zeros(len(pts))
    mats = np.stack([rep.word(n, m) for n, m in keys])
    a = np.array([coeffs[k] for k in keys])
    ns = np.array([k[0] for k in keys])
    ms = np.array([k[1] for k in keys])
    out = np.empty(len(pts))
    for s in range(0, len(pts), chunk):
        p = pts[s:s + chunk]
        w = a[None, :] * p[:, :1] ** ns[None, :] * p[:, 1:] ** ms[None, :]
        M = np.einsum("pk,kij->pij", w, mats)
        # spectral norm via the top eigenvalue of M^H M; cheaper than svd here
        G = np.conj(np.swapaxes(M, 1, 2)) @ M
        out[s:s + chunk] = np.sqrt(np.maximum(np.linalg.eigvalsh(G)[:, -1], 0))
    return out


def torus_norm(x: TorusElement, rep: BocaRep, samples: int = 64, n_random: int = 100,
               seed: int = 0) -> float:
    """Sampled operator norm of x in the Boca representation."""
    if not np.isclose(x.zeta, rep.zeta):
        raise ValueError("element and representation use different zeta")
    pts = sample_points(samples, n_random, seed)
    return float(_symbol_norms(x.coeffs, rep, pts).max())


# ---------------------------------------------------------------------------
# phi0 and the flip
# ---------------------------------------------------------------------------


def _fourier(rep: BocaRep) -> Tuple[np.ndarray, np.ndarray]:
    d = rep.d
    k = np.arange(d)
    O = rep.zeta ** np.outer(k, k) / np.sqrt(d)  # O e_k = d^-1/2 sum_l zeta^(kl) e_l
    Ot = np.zeros((d, d))
    Ot[(-k) % d, k] = 1  # e_k -> e_-k
    return O, Ot


def phi0(x: np.ndarray, rep: BocaRep) -> np.ndarray:
    O, Ot = _fourier(rep)
    return Ot @ (O @ x @ O.conj().T).T @ Ot.conj().T


def flip_map(x: TorusElement) -> TorusElement:
    """U^n V^m -> V^n U^m = zeta^(-nm) U^m V^n."""
    return TorusElement({(m, n): c * x.zeta ** (-n * m) for (n, m), c in x.coeffs.items()}, x.zeta)


@dataclass
class Report:
    experiment: str
    params: dict
    max_ratio: float
    bound: float
    passed: bool
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"experiment": self.experiment, "params": self.params,
               "max_ratio": self.max_ratio, "bound": self.bound, "pass": self.passed}
        out.update(self.details)
        return out


def _parallel_map(fn, items):
    n = _threads()
    if n <= 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))


def flip_bound_check(d: int, n: int = 1, trials: int = 100, radius: int = 2,
                     samples: int = 64, seed: int = 0) -> Report:
    """||flip(a)|| <= d^2 ||a|| for random finitely supported a."""
    rep = boca(d, n)
    pts = sample_points(samples, 100, seed)
    rngs = [np.random.default_rng([seed, i]) for i in range(trials)]

    def trial(rng):
        a = random_torus_element(rng, rep.zeta, radius)
        return _symbol_norms(flip_map(a).coeffs, rep, pts).max() / _symbol_norms(a.coeffs, rep, pts).max()

    ratios = _parallel_map(trial, rngs)
    worst = float(max(ratios))
    return Report("flip", {"d": d, "n": n, "trials": trials, "radius": radius, "samples": samples,
                           "seed": seed}, worst, float(d * d), worst <= d * d)


def flip_growth_series(depths: Sequence[int] = (3, 5, 8, 13, 21, 34), samples: int = 24) -> List[Tuple[int, float]]:
    """Illustration only: along Fibonacci approximants F_{k-1}/F_k of the golden
    rotation, the flip ratio for the chirp a = sum_{j<d} zeta^(j(j-1)/2) U^j V^j.
    The ratio keeps growing with d."""
    fib = [1, 1]
    while len(fib) < 64:
        fib.append(fib[-1] + fib[-2])
    out = []
    for d in depths:
        num = fib[fib.index(d) - 1] if d in fib else 1
        if math.gcd(num, d) != 1:
            num = 1
        rep = boca(d, num)
        zeta = rep.zeta
        a = TorusElement({(j, j): zeta ** (j * (j - 1) // 2) for j in range(d)}, zeta)
        pts = sample_points(samples, 20, 0)
        ratio = _symbol_norms(flip_map(a).coeffs, rep, pts).max() / _symbol_norms(a.coeffs, rep, pts).max()
        out.append((d, float(ratio)))
    return out


# ---------------------------------------------------------------------------
# multipliers on Z and Z^2
# ---------------------------------------------------------------------------


@dataclass
class Multiplier:
    values: Dict[int, complex]
    l1_norm: float  # sum over all of Z, closed form
    cb_bound: float


def g_z(z: complex, n: int) -> complex:
    if n >= 0:
        return z ** n if n else 1.0
    return np.conj(z) ** (-n)


def multiplier_gz(z: complex, truncation: int = 20) -> Multiplier:
    z = complex(z)
    if abs(z) > 1 + 1e-15:
        raise ValueError("need |z| <= 1")
    values = {n: complex(g_z(z, n)) for n in range(-truncation, truncation + 1)}
    a = abs(z)
    if a < 1:
        l1 = (1 + a) / (1 - a)
        return Multiplier(values, l1, l1)
    return Multiplier(values, math.inf, 1.0)


@dataclass
class RhoMeasure:
    d: int
    n: int
    atoms: List[Tuple[complex, complex, complex]]  # (point1, point2, mass)
    pairing_error: float
    total_variation: float

    def integrate(self, f) -> complex:
        return sum(w * f(p1, p2) for p1, p2, w in self.atoms)


def rho_measure(d: int, n: int = 1, check_radius: Optional[int] = None) -> RhoMeasure:
    """rho = d^-1 sum_{k,l} zeta^(-kl) delta_(zeta^k, zeta^l)."""
    if math.gcd(n, d) != 1:
        raise ValueError("need gcd(n, d) = 1")
    zeta = np.exp(2j * np.pi * n / d)
    atoms = [(zeta ** k, zeta ** l, zeta ** (-k * l) / d) for k in range(d) for l in range(d)]
    rad = 2 * d if check_radius is None else check_radius
    err = 0.0
    for a in range(-rad, rad + 1):
        for b in range(-rad, rad + 1):
            val = sum(w * p1 ** (-a) * p2 ** (-b) for p1, p2, w in atoms)
            err = max(err, abs(val - zeta ** (a * b)))
    tv = float(sum(abs(w) for _, _, w in atoms))
    return RhoMeasure(d, n, atoms, err, tv)


# ---------------------------------------------------------------------------
# the (star_R) sequences
# ---------------------------------------------------------------------------


def golden_rotation(dps: int = 120):
    with mpmath.workdps(dps):
        return (mpmath.sqrt(5) - 1) / 2


@dataclass
class StarSequence:
    n: List[int]
    m: List[int]
    residuals: List[Tuple[float, float]]  # per R: (max |zeta^(n_s m_R) - 1|, max |zeta^(n_R m_t) + 1|)

    @property
    def ok(self) -> bool:
        return all(a <= 1 / R and b <= 1 / R for R, (a, b) in enumerate(self.residuals, start=1))


def _phase_dist(x: int, theta, target) -> mpmath.mpf:
    """|zeta^x - e^(2 pi i target)| for zeta = e^(2 pi i theta)."""
    f = x * theta - target
    f = f - mpmath.nint(f)
    return abs(2 * mpmath.sin(mpmath.pi * f))


def _convergents(theta, limit: int):
    """Continued-fraction convergents (p, q) of theta with q <= limit."""
    out = []
    p0, q0, p1, q1 = 0, 1, 1, 0
    x = theta
    while True:
        a = int(mpmath.floor(x))
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        if q1 > limit:
            break
        out.append((p1, q1))
        frac = x - a
        if abs(frac) < mpmath.mpf(10) ** (-(mpmath.mp.dps - 10)):
            raise ValueError(f"zeta is (numerically) a root of unity of order {q1}")
        x = 1 / frac
    return out


def _search_odd(theta, eps, convs, scan_limit: int, minimum: int) -> int:
    """Smallest-found odd x >= minimum with |zeta^x - 1| <= eps."""
    th = float(theta)
    xs = np.arange(minimum | 1, scan_limit, 2)
    if len(xs):
        d = np.abs(2 * np.sin(np.pi * ((xs * th + 0.5) % 1.0 - 0.5)))
        for x in xs[d <= float(eps) * 0.999]:
            if _phase_dist(int(x), theta, 0) <= eps:
                return int(x)
    for _, q in convs:
        if q % 2 == 1 and q >= minimum and _phase_dist(q, theta, 0) <= eps:
            return q
    raise ValueError("search_limit exhausted while looking for m")


def _search_half(theta, eps, convs, scan_limit: int) -> int:
    """x >= 1 with |zeta^x + 1| <= eps: scan, then an Ostrowski-type greedy walk."""
    th = float(theta)
    xs = np.arange(1, scan_limit)
    d = np.abs(2 * np.sin(np.pi * ((xs * th) % 1.0 - 0.5)))
    for x in xs[d <= float(eps) * 0.999]:
        if _phase_dist(int(x), theta, mpmath.mpf(1) / 2) <= eps:
            return int(x)
    x = 0
    half = mpmath.mpf(1) / 2
    for p, q in convs:
        eta = q * theta - p
        if eta == 0:
            continue
        resid = half - x * theta
        resid -= mpmath.nint(resid)
        j = int(mpmath.nint(resid / eta))
        x += j * q
        if x and _phase_dist(abs(x), theta, half) <= eps:
            # the target 1/2 is symmetric, so -x works as well as x
            return abs(x)
    raise ValueError("search_limit exhausted while looking for n")


def star_sequence(zeta=None, R: int = 3, search_limit: int = 10 ** 40, scan_limit: int = 200000,
                  *, theta=None) -> StarSequence:
    """Integer sequences with |zeta^(n_s m_R) - 1| <= 1/R (s < R) and
    |zeta^(n_R m_t) + 1| <= 1/R (t <= R).

    Pass either a unit complex ``zeta`` or its rotation number ``theta``
    (zeta = exp(2 pi i theta); mpmath number, string, Fraction or float),
    which is taken as exact.  A float zeta only pins theta to double
    precision, so deep stages need ``theta``.  Small candidates come from a
    linear scan; larger ones from the continued-fraction convergents of theta.
    """
    if theta is None:
        if zeta is None:
            raise ValueError("give zeta or theta")
        theta = mpmath.arg(mpmath.mpc(zeta)) / (2 * mpmath.pi)
    dps = len(str(search_limit)) * 2 + 40
    with mpmath.workdps(dps):
        if isinstance(theta, Fraction):
            th = mpmath.mpf(theta.numerator) / theta.denominator
        else:
            th = mpmath.mpf(theta)
        th = th - mpmath.floor(th)
        convs = _convergents(th, search_limit)
        ns: List[int] = []
        ms: List[int] = [1]
        ns.append(_search_half(th, mpmath.mpf(1), convs, scan_limit))
        for Rc in range(1, R):
            eps = mpmath.mpf(1) / ((Rc + 1) * max(ns))
            ms.append(_search_odd(th, eps, convs, scan_limit, 3))
            eps = mpmath.mpf(1) / ((Rc + 1) * max(ms))
            ns.append(_search_half(th, eps, convs, scan_limit))
        residuals = []
        for Rc in range(1, R + 1):
            a = max([_phase_dist(ns[s] * ms[Rc - 1], th, 0) for s in range(Rc - 1)] or [mpmath.mpf(0)])
            b = max(_phase_dist(ns[Rc - 1] * ms[t], th, mpmath.mpf(1) / 2) for t in range(Rc))
            residuals.append((float(a), float(b)))
    return StarSequence(ns, ms, residuals)


def double_limits(seq: StarSequence, theta) -> Tuple[complex, complex]:
    """Approximations at depth R of lim_k lim_l zeta^(n_k m_l) and lim_l lim_k."""
    R = len(seq.n)
    with mpmath.workdps(200):
        th = mpmath.mpf(theta)

        def z(x):
            return complex(mpmath.expjpi(2 * ((x * th) % 1)))

        inner_l = z(seq.n[0] * seq.m[R - 1])  # k fixed small, l deep
        inner_k = z(seq.n[R - 1] * seq.m[0])  # l fixed small, k deep
    return inner_l, inner_k


# ---------------------------------------------------------------------------
# evaluation at the spectrum of gamma
# ---------------------------------------------------------------------------


def spectrum_points(q0: complex, count: int, rng: np.random.Generator, kmax: int = 8) -> np.ndarray:
    """{0} plus random points lambda |q0|^k of Sp(gamma)."""
    r = abs(q0)
    lam = np.exp(2j * np.pi * rng.uniform(size=count - 1))
    ks = rng.integers(0, kmax + 1, size=count - 1)
    return np.concatenate([[0.0], lam * r ** ks])


def spectrum_eval_bound(q0: complex, d: int = 5, n: int = 1, trials: int = 5, radius: int = 2,
                        spectrum_samples: int = 50, samples: int = 32, seed: int = 0) -> Report:
    """sup over sampled z1, z2 in Sp(gamma) of ||sum a_nm g_z1(n) g_z2(m) U^n V^m||
    stays below ((1+|q|)/(1-|q|))^2 for random unit-norm a."""
    bound = ((1 + abs(q0)) / (1 - abs(q0))) ** 2
    rep = boca(d, n)
    pts = sample_points(samples, 100, seed)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        a = random_torus_element(rng, rep.zeta, radius)
        a = a.scale(1 / _symbol_norms(a.coeffs, rep, pts).max())
        z1s = spectrum_points(q0, spectrum_samples, rng)
        z2s = spectrum_points(q0, spectrum_samples, rng)
        pairs = list(zip(z1s, z2s)) + [(z1s[0], w) for w in z2s[1:5]] + [(w, z2s[0]) for w in z1s[1:5]]

        def one(pair):
            z1, z2 = pair
            coeffs = {(i, j): c * g_z(z1, i) * g_z(z2, j) for (i, j), c in a.coeffs.items()}
            return _symbol_norms(coeffs, rep, pts).max()

        worst = max(worst, max(_parallel_map(one, pairs)))
    return Report("spectrum", {"q0": [q0.real, q0.imag], "d": d, "n": n, "trials": trials,
                               "spectrum_samples": spectrum_samples, "seed": seed},
                  float(worst), float(bound), worst <= bound)


# ---------------------------------------------------------------------------
# torus commutation on a truncated grid
# ---------------------------------------------------------------------------


def torus_commutation_residual(zeta: complex, size: int = 41, margin: int = 2) -> float:
    """iota1(z) = shift (x) diag(zeta^n), iota2(z) = 1 (x) shift on a truncated
    l^2(Z) x l^2(Z) grid; returns ||iota1 iota2 - zeta iota2 iota1|| on vectors
    supported away from the boundary."""
    idx = np.arange(size) - size // 2
    S = np.eye(size, k=-1)  # e_j -> e_(j+1)
    D = np.diag(zeta ** idx)
    I = np.eye(size)
    i1 = np.kron(S, D)
    i2 = np.kron(I, S)
    C = i1 @ i2 - zeta * i2 @ i1
    inner = np.zeros(size, dtype=bool)
    inner[margin:-margin] = True
    mask = np.kron(inner, inner)
    return float(np.linalg.norm(C[:, mask], 2))


__all__ = [
    "TorusElement", "U", "V", "random_torus_element", "BocaRep", "boca", "torus_norm",
    "sample_points", "phi0", "flip_map", "flip_bound_check", "flip_growth_series",
    "Multiplier", "multiplier_gz", "g_z", "RhoMeasure", "rho_measure", "golden_rotation",
    "StarSequence", "star_sequence", "double_limits", "spectrum_points",
    "spectrum_eval_bound", "torus_commutation_residual", "Report",
]
