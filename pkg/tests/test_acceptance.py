"""The thirteen acceptance criteria, each checked at its stated tolerance.

Every test records one ``PASS``/``FAIL`` line before asserting; the lines
are printed in the terminal summary (see ``conftest.py``) and by running
this file directly.
"""
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from weylab import classes as cl
from weylab import harmonic as hm
from weylab import metric as mt
from weylab.errors import DomainError
from weylab.grids import PhaseGrid, lp_norm, pairing, symplectic_fourier
from weylab.quantization import build_kernel, convert_quantization
from weylab.schatten import hs_identity_gap, schatten_norm, singular_values
from weylab.splines import BSpline, bspline_integral_form, difference_op
from weylab.families import BumpSum, random_symbol
from weylab.grids import SymbolField
from weylab.verify import (_random_cubic, _random_trig, covariance_family, gaussian_projector_symbol,
                           plain_trend, random_class_spec, random_spd, test_symbols as symbol_family)

SEED = 0
RESULTS = {}


def record(k, title, ok, detail):
    RESULTS[k] = f"[{'PASS' if ok else 'FAIL'}] criterion {k:2d}: {title} ({detail})"
    print(RESULTS[k])
    assert ok, RESULTS[k]


def test_01_hs_identity():
    t0 = time.perf_counter()
    grid = PhaseGrid(1, 8, 64)
    rng = np.random.default_rng(SEED)
    gaps = [hs_identity_gap(random_symbol(grid, rng)) for _ in range(20)]
    wall = time.perf_counter() - t0
    record(1, "Hilbert-Schmidt identity", max(gaps) <= 1e-2 and wall <= 30,
           f"max gap {max(gaps):.2e} <= 1e-2, {wall:.1f}s <= 30s")


def test_02_gaussian_projector():
    grid = PhaseGrid(1, 8, 128)
    K = build_kernel(gaussian_projector_symbol(grid), 0.5)
    spec = singular_values(K)
    s = spec.sigma
    norms = [schatten_norm(spec, p) for p in (1, 2, math.inf)]
    h0 = math.pi ** -0.25 * np.exp(-grid.config.axis**2 / 2)
    kerr = float(np.abs(K.K - np.outer(h0, h0)).max())
    ok = 0.99 <= s[0] <= 1.01 and s[1] <= 1e-2 and all(0.98 <= v <= 1.02 for v in norms) and kerr <= 1e-6
    record(2, "rank-one Gaussian projector", ok,
           f"sigma1 {s[0]:.6f}, sigma2 {s[1]:.1e}, s_p {[round(v, 6) for v in norms]}, kernel err {kerr:.1e}")


def test_03_fsigma():
    grid = PhaseGrid(1, 8, 128)
    rng = np.random.default_rng(SEED)
    inv = iso = 0.0
    for _ in range(10):
        a = random_symbol(grid, rng)
        F = symplectic_fourier(a)
        inv = max(inv, np.linalg.norm(symplectic_fourier(F).values - a.values) / np.linalg.norm(a.values))
        iso = max(iso, abs(lp_norm(F, 2) - lp_norm(a, 2)) / lp_norm(a, 2))
    record(3, "F_sigma involution and isometry", inv <= 1e-10 and iso <= 1e-10,
           f"involution {inv:.1e}, isometry {iso:.1e}, tol 1e-10")


def test_04_covariance():
    grid = PhaseGrid(1, 8, 64)
    rng = np.random.default_rng(SEED)
    spread = 0.0
    for _ in range(10):
        a = covariance_family(grid, rng)
        hs = [np.linalg.norm(build_kernel(a if t == 0.5 else convert_quantization(a, 0.5, t), t).matrix())
              for t in (0.0, 0.5, 1.0)]
        spread = max(spread, (max(hs) - min(hs)) / max(hs))
    record(4, "quantization covariance of the HS norm", spread <= 1e-8, f"spread {spread:.1e} <= 1e-8")


def test_05_symplectic_eigenvalues():
    rng = np.random.default_rng(SEED)
    ab = rng.uniform(0.05, 20, size=(100, 2))
    diag = max(abs(mt.planck(np.diag(v)) - math.sqrt(v[0] * v[1])) for v in ab)
    worst = 0.0
    for i in range(10):
        spec = random_class_spec(rng, 1 + i % 2)
        P = rng.uniform(-10, 10, size=(100, 2 * spec.n))
        closed = cl.class_planck(spec)(P)
        generic = np.array([mt.planck(A) for A in cl.class_metric(spec)(P)])
        worst = max(worst, float(np.max(np.abs(closed - generic) / closed)))
    record(5, "symplectic eigenvalues", diag <= 1e-10 and worst <= 1e-8,
           f"diag err {diag:.1e} <= 1e-10, class Planck rel err {worst:.1e} <= 1e-8")


def test_06_symplectic_core():
    rng = np.random.default_rng(SEED)
    iters = 0
    perr = 0.0
    for d in (2, 4):
        for _ in range(50):
            res = mt.symplectic_core(random_spd(rng, d), tol=1e-12, max_iter=60, info=True)
            iters = max(iters, res.iterations)
            perr = max(perr, abs(mt.planck(res.form) - 1))
    derr = float(np.abs(mt.symplectic_core(np.diag([4.0, 1.0]), tol=1e-12).A - np.diag([2.0, 0.5])).max())
    record(6, "symplectic core", iters <= 60 and derr <= 1e-8 and perr <= 1e-8,
           f"max iterations {iters}, diag(4,1) err {derr:.1e}, |h-1| {perr:.1e}")


def _criterion_7_norms():
    grid = PhaseGrid(1, 8, 64)
    syms = symbol_family(grid, np.random.default_rng(SEED))
    ps = [1.0, 1.5, 2.0, 4.0, math.inf]
    norms = {}
    for name, a in syms:
        spec = singular_values(build_kernel(a, 0.5))
        norms[name] = {p: schatten_norm(spec, p) for p in ps}
    return syms, ps, norms


def test_07_monotonicity_and_duality():
    syms, ps, norms = _criterion_7_norms()
    mono = max(norms[n][ps[i + 1]] / norms[n][ps[i]] for n, _ in syms for i in range(len(ps) - 1))
    fields = dict(syms)
    duality = {}
    for p, q in ((1.0, math.inf), (2.0, 2.0)):
        duality[(p, q)] = max(abs(pairing(fields[a], fields[b])) / (norms[a][p] * norms[b][q])
                              for a in fields for b in fields)
    ok_dual = all(r <= 1 + 1e-6 for r in duality.values())
    detail = (f"monotone ratio {mono:.12f} <= 1+1e-12; pairing ratio (1,inf) {duality[(1.0, math.inf)]:.3f}, "
              f"(2,2) {duality[(2.0, 2.0)]:.3f} <= 1+1e-6")
    # the stated pairing bound omits the (2 pi)^n factor of the Lebesgue pairing; see the decisions ledger
    record(7, "Schatten monotonicity and trace duality", mono <= 1 + 1e-12 and ok_dual, detail)


def test_08_compact_support_band():
    grid = PhaseGrid(1, 4, 64)
    rng = np.random.default_rng(SEED)
    ratios = {p: [] for p in (1.0, 2.0, math.inf)}
    for _ in range(20):
        a = SymbolField.from_generator(grid, BumpSum.random(rng, 2, support=1.5))
        spec = singular_values(build_kernel(a, 0.5))
        F = symplectic_fourier(a)
        for p in ratios:
            ratios[p].append(schatten_norm(spec, p) / lp_norm(F, p))
    bands = {p: max(r) / min(r) for p, r in ratios.items()}
    record(8, "two-sided F_sigma band for compact support", all(b <= 50 for b in bands.values()),
           "max/min " + ", ".join(f"p={p}: {b:.2f}" for p, b in bands.items()) + " <= 50")


def test_09_linf_trace_bound():
    grid = PhaseGrid(1, 8, 64)
    slack = math.inf
    for _, a in symbol_family(grid, np.random.default_rng(SEED)):
        s1 = schatten_norm(singular_values(build_kernel(a, 0.5)), 1)
        slack = min(slack, 2 * s1 + 1e-8 - lp_norm(a, math.inf))
    pg = PhaseGrid(1, 8, 128)
    a = gaussian_projector_symbol(pg)
    s1 = schatten_norm(singular_values(build_kernel(a, 0.5)), 1)
    sat = abs(lp_norm(a, math.inf) - 2 * s1) / lp_norm(a, math.inf)
    record(9, "L^inf trace bound", slack >= 0 and sat <= 0.02, f"min slack {slack:.3e} >= 0, saturation {sat:.1e} <= 2%")


def test_10_thresholds():
    exact = cl.kappa(1, 1) == 3 and cl.kappa_prime(1, 1) == 2 and cl.n_p(1, 1) == 1
    # kappa' is only defined up to p = 2, so above 2 it must refuse rather than return 0
    zero = all(cl.kappa(p, n) == 0 for n in range(1, 5) for p in (2.0, 2.5, 3.0, 4.0, 10.0, math.inf))
    zero &= all(cl.kappa_prime(2.0, n) == 0 for n in range(1, 5))
    with pytest.raises(DomainError):
        cl.kappa_prime(3.0, 1)
    bad = sum(2 * cl.kappa_prime(p, n) != cl.kappa(p, n) + 1
              for n in range(1, 5) for p in np.linspace(1.0, 2.0, 102)[:-1])
    record(10, "threshold integers", exact and zero and bad == 0,
           f"kappa_1={cl.kappa(1, 1)}, kappa'_1={cl.kappa_prime(1, 1)}, n_p(1,1)={cl.n_p(1, 1)}, "
           f"zero for p>=2: {zero}, relation violations {bad}/404")


def test_11_spline_bounds():
    rng = np.random.default_rng(SEED)
    integ = max(abs(float(BSpline(j).integral()) - 1.0) for j in range(1, 9))
    a2 = 0.0
    for deg in range(7):
        f = np.polynomial.Polynomial(rng.normal(size=deg + 1))
        for j in (1, 2, 3):
            for h, x in ((0.3, 0.7), (-0.45, 0.2), (1.1, -0.8)):
                lhs = difference_op(f, h, j, x)
                a2 = max(a2, abs(lhs - bspline_integral_form(f.deriv(j), h, j, x)) / max(1.0, abs(lhs)))
    ann = 0
    for j in range(1, 7):
        for deg in range(j):
            c = [Fraction(int(v), 7) for v in rng.integers(-9, 10, size=deg + 1)]
            ann += difference_op(lambda y, c=c: sum(ck * y**k for k, ck in enumerate(c)),
                                 Fraction(3, 10), j, Fraction(7, 10)) != 0
    fails = sum(not hm.derivative_bound_report(_random_cubic(rng), [(0.0, r)], 2, kind="endpoint").extra["holds"]
                for r in (0.5, 1.0, 2.0) for _ in range(100))
    a1 = [hm.derivative_bound_report(_random_trig(rng), [(0.0, 1.0)], 2, p=math.inf, kind="sector",
                                     alpha=(1,), eps=0.5).ratio for _ in range(50)]
    band = max(a1) / min(a1)
    ok = integ <= 1e-12 and a2 <= 1e-10 and ann == 0 and fails == 0 and band <= 50
    record(11, "B-splines, differences, derivative bounds", ok,
           f"int H_j err {integ:.1e}, integral-form err {a2:.1e}, annihilation misses {ann}, "
           f"endpoint-derivative failures {fails}/300, interpolation band {band:.2f}")


def test_12_trend():
    lines = []
    ok = True
    for spec, inside in ((cl.ClassSpec(-2, -2, (1, 0), (0, 0)), True), (cl.ClassSpec(0, 0, (1, 0), (0, 0)), False)):
        for t in (0.5, 0.0):
            v = plain_trend(spec, t, 1.0, (4.0, 8.0, 16.0), 0.125)
            if inside:
                change = abs(v[2] - v[1]) / v[2]
                ok &= change <= 0.05
                lines.append(f"r=s=-2 t={t:g}: change {change:.3f}")
            else:
                growth = min(v[1] / v[0], v[2] / v[1])
                ok &= growth >= 1.5
                lines.append(f"r=s=0 t={t:g}: growth {growth:.2f}")
    record(12, "truncation trend of s_1 for plain symbols", ok, "; ".join(lines))


def test_13_modulation():
    grid = PhaseGrid(1, 8, 64)
    rng = np.random.default_rng(SEED)
    m2 = dev = 0.0
    r1 = []
    for _ in range(20):
        a = random_symbol(grid, rng)
        M1, M2 = hm.modulation_norm(a, [1.0, 2.0])
        m2 = max(m2, abs(M2 - lp_norm(a, 2)) / lp_norm(a, 2))
        dev = max(dev, abs(hm.mp_schatten_gap(a, 2, rhs=M2).ratio - (2 * math.pi) ** -0.5))
        r1.append(hm.mp_schatten_gap(a, 1, rhs=M1).ratio)
    band = max(r1) / min(r1)
    record(13, "modulation norms", m2 <= 1e-6 and dev <= 1e-4 and band <= 50,
           f"M2 vs L2 {m2:.1e} <= 1e-6, p=2 ratio dev {dev:.1e} <= 1e-4, p=1 band {band:.2f} <= 50")


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
            except AssertionError:
                pass
