import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, strategies as st

from weylab import classes as cl
from weylab import harmonic as hm
from weylab.errors import DomainError, InvalidParameterError, PreconditionError
from weylab.families import Bump, BumpSum, random_symbol
from weylab.grids import PhaseGrid, SymbolField, lp_norm
from weylab.symbolic import Analytic, phase_space_symbols

x, xi = phase_space_symbols(1)
G64 = PhaseGrid(1, 8, 64)


def test_multi_indices():
    assert sorted(hm.multi_indices(2, 2)) == [(0, 2), (1, 1), (2, 0)]
    assert len(hm.multi_indices(4, 3)) == math.comb(6, 3)


def test_partial_spectral_matches_exact(rng):
    a = random_symbol(PhaseGrid(1, 8, 128), rng, freq=2.0, center=1.0)
    plain = SymbolField(a.grid, a.values)
    for alpha in [(1, 0), (0, 2), (1, 1)]:
        assert np.abs(hm.partial(plain, alpha).values - hm.partial(a, alpha).values).max() <= 1e-8


def test_sobolev_examples():
    g = PhaseGrid(1, 4, 32)
    const = SymbolField.from_generator(g, sp.Integer(3))
    assert hm.sobolev_seminorm(const, 1, 1) == 0
    lin = SymbolField.from_generator(g, x)
    assert hm.sobolev_seminorm(lin, 1, 1, [(-1, 1)]) == pytest.approx(4.0, abs=1e-12)
    with pytest.raises(InvalidParameterError):
        hm.sobolev_seminorm(lin, 1, 0.5)


@pytest.mark.parametrize("lam", [0.5, 2.0, 3.0])
def test_sobolev_scaling_of_monomials(lam):
    g = PhaseGrid(1, 4, 32)
    mono = x * xi**2
    a = SymbolField.from_generator(g, mono)
    b = SymbolField.from_generator(g, mono.subs({x: lam * x, xi: lam * xi}, simultaneous=True))
    assert hm.sobolev_seminorm(b, 3, math.inf) == pytest.approx(lam**3 * hm.sobolev_seminorm(a, 3, math.inf))


def test_sup_envelope_constant_and_dominance():
    g = PhaseGrid(1, 4, 32)
    const = SymbolField.from_generator(g, sp.Integer(2))
    assert np.all(hm.sup_envelope(const, 1).values == 0)
    a = SymbolField.from_generator(g, sp.exp(-x**2 - 2 * xi**2) * sp.cos(x))
    env = hm.sup_envelope(a, 1).values.real
    for al in hm.multi_indices(2, 1):
        assert np.all(env >= np.abs(hm.partial(a, al).values) - 1e-15)


def test_sup_envelope_against_dense_sampling():
    # the grid ball converges to the continuum ball as h shrinks
    g = PhaseGrid(1, 4, 256)
    gen = Analytic(sp.exp(-x**2 - xi**2), (x, xi))
    a = SymbolField.from_generator(g, gen)
    env = hm.sup_envelope(a, 1)
    r = np.sqrt(np.linspace(0, 1, 300))[:, None]
    th = np.linspace(0, 2 * np.pi, 720, endpoint=False)[None, :]
    Y = np.stack([r * np.cos(th), r * np.sin(th)], axis=-1).reshape(-1, 2)
    for i, j in [(128, 128), (140, 116), (96, 160), (128, 150)]:
        X = g.points()[i, j]
        dense = max(np.abs(gen.derivative(al)(X + Y)).max() for al in [(1, 0), (0, 1)])
        assert abs(env.values[i, j].real - dense) <= 0.01 * dense


def test_modulation_examples(rng):
    g = PhaseGrid(1, 8, 32)
    zero = SymbolField(g, np.zeros(g.shape))
    assert hm.modulation_norm(zero, 1) == 0
    assert hm.modulation_norm(zero, [1, 2]) == [0.0, 0.0]
    a = random_symbol(g, rng)
    assert abs(hm.modulation_norm(a, 2) - lp_norm(a, 2)) <= 1e-6 * lp_norm(a, 2)
    with pytest.raises(InvalidParameterError):
        hm.modulation_norm(a, 0.5)


def test_modulation_multiple_exponents_match(rng):
    a = random_symbol(PhaseGrid(1, 8, 32), rng)
    both = hm.modulation_norm(a, [1.0, 2.0, math.inf])
    assert both == pytest.approx([hm.modulation_norm(a, p) for p in (1.0, 2.0, math.inf)], rel=1e-12)


@given(st.integers(0, 2**32 - 1))
def test_m2_equals_l2(seed):
    a = random_symbol(PhaseGrid(1, 6, 24), np.random.default_rng(seed))
    assert abs(hm.modulation_norm(a, 2) - lp_norm(a, 2)) <= 1e-6 * lp_norm(a, 2)


def test_modulation_window_independence(rng):
    g = PhaseGrid(1, 8, 32)
    ratios = []
    for _ in range(10):
        a = random_symbol(g, rng, freq=2.0)
        ratios.append(hm.modulation_norm(a, 1, 1.0) / hm.modulation_norm(a, 1, 0.6))
    assert max(ratios) / min(ratios) <= 50


def test_bernstein_threshold_values():
    assert hm.bernstein_threshold(1, 2, 1) == 2
    assert hm.bernstein_threshold(2, 2, 1) == 0
    assert hm.bernstein_threshold(1, 1, 1) == 3


def test_bernstein_examples(rng):
    g = PhaseGrid(1, 3, 64)
    zero = SymbolField(g, np.zeros(g.shape))
    rep = hm.bernstein_gap(zero, 1, 2, 2)
    assert rep.lhs == 0 and rep.rhs == 0
    # the kernel of a compact bump decays slowly off the diagonal, so the box must be wide
    fine = PhaseGrid(1, 8, 256)
    b = SymbolField.from_generator(fine, BumpSum([Bump(1.0)]))
    rep = hm.bernstein_gap(b, 2, 2, 0)
    assert abs(rep.lhs - lp_norm(b, 2) / math.sqrt(2 * math.pi)) <= 1e-2 * rep.lhs
    a = SymbolField.from_generator(g, BumpSum.random(rng, 2, support=1.0))
    assert hm.bernstein_gap(a, 1, 2, 1).extra["below_threshold"]
    wide = SymbolField.from_generator(g, sp.exp(-x**2 - xi**2))
    with pytest.raises(PreconditionError):
        hm.bernstein_gap(wide, 1, 2, 2)


def test_bernstein_band(rng):
    g = PhaseGrid(1, 3, 64)
    ratios = [hm.bernstein_gap(SymbolField.from_generator(g, BumpSum.random(rng, 2, support=1.0)), 1, 2, 2).ratio
              for _ in range(10)]
    assert max(ratios) / min(ratios) <= 50


def test_mp_schatten_examples(rng):
    zero = SymbolField(G64, np.zeros(G64.shape))
    assert hm.mp_schatten_gap(zero, 1).extra["degenerate"]
    a = random_symbol(G64, rng)
    assert abs(hm.mp_schatten_gap(a, 2).ratio - 1 / math.sqrt(2 * math.pi)) <= 1e-4
    with pytest.raises(DomainError):
        hm.mp_schatten_gap(a, 3)


def test_support_derivative_bound(rng):
    g = PhaseGrid(1, 4, 128)
    for _ in range(5):
        a = SymbolField.from_generator(g, BumpSum.random(rng, 2, support=1.5))
        for alpha in [(1, 0), (0, 1), (1, 1), (0, 2)]:
            for p in (1, 2, math.inf):
                rep = hm.support_derivative_report(a, 1.5, alpha, p)
                assert rep.lhs <= rep.rhs


def test_local_and_envelope_reports_are_stable(rng):
    g = PhaseGrid(1, 6, 64)
    phi = SymbolField.from_generator(g, BumpSum([Bump(1.5)]))
    local_y, local_q, env = [], [], []
    for _ in range(8):
        c = rng.normal(size=3)
        gen = Analytic(sp.exp(-(x - c[0])**2 / 2 - xi**2 / 2) * sp.cos(c[1] * x + c[2] * xi), (x, xi))
        a = SymbolField.from_generator(g, gen)
        local_y.append(hm.local_schatten_report(a, phi, 2, 1, Y=[0.0, 0.0], region=[(-2, 2)]).ratio)
        local_q.append(hm.local_schatten_report(a, phi, 2, 1, q=2, region=[(-2, 2)], inner=[(-1.5, 1.5)]).ratio)
        env.append(hm.envelope_schatten_report(a, 3, 1).ratio)
    for r in (local_y, local_q, env):
        assert max(r) / min(r) <= 50


def test_sector_neighbourhood():
    pts = np.linspace(-0.5, 2.0, 11)[:, None]
    mask = hm.sector_neighbourhood_mask(pts, [(0.0, 1.0)], 0.5)
    assert mask.tolist() == [bool(0 <= p < 1.5) for p in pts[:, 0]]


def test_endpoint_derivative_examples(rng):
    t = sp.Symbol("t", real=True)
    rep = hm.derivative_bound_report(t, [(0.0, 1.0)], 2, kind="endpoint")
    assert rep.ratio == pytest.approx(0.125)
    for r in (0.5, 1.0, 2.0):
        for _ in range(30):
            c = rng.normal(size=4)
            f = sum(sp.Float(c[k]) * t**k for k in range(4))
            assert hm.derivative_bound_report(f, [(0.0, r)], 2, kind="endpoint").extra["holds"]


def test_interpolation_inequality_band(rng):
    t = sp.Symbol("t", real=True)
    ratios = []
    for _ in range(15):
        c = rng.normal(size=(4, 2))
        f = sum(sp.Float(c[j, 0]) * sp.cos((j + 1) * t) + sp.Float(c[j, 1]) * sp.sin((j + 1) * t) for j in range(4))
        ratios.append(hm.derivative_bound_report(f, [(0.0, 1.0)], 2, p=math.inf, kind="sector", eps=0.5).ratio)
        rep = hm.derivative_bound_report(f, [(0.0, 1.0)], 2, p=math.inf, kind="same_domain")
        assert math.isfinite(rep.ratio)
    assert max(ratios) / min(ratios) <= 50


def test_interpolation_inequality_2d(rng):
    u, v = sp.symbols("u v", real=True)
    f = sp.sin(2 * u) * sp.cos(v) + u**2 * v
    rep = hm.derivative_bound_report(f, [(0.0, 1.0), (0.0, 1.0)], 2, p=2, kind="sector", samples=41)
    assert 0 < rep.ratio < math.inf


def test_metric_ball_inequality():
    g = cl.class_metric(cl.ClassSpec(0, 0, (1, 0), (0, 0)))
    f = Analytic(sp.sin(x) * sp.exp(-xi**2 / 4), (x, xi))
    ratios = [hm.derivative_bound_report(f, [(-1, 1), (-1, 1)], 2, kind="metric_ball", g=g, X=X, c=0.25,
                                         samples=64).ratio for X in ([0.0, 0.0], [1.0, 3.0], [-2.0, 5.0])]
    assert all(0 < r < math.inf for r in ratios)
    with pytest.raises(InvalidParameterError):
        hm.derivative_bound_report(f, [(-1, 1), (-1, 1)], 2, kind="metric_ball")
