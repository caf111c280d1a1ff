import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from weylab.errors import InvalidParameterError
from weylab.families import BumpSum, random_symbol
from weylab.grids import PhaseGrid, SymbolField, lp_norm, pairing, quarter_turn, symplectic_fourier
from weylab.quantization import build_kernel
from weylab.schatten import (hs_identity_gap, lone_infinity_bound_gap, on_sequence_lower_bound, schatten_norm,
                             schatten_norms, singular_values)
from weylab.symbolic import phase_space_symbols

x, xi = phase_space_symbols(1)
G64 = PhaseGrid(1, 8, 64)
PS = [1.0, 1.5, 2.0, 4.0, math.inf]


def projector(grid):
    return SymbolField.from_generator(grid, 2 * sp.exp(-x**2 - xi**2))


def test_zero_and_diagonal():
    assert np.all(singular_values(np.zeros((4, 4))).sigma == 0)
    spec = singular_values(np.diag([3.0, 2.0, 1.0]))
    assert np.allclose(spec.sigma, [3, 2, 1], atol=1e-14)
    assert schatten_norm(spec, 1) == pytest.approx(6, abs=1e-12)
    assert schatten_norm(spec, math.inf) == pytest.approx(3, abs=1e-12)
    assert schatten_norm(spec, 2) == pytest.approx(math.sqrt(14), abs=1e-12)


def test_residual_is_certified(rng):
    spec = singular_values(build_kernel(random_symbol(G64, rng)))
    assert spec.residual <= 1e-10 * spec.sigma[0]


def test_rejects_small_exponent():
    with pytest.raises(InvalidParameterError):
        schatten_norm(singular_values(np.eye(2)), 0.5)


def test_projector_spectrum():
    spec = singular_values(build_kernel(projector(PhaseGrid(1, 8, 128))))
    assert 0.99 <= spec.sigma[0] <= 1.01
    assert spec.sigma[1] <= 1e-2
    for p in (1, 2, math.inf):
        assert 0.98 <= schatten_norm(spec, p) <= 1.02


def test_hs_identity_random(rng):
    for _ in range(10):
        assert hs_identity_gap(random_symbol(G64, rng)) <= 1e-2


def test_hs_identity_gaussian_and_homogeneity(rng):
    a = projector(G64)
    assert hs_identity_gap(a) <= 1e-4
    b = random_symbol(G64, rng)
    assert abs(hs_identity_gap(b * 7) - hs_identity_gap(b)) <= 1e-12
    with pytest.raises(InvalidParameterError):
        hs_identity_gap(SymbolField(G64, np.zeros(G64.shape)))


def test_on_sequence_examples():
    D = np.diag([3.0, 2.0, 1.0])
    E = np.eye(3)
    assert on_sequence_lower_bound(D, 1, 1, sequences=[(E, E)]) == 6
    K = build_kernel(projector(G64))
    val = on_sequence_lower_bound(K, 1, 5, seed=3)
    assert 0 < val <= 1 + 1e-10
    spec = singular_values(K, vectors=True)
    pair = (spec.Vh.conj().T[:, :1], spec.U[:, :1])
    assert abs(on_sequence_lower_bound(K, math.inf, 1, sequences=[pair]) - spec.sigma[0]) <= 1e-10
    with pytest.raises(InvalidParameterError):
        on_sequence_lower_bound(K, 1, 0)


def test_lone_infinity_bound(rng):
    assert lone_infinity_bound_gap(SymbolField(G64, np.zeros(G64.shape))) == 0
    assert lone_infinity_bound_gap(random_symbol(G64, rng)) >= 0


def test_schatten_norms_helper():
    norms = schatten_norms(projector(PhaseGrid(1, 8, 128)), [1, 2])
    assert set(norms) == {1, 2}


@given(st.integers(0, 2**32 - 1))
def test_monotone_in_p(seed):
    a = random_symbol(G64, np.random.default_rng(seed))
    spec = singular_values(build_kernel(a))
    vals = [schatten_norm(spec, p) for p in PS]
    assert all(b <= c * (1 + 1e-12) for b, c in zip(vals[1:], vals[:-1]))


@given(st.integers(0, 2**32 - 1))
def test_on_sequence_below_trace_norm(seed):
    K = build_kernel(random_symbol(G64, np.random.default_rng(seed)))
    s1 = schatten_norm(singular_values(K), 1)
    assert on_sequence_lower_bound(K, 1, 3, seed=seed) <= s1 * (1 + 1e-10)


@settings(max_examples=5)
@given(st.integers(0, 2**32 - 1))
def test_symplectic_fourier_invariance(seed):
    # h^2 = pi/N keeps the discrete F_sigma free of aliasing
    g = PhaseGrid(1, math.sqrt(math.pi * 256) / 2, 256)
    a = random_symbol(g, np.random.default_rng(seed), width=(0.9, 1.1), center=1.0, freq=1.0)
    sa = singular_values(build_kernel(a))
    sf = singular_values(build_kernel(symplectic_fourier(a)))
    for p in (1, 2, math.inf):
        assert abs(schatten_norm(sf, p) - schatten_norm(sa, p)) <= 1e-6 * schatten_norm(sa, p)


@given(st.integers(0, 2**32 - 1))
def test_quarter_turn_covariance(seed):
    # the xi lattice coincides with the x grid when L^2 = pi N / 2
    g = PhaseGrid(1, math.sqrt(math.pi * 32), 64)
    a = random_symbol(g, np.random.default_rng(seed))
    sa = singular_values(build_kernel(a))
    sb = singular_values(build_kernel(quarter_turn(a)))
    for p in (1, 2, math.inf):
        assert abs(schatten_norm(sb, p) - schatten_norm(sa, p)) <= 1e-8 * schatten_norm(sa, p)


@given(st.integers(0, 2**32 - 1))
def test_duality_with_trace_normalization(seed):
    # (a, b) = (2 pi)^n tr(Op(a) Op(b)^*), so |(a, b)| <= (2 pi)^n s_p(a) s_p'(b)
    rng = np.random.default_rng(seed)
    a, b = random_symbol(G64, rng), random_symbol(G64, rng)
    sa, sb = singular_values(build_kernel(a)), singular_values(build_kernel(b))
    c = 2 * math.pi
    pr = abs(pairing(a, b))
    assert pr <= c * schatten_norm(sa, 1) * schatten_norm(sb, math.inf) * (1 + 1e-6)
    assert pr <= c * schatten_norm(sa, 2) * schatten_norm(sb, 2) * (1 + 1e-6)


def test_stated_duality_fails_on_projector():
    # the Lebesgue pairing of the projector symbol with itself is 2 pi while every s_p is 1
    a = projector(PhaseGrid(1, 8, 128))
    spec = singular_values(build_kernel(a))
    assert abs(pairing(a, a)) == pytest.approx(2 * math.pi, rel=1e-6)
    assert abs(pairing(a, a)) > schatten_norm(spec, 2) ** 2 * (1 + 1e-6)


def test_compact_support_band(rng):
    g = PhaseGrid(1, 4, 64)
    ratios = {p: [] for p in (1, 2, math.inf)}
    for _ in range(10):
        a = SymbolField.from_generator(g, BumpSum.random(rng, 2, support=1.5))
        spec, F = singular_values(build_kernel(a)), symplectic_fourier(a)
        for p in ratios:
            ratios[p].append(schatten_norm(spec, p) / lp_norm(F, p))
    for p, r in ratios.items():
        assert max(r) / min(r) <= 50
