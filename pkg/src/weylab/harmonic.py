"""Derivative-based bounds for Schatten norms: Sobolev-type seminorms,
derivative envelopes, modulation norms, and the empirical-constant reports
for the Bernstein, modulation and derivative-interpolation inequalities.

None of these reports asserts a particular constant.  They return the two
sides of an inequality and their ratio; suites then check that the ratio
stays inside a band across a family of inputs.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
import sympy as sp
from scipy import ndimage

from .errors import DomainError, InvalidParameterError, PreconditionError
from .grids import SymbolField, lp_norm
from .schatten import schatten_norm, singular_values
from .quantization import build_kernel
from .symbolic import Analytic


@dataclass
class BoundReport:
    """Both sides of an inequality ``lhs <= C rhs`` and the empirical ratio."""

    lhs: float
    rhs: float
    ratio: float
    extra: dict = field(default_factory=dict)

    def as_dict(self):
        return {"lhs": self.lhs, "rhs": self.rhs, "ratio": self.ratio, **self.extra}


def _ratio(lhs, rhs):
    if rhs == 0:
        return 0.0 if lhs == 0 else math.inf
    return lhs / rhs


def multi_indices(dim, order):
    """All multi-indices of length ``dim`` and total order ``order``."""
    out = []
    for c in itertools.combinations_with_replacement(range(dim), order):
        alpha = [0] * dim
        for i in c:
            alpha[i] += 1
        out.append(tuple(alpha))
    return out


def partial(a, alpha):
    """``d^alpha a`` on the grid: exact with an analytic generator, spectral otherwise."""
    alpha = tuple(int(k) for k in alpha)
    gen = a.generator
    if isinstance(gen, Analytic):
        d = gen.derivative(alpha)
        return type(a)(a.grid, d(a.grid.points()), d)
    grid = a.grid
    k = np.fft.fftfreq(grid.N, d=grid.h) * 2 * np.pi
    F = np.fft.fftn(a.values)
    for ax, m in enumerate(alpha):
        if m:
            mult = (1j * k) ** m
            if m % 2:
                mult[grid.N // 2] = 0.0
            shape = [1] * grid.dim
            shape[ax] = grid.N
            F = F * mult.reshape(shape)
    return type(a)(grid, np.fft.ifftn(F))


def _box_mask(grid, region):
    """Grid points inside the half-open box ``prod [lo, hi)``."""
    region = np.asarray(region, dtype=float).reshape(-1, 2)
    if len(region) == 1:
        region = np.repeat(region, grid.dim, axis=0)
    mask = np.ones(grid.shape, dtype=bool)
    ax = grid.axis
    for j, (lo, hi) in enumerate(region):
        m = (ax >= lo - 1e-12 * grid.h) & (ax < hi - 1e-12 * grid.h)
        shape = [1] * grid.dim
        shape[j] = grid.N
        mask = mask & m.reshape(shape)
    return mask


def _region_norm(values, grid, mask, p):
    v = np.abs(values[mask])
    if v.size == 0:
        return 0.0
    if math.isinf(p):
        return float(v.max())
    return float((grid.cell * np.sum(v**p)) ** (1.0 / p))


def sobolev_seminorm(a, N, p, region=None):
    """``sum_{|alpha| = N} ||d^alpha a||_{L^p(region)}`` by Riemann sums.

    ``region`` is a box given as ``[(lo, hi), ...]`` (one pair for all axes
    is accepted); the default is the whole grid.
    """
    p = float(p)
    if not p >= 1:
        raise InvalidParameterError(f"exponent must satisfy p >= 1, got {p}")
    grid = a.grid
    mask = np.ones(grid.shape, dtype=bool) if region is None else _box_mask(grid, region)
    return sum(_region_norm(partial(a, al).values, grid, mask, p) for al in multi_indices(grid.dim, N))


def _max_partial(a, N):
    vals = [np.abs(partial(a, al).values) for al in multi_indices(a.grid.dim, N)]
    return np.max(vals, axis=0)


def ball_footprint(grid, radius=1.0):
    r = int(math.floor(radius / grid.h + 1e-9))
    idx = np.arange(-r, r + 1) * grid.h
    mesh = np.meshgrid(*([idx] * grid.dim), indexing="ij")
    return sum(m**2 for m in mesh) <= radius**2 * (1 + 1e-12)


def sup_envelope(a, N, radius=1.0):
    """``X -> sup_{|Y| <= radius, |alpha| = N} |D^alpha a(X + Y)|`` on the grid (periodic)."""
    M = _max_partial(a, N)
    env = ndimage.maximum_filter(M, footprint=ball_footprint(a.grid, radius), mode="wrap")
    return type(a)(a.grid, env)


def gaussian_window(grid, width=1.0):
    """Gaussian centered at the origin with unit discrete ``L^2`` norm."""
    r2 = grid.radius() ** 2
    w = np.exp(-r2 / (2 * width**2))
    return w / math.sqrt(grid.cell * np.sum(w**2))


def stft_norm(values, grid, window, p, chunk=None):
    """``L^p`` norm of the discrete short-time Fourier transform.

    Window hop is one grid step in every direction and frequencies run
    over the full DFT lattice, both with their quadrature weights. ``p``
    may be a sequence, in which case one pass yields a list of norms.
    """
    many = np.ndim(p) > 0
    ps = [float(q) for q in np.atleast_1d(p)]
    if not all(q >= 1 for q in ps):
        raise InvalidParameterError(f"exponent must satisfy p >= 1, got {p}")
    d = grid.dim
    N = grid.N
    center = N // 2  # index of the origin
    chunk = chunk or max(1, (1 << 22) // grid.size)
    dual_cell = (np.pi / grid.L) ** d
    totals = [0.0] * len(ps)
    best = 0.0
    c = (grid.h / math.sqrt(2 * math.pi)) ** d
    S = np.array(list(np.ndindex(*grid.shape))).reshape(-1, d)
    J = np.indices(grid.shape)
    for start in range(0, len(S), chunk):
        block = S[start : start + chunk]
        idx = tuple(
            (J[a][None] - block[:, a].reshape((-1,) + (1,) * d) + center) % N for a in range(d)
        )
        frames = window[idx]
        V = np.abs(np.fft.fftn(frames * values[None], axes=tuple(range(1, d + 1)))) * c
        best = max(best, float(V.max()))
        for i, q in enumerate(ps):
            if not math.isinf(q):
                totals[i] += float(np.sum(V if q == 1 else V**q))
    out = [best if math.isinf(q) else (grid.cell * dual_cell * t) ** (1.0 / q) for q, t in zip(ps, totals)]
    return out if many else out[0]


def modulation_norm(f, p, window=1.0):
    """Modulation-space norm ``||V_phi f||_{L^p}`` of a sampled field.

    Parameters
    ----------
    f : Field
    p : float or sequence of float
        A sequence returns one norm per exponent from a single transform.
    window : float or ndarray
        Gaussian width, or explicit window samples (normalized to unit
        ``L^2`` norm here).
    """
    grid = f.grid
    if np.ndim(window) == 0:
        w = gaussian_window(grid, float(window))
    else:
        w = np.asarray(window, dtype=complex)
        w = w / math.sqrt(grid.cell * np.sum(np.abs(w) ** 2))
    if not np.any(f.values):
        return [0.0] * len(p) if np.ndim(p) > 0 else 0.0
    return stft_norm(f.values, grid, w, p)


def bernstein_threshold(p, q, n):
    """Least admissible derivative order: ``[2n(1/p - 1/q')] + 1`` for ``p < 2``, else 0."""
    if p >= 2:
        return 0
    qp = math.inf if q == 1 else (1.0 if math.isinf(q) else q / (q - 1))
    val = 2 * n * (1 / p - (0.0 if math.isinf(qp) else 1 / qp))
    return int(math.floor(val + 1e-12)) + 1


def bernstein_gap(a, p, q, N, support_tol=1e-14):
    """``s_p(Op^w a)`` against ``sum_j ||D_j^N a||_{L^q}`` for ``a`` supported in the unit ball."""
    grid = a.grid
    outside = grid.radius() >= 1.0
    vmax = np.abs(a.values).max(initial=0.0)
    if np.abs(a.values[outside]).max(initial=0.0) > support_tol * max(vmax, 1.0):
        raise PreconditionError("symbol is not supported in the unit ball")
    n = grid.n
    thr = bernstein_threshold(p, q, n)
    if vmax == 0:
        return BoundReport(0.0, 0.0, 0.0, {"threshold": thr, "below_threshold": N < thr})
    lhs = schatten_norm(singular_values(build_kernel(a, 0.5)), p)
    rhs = 0.0
    for j in range(grid.dim):
        alpha = [0] * grid.dim
        alpha[j] = N
        rhs += lp_norm(partial(a, alpha), q)
    return BoundReport(lhs, rhs, _ratio(lhs, rhs), {"threshold": thr, "below_threshold": N < thr})


def mp_schatten_gap(a, p, window=1.0, rhs=None):
    """``s_p(Op^w a)`` against the modulation norm ``||a||_{M^p}`` for ``1 <= p <= 2``.

    ``rhs`` may carry a precomputed modulation norm.
    """
    if not 1 <= p <= 2:
        raise DomainError(f"the modulation bound is stated for 1 <= p <= 2, got {p}")
    if rhs is None:
        rhs = modulation_norm(a, p, window)
    if rhs == 0:
        return BoundReport(0.0, 0.0, math.nan, {"degenerate": True})
    lhs = schatten_norm(singular_values(build_kernel(a, 0.5)), p)
    return BoundReport(lhs, rhs, _ratio(lhs, rhs), {"degenerate": False})


def support_derivative_report(a, R, alpha, p):
    """``||a||_{L^p}`` against ``(2R)^{|alpha|} ||D^alpha a||_{L^p}`` for ``a`` supported in a ball of radius R."""
    lhs = lp_norm(a, p)
    rhs = (2 * R) ** sum(alpha) * lp_norm(partial(a, alpha), p)
    return BoundReport(lhs, rhs, _ratio(lhs, rhs))


def local_schatten_report(a, phi, N, p, Y=None, q=None, region=None, inner=None):
    """``s_p(Op^w(phi a))`` against the two local right-hand sides.

    With ``Y`` given the right-hand side is ``sum_{|alpha| <= N-1} |a^{(alpha)}(Y)|
    + |a|_{W^inf_N(region)}``; with ``q`` given it is ``||a||_{L^q(inner)}
    + |a|_{W^inf_N(region)}``.
    """
    grid = a.grid
    prod = SymbolField(grid, a.values * phi.values)
    lhs = schatten_norm(singular_values(build_kernel(prod, 0.5)), p)
    top = sobolev_seminorm(a, N, math.inf, region)
    if Y is not None:
        Y = np.asarray(Y, dtype=float)
        low = 0.0
        for k in range(N):
            for al in multi_indices(grid.dim, k):
                d = a.generator.derivative(al) if isinstance(a.generator, Analytic) else None
                if d is None:
                    raise PreconditionError("pointwise derivatives need an analytic generator")
                low += float(np.abs(d(Y[None])[0]))
        rhs = low + top
    elif q is not None:
        mask = _box_mask(grid, inner if inner is not None else region)
        rhs = _region_norm(a.values, grid, mask, float(q)) + top
    else:
        raise InvalidParameterError("give either Y or q")
    return BoundReport(lhs, rhs, _ratio(lhs, rhs))


def envelope_schatten_report(a, N, p):
    """``s_p(Op^w a)`` against ``||a||_{L^p} + || |a|_{B(0),N} ||_{L^p}``."""
    lhs = schatten_norm(singular_values(build_kernel(a, 0.5)), p)
    rhs = lp_norm(a, p) + lp_norm(sup_envelope(a, N), p)
    return BoundReport(lhs, rhs, _ratio(lhs, rhs))


# -- derivative interpolation inequalities ----------------------------------


def _dense_box(box, per_axis):
    axes = [np.linspace(lo, hi, per_axis) for lo, hi in box]
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(box))


def _as_analytic(f, dim):
    if isinstance(f, Analytic):
        return f
    if isinstance(f, sp.Basic):
        syms = sorted(f.free_symbols, key=lambda s: s.name)
        if len(syms) > dim:
            raise InvalidParameterError("expression has more variables than the domain")
        if len(syms) < dim:
            extra = sp.symbols(" ".join(f"_u{j}" for j in range(dim - len(syms))), real=True)
            syms = syms + list(np.atleast_1d(extra))
        return Analytic(f, syms)
    raise InvalidParameterError("f must be an Analytic generator or a sympy expression")


def sector_neighbourhood_mask(points, box, eps):
    """Membership in ``Omega + (H cap B_eps)`` for a box and the positive orthant ``H``."""
    lo = np.array([b[0] for b in box])
    hi = np.array([b[1] for b in box])
    over = np.maximum(points - hi, 0.0)
    return np.all(points >= lo, axis=-1) & (np.linalg.norm(over, axis=-1) < eps)


def _lp_sampled(vals, p, cell):
    v = np.abs(vals)
    if v.size == 0:
        return 0.0
    if math.isinf(p):
        return float(v.max())
    return float((cell * np.sum(v**p)) ** (1.0 / p))


def derivative_bound_report(f, domain, N, p=math.inf, kind="sector", alpha=None, eps=0.5,
                            samples=401, g=None, X=None, c=None):
    """Evaluate both sides of a derivative-interpolation inequality.

    Parameters
    ----------
    f : Analytic or sympy expression
    domain : list of (lo, hi)
        A box; for ``kind='endpoint'`` the interval ``[0, r]``.
    N : int
        Top derivative order.
    p : float
    kind : {'endpoint', 'sector', 'same_domain', 'metric_ball'}
        ``endpoint``: ``|f'(0)|`` against ``4(1/r + 1)(max|f| + max|f''|)``.
        ``sector``: ``||d^alpha f||_{L^p(Omega)}`` against
        ``||f||_{L^p(Omega')} + sum_{|beta|=N} ||d^beta f||_{L^p(Omega')}``
        with ``Omega' = Omega + (H cap B_eps)`` and ``H`` the positive orthant.
        ``same_domain``: the same with ``Omega' = Omega`` and ``p = inf``.
        ``metric_ball``: metric seminorms on the ball ``g_X(Y - X) <= c``
        (``g``, ``X``, ``c`` required); ``sup_{k<=N} |f|_k`` against
        ``sup |f| + sup |f|_N``.
    alpha : tuple, optional
        Intermediate multi-index (default: first unit vector).
    """
    box = [tuple(map(float, b)) for b in domain]
    dim = len(box)
    F = _as_analytic(f, dim)
    if kind == "endpoint":
        if dim != 1 or box[0][0] != 0:
            raise InvalidParameterError("endpoint needs a domain [0, r]")
        r = box[0][1]
        t = np.linspace(0.0, r, samples)[:, None]
        lhs = float(np.abs(F.derivative((1,))(np.zeros((1, 1))))[0])
        m0 = float(np.abs(F(t)).max())
        m2 = float(np.abs(F.derivative((2,))(t)).max())
        rhs = 4 * (1 / r + 1) * (m0 + m2)
        return BoundReport(lhs, rhs, _ratio(lhs, rhs), {"holds": bool(lhs <= rhs * (1 + 1e-12))})
    alpha = tuple(alpha) if alpha is not None else tuple([1] + [0] * (dim - 1))
    if kind in ("sector", "same_domain"):
        inner = _dense_box(box, samples)
        cell = np.prod([(hi - lo) / (samples - 1) for lo, hi in box])
        lhs = _lp_sampled(F.derivative(alpha)(inner), p, cell)
        if kind == "sector":
            outer_box = [(lo, hi + eps) for lo, hi in box]
            per = int(math.ceil(samples * max((hi + eps - lo) / (hi - lo) for lo, hi in box)))
            outer = _dense_box(outer_box, per)
            outer = outer[sector_neighbourhood_mask(outer, box, eps)]
            ocell = np.prod([(hi - lo) / (per - 1) for lo, hi in outer_box])
        else:
            outer, ocell = inner, cell
        rhs = _lp_sampled(F(outer), p, ocell)
        rhs += sum(_lp_sampled(F.derivative(b)(outer), p, ocell) for b in multi_indices(dim, N))
        return BoundReport(lhs, rhs, _ratio(lhs, rhs), {"alpha": list(alpha)})
    if kind == "metric_ball":
        from .classes import seminorm_estimate

        if g is None or X is None or c is None:
            raise InvalidParameterError("metric_ball needs g, X and c")
        X = np.asarray(X, dtype=float)
        A = g(X[None])[0]
        w, V = np.linalg.eigh(A)
        rng = np.random.default_rng(0)
        U = rng.normal(size=(samples, dim))
        U /= np.linalg.norm(U, axis=1, keepdims=True)
        rad = np.sqrt(c) * rng.uniform(size=(samples, 1)) ** (1.0 / dim)
        pts = X + (rad * U) @ (V / np.sqrt(w)).T
        pts = np.vstack([X[None], pts])
        field_ = _PointSymbol(F)
        lhs = max(float(np.max(seminorm_estimate(field_, g, k, pts))) for k in range(N + 1))
        rhs = float(np.max(np.abs(F(pts)))) + float(np.max(seminorm_estimate(field_, g, N, pts)))
        return BoundReport(lhs, rhs, _ratio(lhs, rhs))
    raise InvalidParameterError(f"unknown inequality kind {kind!r}")


class _PointSymbol:
    """Minimal stand-in for a field that only needs point evaluation and a generator."""

    def __init__(self, gen):
        self.generator = gen

    def evaluate(self, points):
        return self.generator(points)
