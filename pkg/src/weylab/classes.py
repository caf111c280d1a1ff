"""Anisotropic double-weight symbol classes ``S^{r,s}_{rho,delta}``.

A class is described by the weight ``m(x, xi) = <x>^s <xi>^r`` and the
split metric whose ``z_j`` coefficient is ``<x>^{-2 rho_{n+j}} <xi>^{2 delta_j}``
and whose ``zeta_j`` coefficient is ``<x>^{2 delta_{n+j}} <xi>^{-2 rho_j}``,
with ``<u> = (1 + |u|^2)^{1/2}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import sympy as sp
from scipy.stats import qmc

from .errors import DomainError, InvalidParameterError, UnsupportedOrderError
from .grids import SymbolField
from .metric import QuadFormField
from .symbolic import Analytic, phase_space_symbols, smooth_cutoff


@dataclass(frozen=True)
class ClassSpec:
    """Parameters ``(r, s, rho, delta)`` with ``rho, delta`` of length ``2n``."""

    r: float
    s: float
    rho: tuple
    delta: tuple

    def __post_init__(self):
        rho = tuple(float(v) for v in np.atleast_1d(self.rho))
        delta = tuple(float(v) for v in np.atleast_1d(self.delta))
        if len(rho) != len(delta) or len(rho) % 2 or not rho:
            raise InvalidParameterError(f"rho and delta need a common even length, got {len(rho)} and {len(delta)}")
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "r", float(self.r))
        object.__setattr__(self, "s", float(self.s))

    @property
    def n(self):
        return len(self.rho) // 2

    @classmethod
    def parse(cls, text, n=None):
        """Parse ``"r,s,rho_1..rho_2n,delta_1..delta_2n"``."""
        vals = [float(v) for v in text.split(",")]
        if len(vals) < 6 or (len(vals) - 2) % 4:
            raise InvalidParameterError(f"class spec needs 2 + 4n numbers, got {len(vals)}")
        k = (len(vals) - 2) // 2
        return cls(vals[0], vals[1], tuple(vals[2 : 2 + k]), tuple(vals[2 + k :]))

    def as_list(self):
        return [self.r, self.s, *self.rho, *self.delta]

    def gaps(self):
        """``delta - rho`` split into the xi-block (first n) and the x-block."""
        d = np.subtract(self.delta, self.rho)
        return d[: self.n], d[self.n :]


def _brackets(points, n):
    P = np.asarray(points, dtype=float)
    bx = np.sqrt(1.0 + np.sum(P[..., :n] ** 2, axis=-1))
    bxi = np.sqrt(1.0 + np.sum(P[..., n:] ** 2, axis=-1))
    return bx, bxi


class WeightField:
    """Positive function on phase space."""

    def __init__(self, func, n, name=""):
        self.func = func
        self.n = n
        self.name = name

    def __call__(self, points):
        return np.asarray(self.func(np.asarray(points, dtype=float)), dtype=float)


def _diag_entries(spec, points):
    n = spec.n
    rho, delta = np.array(spec.rho), np.array(spec.delta)
    bx, bxi = _brackets(points, n)
    bx, bxi = bx[..., None], bxi[..., None]
    z = bx ** (-2 * rho[n:]) * bxi ** (2 * delta[:n])
    zeta = bx ** (2 * delta[n:]) * bxi ** (-2 * rho[:n])
    return np.concatenate([z, zeta], axis=-1)


def _diag_field(entries_fn, n, meta):
    def func(X):
        e = entries_fn(X)
        out = np.zeros(e.shape + (2 * n,))
        idx = np.arange(2 * n)
        out[..., idx, idx] = e
        return out

    return QuadFormField(func, n, vectorized=True, meta=meta)


def class_metric(spec):
    """The split metric attached to ``spec`` as a vectorized :class:`QuadFormField`."""
    return _diag_field(lambda X: _diag_entries(spec, X), spec.n, {"class": spec.as_list()})


def class_dual_metric(spec):
    """Closed form of the dual metric: ``z_j`` coefficient ``<x>^{-2 delta_{n+j}} <xi>^{2 rho_j}``,
    ``zeta_j`` coefficient ``<x>^{2 rho_{n+j}} <xi>^{-2 delta_j}``."""
    n = spec.n
    rho, delta = np.array(spec.rho), np.array(spec.delta)

    def entries(X):
        bx, bxi = _brackets(X, n)
        bx, bxi = bx[..., None], bxi[..., None]
        z = bx ** (-2 * delta[n:]) * bxi ** (2 * rho[:n])
        zeta = bx ** (2 * rho[n:]) * bxi ** (-2 * delta[:n])
        return np.concatenate([z, zeta], axis=-1)

    return _diag_field(entries, n, {"class_dual": spec.as_list()})


def class_weight(spec):
    n = spec.n
    return WeightField(lambda X: _pw(*_brackets(X, n), spec.s, spec.r), n, "weight")


def _pw(bx, bxi, s, r):
    return bx**s * bxi**r


def _planck_factors(spec, X):
    n = spec.n
    gxi, gx = spec.gaps()
    bx, bxi = _brackets(X, n)
    return bx[..., None] ** gx * bxi[..., None] ** gxi


def class_planck(spec):
    """Closed-form Planck function ``max_j <x>^{delta_{n+j}-rho_{n+j}} <xi>^{delta_j-rho_j}``."""
    return WeightField(lambda X: np.max(_planck_factors(spec, X), axis=-1), spec.n, "planck")


def lambda_G(spec):
    """Closed-form capacity ``prod_j (<x>^{delta_{n+j}-rho_{n+j}} <xi>^{delta_j-rho_j} + 1)`` of ``g + g^0``."""
    return WeightField(lambda X: np.prod(_planck_factors(spec, X) + 1.0, axis=-1), spec.n, "lambda_G")


# -- integer thresholds -----------------------------------------------------


def _exact(p):
    if math.isinf(p):
        return None
    if not p >= 1:
        raise DomainError(f"exponent must satisfy p >= 1, got {p}")
    return Fraction(p).limit_denominator(10**6)


def n_p(p, n):
    """``[2n(1/p - 1/2)]`` (integer part, taken as floor)."""
    q = _exact(float(p))
    val = Fraction(-n) if q is None else 2 * n * (1 / q - Fraction(1, 2))
    return math.floor(val)


def kappa(p, n):
    """``2[2n(1/p-1/2)] + 1`` for ``p < 2`` and 0 for ``p >= 2``."""
    p = float(p)
    if _exact(p) is not None and _exact(p) < 2:
        return 2 * n_p(p, n) + 1
    return 0


def kappa_prime(p, n):
    """``[2n(1/p-1/2)] + 1`` for ``1 <= p < 2`` and 0 for ``p = 2``."""
    p = float(p)
    q = _exact(p)
    if q is None or q > 2:
        raise DomainError(f"kappa' is defined for 1 <= p <= 2, got {p}")
    return 0 if q == 2 else n_p(p, n) + 1


def first_condition(spec, p):
    """Right-hand sides and verdicts of ``r < -n - p(n_p + 1/2) max_j (delta_j - rho_j)``
    and the analogous bound for ``s`` over the x-block."""
    n = spec.n
    k = n_p(p, n)
    gxi, gx = spec.gaps()
    rr = -n - p * (k + 0.5) * gxi.max()
    rs = -n - p * (k + 0.5) * gx.max()
    return {"r_bound": rr, "s_bound": rs, "holds": bool(spec.r < rr and spec.s < rs)}


def second_condition(spec, p):
    """Right-hand sides and verdicts of
    ``r < -n - p(n_p + 1) max_j (delta_j - rho_j)/2 - sum_j (delta_j - rho_j)``
    and the analogous bound for ``s``."""
    n = spec.n
    k = n_p(p, n)
    gxi, gx = spec.gaps()
    rr = -n - p * (k + 1) * gxi.max() / 2 - gxi.sum()
    rs = -n - p * (k + 1) * gx.max() / 2 - gx.sum()
    return {"r_bound": rr, "s_bound": rs, "holds": bool(spec.r < rr and spec.s < rs)}


# -- test symbols -----------------------------------------------------------


def make_test_symbol(spec, grid, kind="plain", omega=1.0, R=1.5, phase=None):
    """Symbol witnessing the class ``spec``, with an exact generator.

    Parameters
    ----------
    kind : {'plain', 'oscillatory', 'truncated'}
        ``plain`` is the weight ``<x>^s <xi>^r``.  ``oscillatory`` multiplies
        it by ``exp(i omega phi)`` with ``phi = <xi>`` unless ``phase`` (a
        sympy expression in the phase-space symbols) is given.  ``truncated``
        multiplies it by a smooth cutoff supported in ``B_R(0)``.
    """
    n = spec.n
    if grid.n != n:
        raise InvalidParameterError(f"grid base dimension {grid.n} does not match class dimension {n}")
    v = phase_space_symbols(n)
    x2 = sum(u**2 for u in v[:n])
    xi2 = sum(u**2 for u in v[n:])
    base = (1 + x2) ** sp.nsimplify(spec.s / 2) * (1 + xi2) ** sp.nsimplify(spec.r / 2)
    if kind == "plain":
        expr = base
    elif kind == "oscillatory":
        phi = sp.sqrt(1 + xi2) if phase is None else phase
        expr = base * sp.exp(sp.I * sp.nsimplify(omega) * phi)
    elif kind == "truncated":
        expr = base * smooth_cutoff(x2 + xi2, sp.nsimplify(R))
    else:
        raise InvalidParameterError(f"unknown symbol kind {kind!r}")
    return SymbolField.from_generator(grid, Analytic(expr, v))


# -- seminorms --------------------------------------------------------------


def unit_directions(dim, count, seed=0):
    """Deterministic quasi-uniform unit vectors (half-sphere suffices: forms are even)."""
    if dim == 2:
        th = np.pi * (np.arange(count) + 0.5) / count
        return np.stack([np.cos(th), np.sin(th)], axis=1)
    sob = qmc.Sobol(d=dim, scramble=True, seed=seed)
    m = int(np.ceil(np.log2(count)))
    u = sob.random_base2(m)[:count]
    from scipy.special import ndtri

    z = ndtri(np.clip(u, 1e-12, 1 - 1e-12))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def _fd_step(k):
    return max(1e-4, np.finfo(float).eps ** (1.0 / (k + 2)))


def _directional_fd(f, X, Y, k):
    """Central k-th difference of ``f`` along ``Y`` with step scaled by ``|Y|``."""
    scale = np.linalg.norm(Y, axis=-1, keepdims=True)
    eps = _fd_step(k)
    U = Y / scale
    acc = 0.0
    for j in range(k + 1):
        c = (-1) ** (k - j) * math.comb(k, j)
        acc = acc + c * f(X + (j - k / 2) * eps * scale * U)
    return acc / eps**k


def seminorm_estimate(a, g, k, probes, directions=None, seed=0):
    """``sup_{g_X(Y) <= 1} |a^{(k)}(X; Y, ..., Y)|`` at each probe.

    The supremum over tuples equals the diagonal one by polarization, so
    only diagonal directions ``Y = A_X^{-1/2} u`` are sampled, ``u`` running
    over at least ``64 k`` quasi-uniform unit vectors.

    Parameters
    ----------
    a : SymbolField
    g : QuadFormField
    k : int
    probes : array, shape (P, 2n)
    """
    probes = np.atleast_2d(np.asarray(probes, dtype=float))
    dim = probes.shape[1]
    gen = getattr(a, "generator", None)
    exact = isinstance(gen, Analytic)
    if not exact and k > 4:
        raise UnsupportedOrderError(f"order {k} needs an analytic generator (finite differences stop at 4)")
    if k == 0:
        return np.abs(a.evaluate(probes))
    count = directions or (128 * k if dim == 2 else 256 * k)
    U = unit_directions(dim, count, seed)
    A = g(probes)
    w, V = np.linalg.eigh(A)
    # Y[p, d] = V diag(w^{-1/2}) V^T u_d
    Y = np.einsum("pij,pj,pkj,dk->pdi", V, 1 / np.sqrt(w), V, U)
    Xr = np.broadcast_to(probes[:, None, :], Y.shape)
    if exact:
        vals = gen.directional(k)(Xr, Y)
    else:
        vals = _directional_fd(a.evaluate, Xr, Y, k)
    return np.abs(vals).max(axis=1)


@dataclass
class MembershipReport:
    per_order: list
    total: float

    def as_dict(self):
        return {"per_order": self.per_order, "total": self.total}


def membership_report(a, spec, N, probes, **kw):
    """``sum_{k <= N} sup_probes |a|_k^g / m`` for the class metric and weight."""
    probes = np.atleast_2d(np.asarray(probes, dtype=float))
    g = class_metric(spec)
    m = class_weight(spec)(probes)
    per = [float(np.max(seminorm_estimate(a, g, k, probes, **kw) / m)) for k in range(N + 1)]
    return MembershipReport(per, float(sum(per)))
