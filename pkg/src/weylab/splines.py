"""Exact B-splines ``H_j`` and forward difference operators ``T^j_h``.

``H_1`` is the indicator of ``(0, 1)`` and ``H_{j+1} = H_1 * H_j``.  Each
``H_j`` is stored as ``j`` polynomial pieces with rational coefficients in
the local variable ``u = t - m`` on ``[m, m+1)``.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import InvalidParameterError


def _integrate(poly):
    """Antiderivative vanishing at 0 (ascending coefficients)."""
    return [Fraction(0)] + [c / (k + 1) for k, c in enumerate(poly)]


def _peval(poly, u):
    acc = Fraction(0) if isinstance(u, Fraction) else 0.0
    for c in reversed(poly):
        acc = acc * u + c
    return acc


def _padd(p, q):
    out = [Fraction(0)] * max(len(p), len(q))
    for k, c in enumerate(p):
        out[k] += c
    for k, c in enumerate(q):
        out[k] += c
    return out


@lru_cache(maxsize=None)
def _pieces(j):
    if j == 1:
        return ((Fraction(1),),)
    prev = _pieces(j - 1)
    anti = [_integrate(list(p)) for p in prev]
    out = []
    for m in range(j):
        # H_j(m + u) = int_{m-1+u}^{m+u} H_{j-1} = I_m(u) + I_{m-1}(1) - I_{m-1}(u)
        poly = [Fraction(0)]
        if m < j - 1:
            poly = _padd(poly, anti[m])
        if m >= 1:
            left = anti[m - 1]
            poly = _padd(poly, [_peval(left, Fraction(1))])
            poly = _padd(poly, [-c for c in left])
        while len(poly) > 1 and poly[-1] == 0:
            poly.pop()
        out.append(tuple(poly))
    return tuple(out)


class BSpline:
    """The B-spline of order ``j`` as exact piecewise polynomials on ``[0, j]``."""

    def __init__(self, j):
        if int(j) != j or j < 1:
            raise InvalidParameterError(f"B-spline order must be a positive integer, got {j}")
        self.j = int(j)
        self.pieces = _pieces(self.j)
        self._float = [np.array([float(c) for c in p]) for p in self.pieces]

    def __repr__(self):
        return f"BSpline({self.j})"

    @property
    def support(self):
        return (0, self.j)

    def integral(self):
        """Exact value of ``int H_j``."""
        return sum(_peval(_integrate(list(p)), Fraction(1)) for p in self.pieces)

    def exact(self, t):
        t = Fraction(t)
        m = math.floor(t)
        if m < 0 or m >= self.j:
            return Fraction(0)
        return _peval(list(self.pieces[m]), t - m)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        m = np.floor(t)
        u = t - m
        out = np.zeros(t.shape)
        for k, coef in enumerate(self._float):
            sel = m == k
            if np.any(sel):
                out[sel] = np.polynomial.polynomial.polyval(u[sel], coef)
        return out if out.ndim else float(out)


def bspline_eval(j, t):
    """``H_j(t)``; half-open pieces so ``H_1(0) = 1`` and ``H_1(1) = 0``."""
    return BSpline(j)(t)


def difference_op(f, h, j, x):
    """``T^j_h f(x)`` through the recursion ``T^{j+1}_h = T^j_h o T^1_h``.

    ``h`` and ``x`` may be scalars (including Fractions, which keeps the
    evaluation exact) or vectors of equal length.
    """
    if int(j) != j or j < 1:
        raise InvalidParameterError(f"difference order must be a positive integer, got {j}")
    if isinstance(h, (list, tuple)):
        h = np.asarray(h, dtype=float)
        x = np.asarray(x, dtype=float)

    def T1(g):
        return lambda y: g(y + h) - g(y)

    op = f
    for _ in range(int(j)):
        op = T1(op)
    return op(x)


def bspline_integral_form(fj, h, j, x, nodes=16):
    """``int f^{(j)}(x + t h) h^j H_j(t) dt`` by Gauss-Legendre quadrature on each unit piece.

    ``fj`` evaluates the j-th derivative of f (1-D).
    """
    H = BSpline(j)
    g, w = np.polynomial.legendre.leggauss(nodes)
    u = 0.5 * (g + 1)
    w = 0.5 * w
    total = 0.0
    for m in range(j):
        t = m + u
        total = total + np.sum(w * np.asarray(fj(x + t * h)) * H(t))
    return total * h**j
