"""Analytic generators: closed-form functions with exact partial derivatives.

A generator is a callable mapping an array of points with trailing axis of
length ``dim`` to complex values.  :class:`Analytic` wraps a sympy expression
so that derivatives of any order are available exactly, which the seminorm
and Sobolev estimators rely on.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np
import sympy as sp


def phase_space_symbols(n):
    """Return the sympy symbols ``(x_1..x_n, xi_1..xi_n)``."""
    xs = sp.symbols(" ".join(f"x{j + 1}" for j in range(n)), real=True)
    xis = sp.symbols(" ".join(f"xi{j + 1}" for j in range(n)), real=True)
    if n == 1:
        xs, xis = (xs,), (xis,)
    return tuple(xs) + tuple(xis)


def config_symbols(n):
    xs = sp.symbols(" ".join(f"x{j + 1}" for j in range(n)), real=True)
    return (xs,) if n == 1 else tuple(xs)


def japanese(u):
    """Symbolic bracket ``<u> = sqrt(1 + u^2)``."""
    return sp.sqrt(1 + u**2)


def smooth_cutoff(r2, R):
    """Symbolic bump equal to ``exp(1 - 1/(1 - r2/R^2))`` inside the ball, zero outside."""
    u = r2 / sp.Integer(1) / R**2
    return sp.Piecewise((sp.exp(1 - 1 / (1 - u)), u < 1), (0, True))


class Analytic:
    """Closed-form function of ``dim`` real variables.

    Parameters
    ----------
    expr : sympy expression
    variables : sequence of sympy symbols
        Ordered variables; point arrays carry them along the last axis.
    """

    def __init__(self, expr, variables):
        self.expr = sp.sympify(expr)
        self.variables = tuple(variables)
        self.dim = len(self.variables)
        self._fn = None

    def __repr__(self):
        return f"Analytic({self.expr})"

    def __call__(self, points):
        points = np.asarray(points, dtype=float)
        if points.shape[-1] != self.dim:
            raise ValueError(f"expected points with last axis {self.dim}, got {points.shape}")
        if self._fn is None:
            self._fn = _lambdify(self.expr, self.variables)
        args = [points[..., j] for j in range(self.dim)]
        with np.errstate(all="ignore"):
            out = self._fn(*args)
        return np.broadcast_to(np.asarray(out, dtype=complex), points.shape[:-1]).copy()

    def derivative(self, alpha):
        """Return the generator of ``d^alpha`` (multi-index over the variables)."""
        alpha = tuple(int(k) for k in alpha)
        if len(alpha) != self.dim or min(alpha) < 0:
            raise ValueError(f"multi-index {alpha} does not match dimension {self.dim}")
        return Analytic(_diff(self.expr, self.variables, alpha), self.variables)

    def directional(self, k):
        """Generator of the symmetric k-linear form ``a^{(k)}(X; Y,...,Y)``.

        The returned callable takes ``(points, Y)`` with ``Y`` broadcastable
        against ``points``.
        """
        ys = sp.symbols(" ".join(f"_y{j}" for j in range(self.dim)), real=True)
        ys = (ys,) if self.dim == 1 else tuple(ys)
        t = sp.Symbol("_t", real=True)
        shifted = self.expr.subs({v: v + t * y for v, y in zip(self.variables, ys)}, simultaneous=True)
        dk = sp.diff(shifted, t, k).subs(t, 0)
        fn = _lambdify(dk, self.variables + ys)

        def evaluate(points, Y):
            points = np.asarray(points, dtype=float)
            Y = np.asarray(Y, dtype=float)
            P, Q = np.broadcast_arrays(points, Y)
            args = [P[..., j] for j in range(self.dim)] + [Q[..., j] for j in range(self.dim)]
            with np.errstate(all="ignore"):
                out = fn(*args)
            return np.broadcast_to(np.asarray(out, dtype=complex), P.shape[:-1]).copy()

        return evaluate

    def is_polynomial(self):
        return bool(self.expr.is_polynomial(*self.variables))

    def scaled(self, c):
        return Analytic(c * self.expr, self.variables)


@lru_cache(maxsize=512)
def _diff(expr, variables, alpha):
    out = expr
    for v, k in zip(variables, alpha):
        if k:
            out = sp.diff(out, v, k)
    return out


def _lambdify(expr, variables):
    return sp.lambdify(variables, expr, modules=["numpy"])


def as_generator(obj, variables):
    """Coerce ``obj`` (Analytic, sympy expression, or callable) to a generator."""
    if obj is None or isinstance(obj, Analytic):
        return obj
    if isinstance(obj, sp.Basic):
        if not obj.free_symbols <= set(variables):
            raise ValueError(f"expression uses symbols outside {variables}")
        return Analytic(obj, variables)
    if callable(obj):
        return obj
    raise TypeError(f"cannot use {type(obj).__name__} as a generator")
