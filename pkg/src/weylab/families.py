"""Reproducible families of test symbols and functions."""
from __future__ import annotations

import numpy as np

from .grids import FunctionField, SymbolField


class GaussianAtoms:
    """Finite sum of modulated Gaussians ``c_k exp(-|X-C_k|^2 / (2 s_k^2) + i <W_k, X>)``.

    Both the sum and its symplectic Fourier transform are concentrated
    within a few widths of the origin, so Riemann sums on moderate boxes
    are accurate far below single-precision level.
    """

    def __init__(self, coeffs, centers, widths, freqs):
        self.coeffs = np.asarray(coeffs, dtype=complex)
        self.centers = np.asarray(centers, dtype=float)
        self.widths = np.asarray(widths, dtype=float)
        self.freqs = np.asarray(freqs, dtype=float)
        self.dim = self.centers.shape[1]

    @classmethod
    def random(cls, rng, dim, count=3, width=(0.7, 0.8), center=2.0, freq=4.0, real=False):
        coeffs = rng.normal(size=count) + (0 if real else 1j * rng.normal(size=count))
        centers = _ball(rng, count, dim, center)
        freqs = np.zeros((count, dim)) if real else _ball(rng, count, dim, freq)
        widths = rng.uniform(*width, size=count)
        return cls(coeffs, centers, widths, freqs)

    def __call__(self, points):
        P = np.asarray(points, dtype=float)
        out = np.zeros(P.shape[:-1], dtype=complex)
        for c, C, s, W in zip(self.coeffs, self.centers, self.widths, self.freqs):
            r2 = np.sum((P - C) ** 2, axis=-1)
            out += c * np.exp(-r2 / (2 * s * s) + 1j * (P @ W))
        return out


def _ball(rng, count, dim, radius):
    v = rng.normal(size=(count, dim))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return v * radius * rng.uniform(size=(count, 1)) ** (1.0 / dim)


def random_symbol(grid, rng, **kw):
    """Band-limited random symbol on a PhaseGrid, backed by its generator."""
    return SymbolField.from_generator(grid, GaussianAtoms.random(rng, grid.dim, **kw))


def random_function(grid, rng, **kw):
    return FunctionField.from_generator(grid, GaussianAtoms.random(rng, grid.dim, **kw))


class Bump:
    """Smooth bump ``exp(1 - 1/(1 - |X-C|^2/R^2))`` times a modulation, supported in ``B_R(C)``."""

    def __init__(self, radius, center=None, freq=None, coeff=1.0):
        self.radius = float(radius)
        self.center = None if center is None else np.asarray(center, dtype=float)
        self.freq = None if freq is None else np.asarray(freq, dtype=float)
        self.coeff = coeff

    def __call__(self, points):
        P = np.asarray(points, dtype=float)
        C = 0.0 if self.center is None else self.center
        u = np.sum((P - C) ** 2, axis=-1) / self.radius**2
        out = np.zeros(u.shape, dtype=complex)
        m = u < 1
        out[m] = np.exp(1.0 - 1.0 / (1.0 - u[m]))
        if self.freq is not None:
            out = out * np.exp(1j * (P @ self.freq))
        return self.coeff * out


class BumpSum:
    def __init__(self, bumps):
        self.bumps = list(bumps)

    def __call__(self, points):
        return sum(b(points) for b in self.bumps)

    @classmethod
    def random(cls, rng, dim, support=1.5, count=3, freq=3.0):
        """Random bumps whose supports stay inside ``B_support(0)``."""
        bumps = []
        for _ in range(count):
            R = rng.uniform(0.4, 0.8) * support
            C = _ball(rng, 1, dim, support - R)[0]
            W = _ball(rng, 1, dim, freq)[0]
            c = rng.normal() + 1j * rng.normal()
            bumps.append(Bump(R, C, W, c))
        return cls(bumps)
