"""Dense kernels of t-quantized operators, symbol conversion between
quantizations, and the truncated exponential expansion.

The kernel of ``Op_t(a)`` is

    K(x, y) = (2 pi)^{-n} int a((1-t) x + t y, xi) e^{i <x-y, xi>} d xi.

On a grid with spacing ``h`` the xi-integral is a Riemann sum over the
centered frequency lattice ``xi_m = -pi/h + m pi/L``.  With this lattice the
sum over xi becomes a DFT in the displacement ``w = x - y``, which makes the
Hilbert-Schmidt identity exact at the discrete level.  Displacements are
wrapped to ``[-L, L)`` and midpoints are placed on the periodic box.
"""
from __future__ import annotations

import math

import numpy as np
import sympy as sp

from .errors import (
    GridMismatchError,
    InvalidParameterError,
    NumericError,
    ResourceLimitError,
)
from .grids import FunctionField, SymbolField
from .symbolic import Analytic

#: default bound on the matrix dimension ``N^n`` of a dense kernel
# dense cap on N^n (64^2); one-dimensional grids stop at N = 256
DEFAULT_MAX_SIZE = 4096
_CAP_1D = 256


class OperatorKernel:
    """Dense kernel matrix of ``Op_t(a)`` over the configuration grid.

    Parameters
    ----------
    grid : UniformGrid
        Configuration grid (dimension ``n``).
    t : float
        Quantization parameter.
    K : ndarray, shape (N^n, N^n)
    scaled : bool
        True when the quadrature weight ``h^n`` is already absorbed in ``K``.
    """

    def __init__(self, grid, t, K, scaled=False):
        K = np.array(K, dtype=complex)
        if K.shape != (grid.size, grid.size):
            raise GridMismatchError(f"kernel shape {K.shape} does not match grid size {grid.size}")
        if not np.all(np.isfinite(K)):
            raise NumericError("kernel contains non-finite entries")
        K.setflags(write=False)
        self.grid = grid
        self.t = float(t)
        self.K = K
        self.scaled = bool(scaled)

    def __repr__(self):
        return f"OperatorKernel({self.grid!r}, t={self.t}, scaled={self.scaled})"

    def matrix(self):
        """The quadrature-scaled matrix ``h^n K`` acting on sample vectors."""
        return self.K if self.scaled else self.grid.cell * self.K

    def with_scale(self, scaled):
        if scaled == self.scaled:
            return self
        c = self.grid.cell if scaled else 1.0 / self.grid.cell
        return OperatorKernel(self.grid, self.t, self.K * c, scaled)


def apply(kernel, f):
    """``(Op f)(x) = h^n sum_y K(x, y) f(y)``."""
    if f.grid != kernel.grid:
        raise GridMismatchError(f"function grid {f.grid!r} does not match kernel grid {kernel.grid!r}")
    out = kernel.matrix() @ f.values.ravel()
    return FunctionField(f.grid, out.reshape(f.grid.shape))


def _dual_lattice(grid):
    return grid.frequency_axis()


def _resample_matrix(grid):
    """Map PhaseGrid samples along one xi axis to the centered frequency lattice.

    Uses the periodic trigonometric interpolant; lattice points outside
    ``[-L, L)`` receive zero so the symbol is truncated to the box.
    """
    N = grid.N
    target = _dual_lattice(grid)
    freqs = np.fft.fftfreq(N, d=grid.h) * 2 * np.pi
    u = target + grid.L
    E = np.exp(1j * np.outer(u, freqs))
    E[:, N // 2] = np.cos(freqs[N // 2] * u)
    M = E @ (np.fft.fft(np.eye(N), axis=0) / N)
    inside = (target >= -grid.L) & (target < grid.L)
    M[~inside] = 0.0
    return M


def symbol_on_lattice(a):
    """Samples ``a(x_i, xi_m)`` on configuration grid x centered frequency lattice.

    The generator is used when present and then covers the whole lattice
    ``[-pi/h, pi/h)``.  Otherwise the samples are resampled along xi and
    lattice points outside ``[-L, L)`` are set to zero (the periodic
    interpolant would replicate the symbol there).
    """
    grid = a.grid
    n = grid.n
    lat = _dual_lattice(grid)
    if a.generator is not None:
        axes = [grid.axis] * n + [lat] * n
        pts = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
        return np.asarray(a.generator(pts), dtype=complex)
    M = _resample_matrix(grid)
    vals = a.values
    for j in range(n, 2 * n):
        vals = np.moveaxis(np.tensordot(M, vals, axes=([1], [j])), 0, j)
    return vals


def _wrapped_displacements(N):
    d = np.arange(N)
    return np.where(d < N // 2, d, d - N)


def _shift_multiplier(grid, t):
    """Per-axis multiplier ``P[k, d]`` moving samples from x to ``x - t w_d``.

    The Nyquist row uses a cosine so real functions stay real, and the
    antipodal displacement ``w = -L`` averages the two equivalent shifts.
    """
    N, h = grid.N, grid.h
    eta = np.fft.fftfreq(N, d=h) * 2 * np.pi
    w = _wrapped_displacements(N) * h
    P = np.exp(-1j * t * np.outer(eta, w))
    P[N // 2, :] = np.cos(t * eta[N // 2] * w)
    P[:, N // 2] = np.cos(t * eta * grid.L)
    return P


def _check_size(grid, max_size):
    cap = (_CAP_1D if grid.n == 1 else DEFAULT_MAX_SIZE) if max_size is None else max_size
    if grid.config.size > cap:
        raise ResourceLimitError(
            f"kernel of size {grid.config.size}x{grid.config.size} exceeds the cap {cap}; pass max_size to override"
        )


def build_kernel(a, t=0.5, method="fourier", max_size=None):
    """Kernel of ``Op_t(a)`` on the configuration grid of ``a``.

    Parameters
    ----------
    a : SymbolField
    t : float
        Quantization parameter; 1/2 is the Weyl rule.
    method : {'fourier', 'exact'}
        ``'fourier'`` moves the symbol to the off-grid points
        ``(1-t)x + t y`` by trigonometric interpolation along x.
        ``'exact'`` evaluates the generator there (after periodic wrapping).
        Symbols that do not decay at the box edge (polynomials) are not
        periodic along x, so interpolation rings there; use ``'exact'``.
    max_size : int, optional
        Cap on ``N^n``; defaults to 256 for ``n = 1`` and 4096 otherwise.

    Returns
    -------
    OperatorKernel
        Unscaled kernel; ``apply`` absorbs ``h^n``.
    """
    grid = a.grid
    grid.check_even()
    _check_size(grid, max_size)
    if not np.all(np.isfinite(a.values)):
        raise NumericError("symbol samples contain non-finite values")
    n, N = grid.n, grid.N
    if method == "fourier":
        A = symbol_on_lattice(a)
        B = _displacement_transform(A, n, N)
        # move midpoints: B(x_i, d) -> B(x_i - t w_d, d)
        B = np.fft.fftn(B, axes=range(n))
        P = _shift_multiplier(grid.config, t)
        for j in range(n):
            shape = [1] * (2 * n)
            shape[j] = N
            shape[n + j] = N
            B = B * P.reshape(shape)
        B = np.fft.ifftn(B, axes=range(n))
    elif method == "exact":
        if a.generator is None:
            raise InvalidParameterError("method 'exact' needs a symbol with a generator")
        B = _exact_midpoints(a, t)
    else:
        raise InvalidParameterError(f"unknown method {method!r}")
    B = B * (grid.dual().h / (2 * math.pi)) ** n
    K = _scatter(B, n, N)
    if not np.all(np.isfinite(K)):
        raise NumericError("kernel construction produced non-finite entries")
    return OperatorKernel(grid.config, t, K)


def _displacement_transform(A, n, N):
    """Sum over the frequency lattice: ``sum_m A(., xi_m) e^{i w_d xi_m}``."""
    sign = (-1.0) ** np.arange(N)
    B = A
    for j in range(n, 2 * n):
        B = np.fft.ifft(B, axis=j) * N
        shape = [1] * (2 * n)
        shape[j] = N
        B = B * sign.reshape(shape)
    return B


def _exact_midpoints(a, t):
    """Displacement table ``B[i, d]`` from exact symbol values at wrapped midpoints."""
    grid = a.grid
    n, N, L, h = grid.n, grid.N, grid.L, grid.h
    lat = _dual_lattice(grid)
    w = _wrapped_displacements(N) * h
    phase = np.exp(1j * np.outer(w, lat))  # (d, m)
    out = np.empty((N,) * (2 * n), dtype=complex)
    for d in np.ndindex(*(N,) * n):
        # the antipodal displacement -L is averaged with +L on each axis where it occurs
        options = [(t * L, -t * L) if dj == N // 2 else (-t * w[dj],) for dj in d]
        acc = 0.0
        combos = list(np.ndindex(*[len(o) for o in options]))
        for c in combos:
            zaxes = [(grid.axis + options[j][c[j]] + L) % (2 * L) - L for j in range(n)]
            pts = np.stack(np.meshgrid(*(zaxes + [lat] * n), indexing="ij"), axis=-1)
            vals = a.generator(pts)
            for j in range(n):
                vals = np.tensordot(vals, phase[d[j]], axes=([n], [0]))
            acc = acc + vals
        out[(slice(None),) * n + d] = acc / len(combos)
    return out


def _scatter(B, n, N):
    """Place ``B[i, d]`` at ``K[i, (i - d) mod N]`` (per axis)."""
    idx = np.indices((N,) * (2 * n))
    I = idx[:n]
    D = idx[n:]
    J = (I - D) % N
    K = np.zeros((N,) * (2 * n), dtype=complex)
    K[tuple(I) + tuple(J)] = B
    size = N**n
    return K.reshape(size, size)


def _phi_multiplier(grid):
    """``Phi`` evaluated on the 2n-dimensional FFT frequencies: ``<eta, omega>``."""
    n = grid.n
    f = np.fft.fftfreq(grid.N, d=grid.h) * 2 * np.pi
    phi = np.zeros(grid.shape)
    for j in range(n):
        shape_x = [1] * (2 * n)
        shape_x[j] = grid.N
        shape_xi = [1] * (2 * n)
        shape_xi[n + j] = grid.N
        phi = phi + f.reshape(shape_x) * f.reshape(shape_xi)
    return phi


def _phi_operator(expr, variables, n):
    """Symbolic ``Phi(D) = sum_j D_{x_j} D_{xi_j} = -sum_j d_{x_j} d_{xi_j}``."""
    return -sum(sp.diff(expr, variables[j], variables[n + j]) for j in range(n))


def _polynomial_series(gen, n, tau, start, stop=None):
    """``sum_{start <= k} (i tau Phi(D))^k a / k!`` for a polynomial generator (terminates)."""
    term = gen.expr
    total = sp.Integer(0)
    k = 0
    while term != 0 and (stop is None or k < stop):
        if k >= start:
            total += (sp.I * tau) ** k * term / sp.factorial(k)
        term = sp.expand(_phi_operator(term, gen.variables, n))
        k += 1
    return sp.expand(total)


def convert_quantization(a, s, t):
    """Symbol ``b`` with ``Op_t(b) = Op_s(a)``: ``b = e^{i (s - t) Phi(D)} a``.

    ``Phi(D)`` acts as the Fourier multiplier ``<eta, omega>`` where ``eta``
    and ``omega`` are dual to x and xi.  Polynomial generators are converted
    symbolically, and the result keeps an exact generator.
    """
    tau = float(s) - float(t)
    grid = a.grid
    if tau == 0.0:
        return SymbolField(grid, a.values, a.generator)
    gen = a.generator
    if isinstance(gen, Analytic) and gen.is_polynomial():
        expr = _polynomial_series(gen, grid.n, sp.nsimplify(tau), 0)
        return SymbolField.from_generator(grid, Analytic(expr, gen.variables))
    mult = np.exp(1j * tau * _phi_multiplier(grid))
    return SymbolField(grid, np.fft.ifftn(np.fft.fftn(a.values) * mult))


def expansion_remainder(a, t, N_terms):
    """``e^{i t Phi(D)} a - sum_{k < N_terms} (i t Phi(D))^k a / k!``.

    Raises
    ------
    FloatingPointError
        When the truncated series overflows on the grid's frequency set.
    """
    if int(N_terms) != N_terms or N_terms < 1:
        raise InvalidParameterError(f"N_terms must be a positive integer, got {N_terms}")
    N_terms = int(N_terms)
    grid = a.grid
    gen = a.generator
    if isinstance(gen, Analytic) and gen.is_polynomial():
        expr = _polynomial_series(gen, grid.n, sp.nsimplify(t), N_terms)
        return SymbolField.from_generator(grid, Analytic(expr, gen.variables))
    x = t * _phi_multiplier(grid)
    peak = float(np.abs(x).max())
    if peak > 0:
        # largest term of the series: peak^k / k!
        log_terms = [k * math.log(peak) - math.lgamma(k + 1) for k in range(N_terms)]
        if max(log_terms) > 690:
            raise FloatingPointError(
                f"series term (t Phi)^k/k! overflows for N_terms={N_terms} on this grid; reduce N_terms"
            )
    partial = np.zeros(grid.shape, dtype=complex)
    term = np.ones(grid.shape, dtype=complex)
    for k in range(N_terms):
        partial += term
        term = term * (1j * x) / (k + 1)
    mult = np.exp(1j * x) - partial
    return SymbolField(grid, np.fft.ifftn(np.fft.fftn(a.values) * mult))
