"""Uniform grids on truncated boxes, sampled fields, quadrature norms and
the (symplectic) Fourier transforms acting on them.

Every axis of a grid samples ``[-L, L)`` at ``x_k = -L + k h`` with
``h = 2L/N``.  A :class:`PhaseGrid` of base dimension ``n`` has ``2n`` axes,
ordered ``(x_1..x_n, xi_1..xi_n)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyRegionError, GridMismatchError, InvalidParameterError
from .symbolic import as_generator, config_symbols, phase_space_symbols


@dataclass(frozen=True)
class UniformGrid:
    """Tensor grid ``[-L, L)^dim`` with ``N`` points per axis."""

    dim: int
    L: float
    N: int

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise InvalidParameterError(f"dimension must be a positive integer, got {self.dim}")
        if not (self.L > 0 and math.isfinite(self.L)):
            raise InvalidParameterError(f"half-width must be positive, got {self.L}")
        if int(self.N) != self.N or self.N < 2:
            raise InvalidParameterError(f"points per axis must be an integer >= 2, got {self.N}")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "L", float(self.L))
        object.__setattr__(self, "N", int(self.N))

    @property
    def h(self):
        return 2.0 * self.L / self.N

    @property
    def axis(self):
        return -self.L + self.h * np.arange(self.N)

    @property
    def shape(self):
        return (self.N,) * self.dim

    @property
    def size(self):
        return self.N**self.dim

    @property
    def cell(self):
        """Quadrature weight ``h^dim`` of one grid cell."""
        return self.h**self.dim

    def points(self):
        """Array of shape ``shape + (dim,)`` holding the grid coordinates."""
        ax = self.axis
        mesh = np.meshgrid(*([ax] * self.dim), indexing="ij")
        return np.stack(mesh, axis=-1)

    def radius(self):
        ax2 = self.axis**2
        r2 = np.zeros(self.shape)
        for j in range(self.dim):
            r2 = r2 + ax2.reshape((1,) * j + (-1,) + (1,) * (self.dim - j - 1))
        return np.sqrt(r2)

    def frequency_axis(self):
        """Centered frequencies ``[-pi/h, pi/h)`` with spacing ``pi/L``."""
        return -np.pi / self.h + (np.pi / self.L) * np.arange(self.N)

    def dual(self):
        """The grid carrying the centered frequency axis."""
        return type(self)._rebuild(self, np.pi / self.h)

    @staticmethod
    def _rebuild(grid, L):
        return UniformGrid(grid.dim, L, grid.N)

    def check_even(self):
        if self.N % 2:
            from .errors import MidpointError

            raise MidpointError(f"N={self.N} is odd; midpoints of grid points are not representable")


@dataclass(frozen=True)
class PhaseGrid(UniformGrid):
    """Grid on the truncated phase space ``[-L, L)^{2n}``.

    Parameters
    ----------
    n : int
        Base dimension; the grid has ``2n`` axes.
    L : float
    N : int
    """

    def __init__(self, n, L, N):
        object.__setattr__(self, "n", n)
        super().__init__(2 * int(n), L, N)

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise InvalidParameterError(f"base dimension must be a positive integer, got {self.n}")
        super().__post_init__()

    def __repr__(self):
        return f"PhaseGrid(n={self.n}, L={self.L}, N={self.N})"

    @property
    def config(self):
        """Configuration-space grid ``[-L, L)^n``."""
        return UniformGrid(self.n, self.L, self.N)

    @staticmethod
    def _rebuild(grid, L):
        return PhaseGrid(grid.n, L, grid.N)

    @classmethod
    def parse(cls, text):
        """Build a grid from the ``"n,L,N"`` form used on the command line."""
        try:
            n, L, N = text.split(",")
            return cls(int(n), float(L), int(N))
        except ValueError as exc:
            raise InvalidParameterError(f"grid must be given as n,L,N, got {text!r}") from exc


class Field:
    """Complex samples on a uniform grid, optionally backed by a generator."""

    def __init__(self, grid, values, generator=None):
        values = np.array(values, dtype=complex)
        if values.shape != grid.shape:
            if values.size != grid.size:
                raise GridMismatchError(f"{values.size} values do not fit a grid with {grid.size} points")
            values = values.reshape(grid.shape)
        values.setflags(write=False)
        self.grid = grid
        self.values = values
        self.generator = generator

    def __repr__(self):
        return f"{type(self).__name__}({self.grid!r})"

    @classmethod
    def from_generator(cls, grid, generator):
        gen = as_generator(generator, cls._variables(grid))
        return cls(grid, gen(grid.points()), gen)

    def evaluate(self, points):
        """Values at arbitrary points: exact with a generator, else trigonometric interpolation."""
        points = np.asarray(points, dtype=float)
        if self.generator is not None:
            return self.generator(points)
        return trig_interpolate(self.values, self.grid, points)

    def _like(self, values, generator=None):
        return type(self)(self.grid, values, generator)

    def __add__(self, other):
        _same_grid(self, other)
        return self._like(self.values + other.values)

    def __mul__(self, c):
        return self._like(self.values * c)

    __rmul__ = __mul__


class SymbolField(Field):
    """Samples of a symbol ``a(x, xi)`` on a :class:`PhaseGrid`."""

    def __init__(self, grid, values, generator=None):
        if not isinstance(grid, PhaseGrid):
            raise GridMismatchError("a SymbolField lives on a PhaseGrid")
        super().__init__(grid, values, generator)

    @staticmethod
    def _variables(grid):
        return phase_space_symbols(grid.n)


class FunctionField(Field):
    """Samples of a function on configuration space."""

    @staticmethod
    def _variables(grid):
        return config_symbols(grid.dim)


def _same_grid(a, b):
    if a.grid != b.grid:
        raise GridMismatchError(f"fields live on different grids: {a.grid!r} vs {b.grid!r}")


def trig_interpolate(values, grid, points):
    """Evaluate the periodic trigonometric interpolant of grid samples.

    The Nyquist coefficient is split symmetrically so that real samples give
    a real interpolant.
    """
    values = np.asarray(values, dtype=complex)
    pts = np.asarray(points, dtype=float)
    lead = pts.shape[:-1]
    pts = pts.reshape(-1, grid.dim)
    coef = np.fft.fftn(values) / grid.size
    freqs = np.fft.fftfreq(grid.N, d=grid.h) * 2 * np.pi
    nyq = grid.N // 2 if grid.N % 2 == 0 else None
    out = coef
    # contract one axis at a time: coef[k1..kd] * prod_j e_j(k_j, p)
    # first axis builds the point index, remaining axes are reduced against it
    def basis(j):
        u = pts[:, j] + grid.L
        E = np.exp(1j * np.outer(u, freqs))
        if nyq is not None:
            E[:, nyq] = np.cos(freqs[nyq] * u)
        return E

    out = np.tensordot(basis(0), coef, axes=([1], [0]))  # (P, N, ..., N)
    for j in range(1, grid.dim):
        E = basis(j)
        out = np.einsum("pk,pk...->p...", E, out)
    return out.reshape(lead)


def lp_norm(field, p):
    """Riemann-sum ``L^p`` norm of a field; ``p`` may be ``np.inf``."""
    p = _check_p(p)
    v = np.abs(field.values)
    if np.isinf(p):
        return float(v.max(initial=0.0))
    return float((field.grid.cell * np.sum(v**p)) ** (1.0 / p))


def _check_p(p):
    p = float(p)
    if not p >= 1:
        raise InvalidParameterError(f"exponent must satisfy p >= 1, got {p}")
    return p


def linf_tail(field, R):
    """Largest ``|a(X)|`` over grid points with ``|X| >= R``."""
    grid = field.grid
    if not R > 0:
        raise InvalidParameterError(f"radius must be positive, got {R}")
    mask = grid.radius() >= R
    if not mask.any():
        raise EmptyRegionError(f"no grid point has |X| >= {R} (grid diagonal {grid.L * math.sqrt(grid.dim):.4g})")
    return float(np.abs(field.values[mask]).max())


def fourier(field, direction="forward"):
    """Scaled DFT realizing ``(2 pi)^{-d/2} int f(x) e^{-+ i<x, xi>} dx``.

    The output lives on ``field.grid.dual()``, whose axis is the centered
    frequency axis.  ``inverse`` maps back from the dual grid; the two are
    exact inverses of each other.
    """
    grid = field.grid
    d = grid.dim
    if direction == "forward":
        src, dst, sign = grid, grid.dual(), -1
    elif direction == "inverse":
        # field lives on a dual grid; recover the primal half-width
        dst = grid.dual()
        src, sign = grid, +1
    else:
        raise InvalidParameterError(f"direction must be 'forward' or 'inverse', got {direction!r}")
    N = grid.N
    k = np.arange(N)
    u0, v0 = src.axis[0], dst.axis[0]
    # e^{s i (u0 + k du)(v0 + m dv)} with du dv = 2 pi / N
    pre = np.exp(sign * 1j * v0 * src.h * k)
    post = np.exp(sign * 1j * u0 * dst.axis)
    out = field.values
    for ax in range(d):
        shape = [1] * d
        shape[ax] = N
        out = out * pre.reshape(shape)
        out = np.fft.fft(out, axis=ax) if sign < 0 else np.fft.ifft(out, axis=ax) * N
        out = out * post.reshape(shape)
    out = out * (src.h / math.sqrt(2 * math.pi)) ** d
    return type(field)(dst, out)


def symplectic_fourier(a):
    """Riemann-sum realization of ``pi^{-n} int a(Y) e^{2 i sigma(X,Y)} dY``.

    With ``X = (x, xi)``, ``Y = (y, eta)`` and ``sigma(X, Y) = <y, xi> - <x, eta>``.
    The output lives on the same grid as the input.
    """
    grid = a.grid
    n = grid.n
    u = grid.axis
    E = np.exp(2j * np.outer(u, u))  # E[v, u] = e^{2 i v u}
    out = a.values
    for j in range(n):
        # y_j (axis j) -> xi_j (axis n+j) with kernel e^{+2i y xi}
        # eta_j (axis n+j) -> x_j (axis j) with kernel e^{-2i x eta}
        out = np.moveaxis(out, (j, n + j), (0, 1))
        out = np.tensordot(E, out, axes=([1], [0]))  # (xi, eta, ...)
        out = np.tensordot(E.conj(), out, axes=([1], [1]))  # (x, xi, ...)
        out = np.moveaxis(out, (0, 1), (j, n + j))
    out = out * (grid.h**2 / math.pi) ** n
    return SymbolField(grid, out)


def pairing(a, b):
    """Quadrature value of ``int a(X) conj(b(X)) dX``."""
    _same_grid(a, b)
    return complex(a.grid.cell * np.vdot(b.values.ravel(), a.values.ravel()))


def quarter_turn(a):
    """Compose with the symplectic rotation ``(x, xi) -> (xi, -x)`` exactly on the grid."""
    grid = a.grid
    n = grid.n
    v = a.values
    # b(x, xi) = a(xi, -x): index of -x_k is (N - k) mod N on the periodic grid
    perm = list(range(n, 2 * n)) + list(range(n))
    b = np.transpose(v, perm)
    idx = (-np.arange(grid.N)) % grid.N
    for j in range(n):
        b = np.take(b, idx, axis=j)
    return SymbolField(grid, b)
