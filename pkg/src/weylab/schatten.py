"""Singular spectra of quadrature-scaled kernels and Schatten norms."""
from __future__ import annotations

import math

import numpy as np
import scipy.linalg

from .errors import InvalidParameterError, NumericError
from .grids import lp_norm
from .quantization import OperatorKernel, build_kernel

RESIDUAL_TOL = 1e-10


class SingularSpectrum:
    """Descending singular values of ``scale * K``.

    Attributes
    ----------
    sigma : ndarray
    scale : float
        Quadrature factor absorbed before the decomposition.
    residual : float
        ``||U diag(sigma) Vh - scale K||_max``, certified ``<= 1e-10 sigma_1``.
    U, Vh : ndarray or None
        Singular vectors when requested.
    """

    def __init__(self, sigma, scale=1.0, residual=0.0, U=None, Vh=None):
        sigma = np.asarray(sigma, dtype=float)
        if np.any(np.diff(sigma) > 0) or np.any(sigma < 0):
            raise NumericError("singular values must be nonnegative and sorted descending")
        self.sigma = sigma
        self.scale = float(scale)
        self.residual = float(residual)
        self.U = U
        self.Vh = Vh

    def __repr__(self):
        head = ", ".join(f"{s:.4g}" for s in self.sigma[:4])
        return f"SingularSpectrum([{head}, ...], residual={self.residual:.2e})"

    def head(self, k=16):
        return self.sigma[:k].tolist()


def _matrix(kernel):
    if isinstance(kernel, OperatorKernel):
        M = kernel.matrix()
        scale = 1.0 if kernel.scaled else kernel.grid.cell
    else:
        M = np.asarray(kernel, dtype=complex)
        scale = 1.0
    return M, scale


def singular_values(kernel, vectors=False):
    """SVD of the quadrature-scaled kernel with a certified reconstruction residual.

    ``kernel`` may be an :class:`OperatorKernel` or a plain matrix (scale 1).
    LAPACK's divide-and-conquer driver is tried first and the QR-iteration
    driver is the fallback.
    """
    M, scale = _matrix(kernel)
    if not np.all(np.isfinite(M)):
        raise NumericError("kernel has non-finite entries")
    last = None
    for driver in ("gesdd", "gesvd"):
        try:
            U, s, Vh = scipy.linalg.svd(M, lapack_driver=driver, check_finite=False)
        except (np.linalg.LinAlgError, ValueError) as exc:
            last = exc
            continue
        residual = float(np.abs((U * s) @ Vh - M).max()) if M.size else 0.0
        if residual <= RESIDUAL_TOL * max(s[0] if s.size else 0.0, np.finfo(float).tiny):
            s = np.maximum(s, 0.0)
            if vectors:
                return SingularSpectrum(s, scale, residual, U, Vh)
            return SingularSpectrum(s, scale, residual)
        last = NumericError(f"reconstruction residual {residual:.3e} too large")
    raise NumericError(f"singular value decomposition of a {M.shape[0]}x{M.shape[1]} matrix failed: {last}")


def schatten_norm(spec, p):
    """``(sum sigma^p)^{1/p}``, or ``sigma_1`` for ``p = inf``."""
    p = float(p)
    if not p >= 1:
        raise InvalidParameterError(f"Schatten exponent must satisfy p >= 1, got {p}")
    s = spec.sigma
    if s.size == 0 or s[0] == 0:
        return 0.0
    if math.isinf(p):
        return float(s[0])
    # factor out sigma_1 to avoid overflow for large p
    return float(s[0] * np.sum((s / s[0]) ** p) ** (1.0 / p))


def schatten_norms(a, ps, t=0.5, **kw):
    """Schatten norms of ``Op_t(a)`` for several exponents."""
    spec = singular_values(build_kernel(a, t, **kw))
    return {p: schatten_norm(spec, p) for p in ps}


def hs_identity_gap(a, **kw):
    """Relative gap between ``s_2(Op^w a)`` and ``(2 pi)^{-n/2} ||a||_{L^2}``."""
    n = a.grid.n
    rhs = (2 * math.pi) ** (-n / 2) * lp_norm(a, 2)
    if rhs == 0:
        raise InvalidParameterError("relative gap is undefined for the zero symbol")
    lhs = schatten_norm(singular_values(build_kernel(a, 0.5, **kw)), 2)
    return abs(lhs - rhs) / rhs


def on_sequence_lower_bound(kernel, p, trials, seed=0, sequences=None, k=None):
    """Best ``(sum_j |(T f_j, g_j)|^p)^{1/p}`` over sampled orthonormal sequences.

    Parameters
    ----------
    kernel : OperatorKernel or ndarray
        Quadrature-scaled matrix ``T`` in the sample basis.
    p : float
    trials : int
        Number of random orthonormal pairs ``({f_j}, {g_j})`` drawn (via QR of
        complex Gaussian matrices).
    sequences : list of (F, G), optional
        Explicit candidates; columns are the sequences.  They are tried in
        addition to the random ones.
    k : int, optional
        Length of the random sequences (default: full dimension).
    """
    if int(trials) != trials or trials < 1:
        raise InvalidParameterError(f"trials must be a positive integer, got {trials}")
    p = float(p)
    if not p >= 1:
        raise InvalidParameterError(f"exponent must satisfy p >= 1, got {p}")
    T, _ = _matrix(kernel)
    dim = T.shape[0]
    k = dim if k is None else int(k)
    rng = np.random.default_rng(seed)
    candidates = list(sequences or [])
    n_random = trials - len(candidates)
    for _ in range(max(n_random, 0)):
        F = _random_orthonormal(rng, dim, k)
        G = _random_orthonormal(rng, dim, k)
        candidates.append((F, G))
    best = 0.0
    for F, G in candidates:
        # (T f_j, g_j) = g_j^* T f_j
        vals = np.abs(np.einsum("ij,ij->j", G.conj(), T @ F))
        val = float(vals.max()) if math.isinf(p) else float(np.sum(vals**p) ** (1.0 / p))
        best = max(best, val)
    return best


def _random_orthonormal(rng, dim, k):
    Z = rng.normal(size=(dim, k)) + 1j * rng.normal(size=(dim, k))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def lone_infinity_bound_gap(a, **kw):
    """``2^n s_1(Op^w a) - ||a||_{L^inf}``; nonnegative up to round-off."""
    n = a.grid.n
    if not np.any(a.values):
        return 0.0
    s1 = schatten_norm(singular_values(build_kernel(a, 0.5, **kw)), 1)
    return 2**n * s1 - lp_norm(a, np.inf)
