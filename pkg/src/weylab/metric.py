"""Quadratic forms on phase space: dual metrics, symplectic eigenvalues,
Planck's function, the symplectic core, and sampled diagnostics for the
slowly-varying, temperate and feasible conditions.

Coordinates are ordered ``(z_1..z_n, zeta_1..zeta_n)`` and the symplectic
matrix is ``J = [[0, I], [-I, 0]]`` everywhere.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from scipy.stats import qmc

from .errors import ConditioningWarning, InvalidParameterError, NonConvergenceError, NumericError

COND_WARN = 1e12


class QuadForm:
    """Symmetric positive-definite ``2n x 2n`` matrix ``A`` with ``g(Z) = Z^T A Z``."""

    def __init__(self, A, check=True):
        A = np.array(A, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] % 2:
            raise InvalidParameterError(f"expected a square matrix of even size, got shape {A.shape}")
        if check:
            scale = max(np.abs(A).max(), 1.0)
            if np.abs(A - A.T).max() > 1e-12 * scale:
                raise InvalidParameterError("matrix is not symmetric")
            if np.linalg.eigvalsh(0.5 * (A + A.T))[0] <= 0:
                raise InvalidParameterError("matrix is not positive definite")
        self.A = 0.5 * (A + A.T)
        self.A.setflags(write=False)
        self.n = A.shape[0] // 2

    def __repr__(self):
        return f"QuadForm({self.A.tolist()})"

    def __call__(self, Z):
        Z = np.asarray(Z, dtype=float)
        return np.einsum("...i,ij,...j->...", Z, self.A, Z)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.A, dtype=dtype)


def _mat(A):
    return A.A if isinstance(A, QuadForm) else np.asarray(A, dtype=float)


def symplectic_matrix(n):
    I = np.eye(n)
    Z = np.zeros((n, n))
    return np.block([[Z, I], [-I, Z]])


def interleave(blocks):
    """Assemble a ``2n x 2n`` form from per-pair ``2 x 2`` blocks acting on ``(z_j, zeta_j)``."""
    n = len(blocks)
    A = np.zeros((2 * n, 2 * n))
    for j, B in enumerate(blocks):
        idx = [j, n + j]
        A[np.ix_(idx, idx)] = B
    return A


def dual_metric(A):
    """``A^sigma = J^T A^{-1} J``; warns when ``A`` is badly conditioned."""
    M = _mat(A)
    n = M.shape[0] // 2
    cond = np.linalg.cond(M)
    if cond > COND_WARN:
        warnings.warn(f"condition number {cond:.3e} exceeds {COND_WARN:.0e}", ConditioningWarning, stacklevel=2)
    J = symplectic_matrix(n)
    Ainv = scipy.linalg.solve(M, np.eye(2 * n), assume_a="pos")
    out = J.T @ Ainv @ J
    return QuadForm(0.5 * (out + out.T), check=False)


def symplectic_eigenvalues(A):
    """Symplectic eigenvalues ``lambda_1 >= ... >= lambda_n > 0``.

    They are the square roots of the eigenvalues of ``-(J A)^2``, each of
    which occurs twice.  The computation uses the similar symmetric matrix
    ``-(A^{1/2} J A^{1/2})^2``.
    """
    M = _mat(A)
    n = M.shape[0] // 2
    R = scipy.linalg.sqrtm(M).real
    S = R @ symplectic_matrix(n) @ R
    H = S.T @ S
    mu = np.linalg.eigvalsh(0.5 * (H + H.T))[::-1]
    if mu[-1] < -1e-10 * max(mu[0], 1.0):
        raise NumericError(f"negative eigenvalue {mu[-1]:.3e} in the symplectic spectrum computation")
    lam = np.sqrt(np.maximum(mu, 0.0))
    return 0.5 * (lam[0::2] + lam[1::2])


def planck(A):
    """Planck's function at a point: the largest symplectic eigenvalue."""
    return float(symplectic_eigenvalues(A)[0])


def capacity(A):
    """Product of the symplectic eigenvalues (equal to ``sqrt(det A)``)."""
    return float(np.prod(symplectic_eigenvalues(A)))


def planck_sampled(A, directions=720):
    """``sup_Z (g(Z) / g^sigma(Z))^{1/2}`` over equally spaced unit directions (n = 1 only)."""
    M = _mat(A)
    if M.shape != (2, 2):
        raise InvalidParameterError("the sampled sup formula is implemented for n = 1")
    D = _mat(dual_metric(M))
    th = np.pi * np.arange(directions) / directions
    Z = np.stack([np.cos(th), np.sin(th)], axis=1)
    num = np.einsum("ki,ij,kj->k", Z, M, Z)
    den = np.einsum("ki,ij,kj->k", Z, D, Z)
    return float(np.sqrt(np.max(num / den)))


@dataclass
class CoreResult:
    form: QuadForm
    iterations: int
    residual: float


def symplectic_core(A, tol=1e-12, max_iter=60, info=False):
    """Limit of ``A <- (A + A^sigma) / 2``.

    Iteration stops when the max-entry change is at most ``tol``, or when the
    change reaches the round-off floor of the iterate (``64 eps ||A||``).
    Raises :class:`NonConvergenceError` after ``max_iter`` steps.
    """
    if not tol > 0:
        raise InvalidParameterError(f"tol must be positive, got {tol}")
    cur = _mat(A).copy()
    residual = np.inf
    for k in range(1, max_iter + 1):
        nxt = 0.5 * (cur + _mat(dual_metric(cur)))
        residual = float(np.abs(nxt - cur).max())
        cur = nxt
        floor = 64 * np.finfo(float).eps * np.abs(cur).max()
        if residual <= max(tol, floor):
            out = QuadForm(cur, check=False)
            return CoreResult(out, k, residual) if info else out
    raise NonConvergenceError(
        f"symplectic core did not converge in {max_iter} iterations (last change {residual:.3e})",
        residual=residual,
        iterations=max_iter,
    )


class QuadFormField:
    """Metric ``X -> g_X`` on phase space.

    Parameters
    ----------
    func : callable
        Maps points of shape ``(..., 2n)`` to matrices ``(..., 2n, 2n)`` when
        ``vectorized`` is true, or a single point to a single matrix.
    n : int
    meta : dict, optional
        Declared parameter ranges or provenance of the field.
    """

    def __init__(self, func, n, vectorized=False, meta=None):
        self.func = func
        self.n = int(n)
        self.vectorized = vectorized
        self.meta = dict(meta or {})

    def __call__(self, X):
        X = np.asarray(X, dtype=float)
        if self.vectorized:
            return np.asarray(self.func(X), dtype=float)
        flat = X.reshape(-1, 2 * self.n)
        out = np.stack([np.asarray(self.func(x), dtype=float) for x in flat])
        return out.reshape(X.shape[:-1] + (2 * self.n, 2 * self.n))

    def at(self, X):
        return QuadForm(self(np.asarray(X, dtype=float)), check=False)

    @classmethod
    def constant(cls, A):
        M = _mat(A)
        return cls(lambda X: np.broadcast_to(M, np.shape(X)[:-1] + M.shape), M.shape[0] // 2, vectorized=True)


def box_samples(n, L, k, seed=0):
    """Deterministic scrambled-Sobol points in ``[-L, L]^{2n}``."""
    sob = qmc.Sobol(d=2 * n, scramble=True, seed=seed)
    m = int(np.ceil(np.log2(max(k, 2))))
    pts = sob.random_base2(m)[:k]
    return (2 * pts - 1) * L


def _unit_directions(rng, k, dim):
    v = rng.normal(size=(k, dim))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def _gen_eig_extremes(AX, AY):
    """Extreme eigenvalues of ``A_X^{-1} A_Y`` for stacks of matrices."""
    Lc = np.linalg.cholesky(AX)
    Linv = np.linalg.inv(Lc)
    M = Linv @ AY @ np.swapaxes(Linv, -1, -2)
    w = np.linalg.eigvalsh(0.5 * (M + np.swapaxes(M, -1, -2)))
    return w[..., 0], w[..., -1]


@dataclass
class SlowReport:
    C_est: float
    violations: int
    pairs: int
    finite: bool
    ratios: list = field(default_factory=list, repr=False)

    def as_dict(self):
        return {"C_est": self.C_est, "violations": self.violations, "pairs": self.pairs, "finite": self.finite}


def _neighbours(g, X, c, per_point, rng):
    """Points ``Y`` with ``g_X(Y - X) <= c``, including points on the boundary."""
    X = np.asarray(X, dtype=float)
    dim = 2 * g.n
    AX = g(X)
    Xr = np.repeat(X, per_point, axis=0)
    Ar = np.repeat(AX, per_point, axis=0)
    u = _unit_directions(rng, len(Xr), dim)
    r = rng.uniform(size=(len(Xr), 1))
    r[::2] = 1.0  # half of the pairs sit on the boundary of the ball
    # Z = sqrt(c) r A^{-1/2} u satisfies g_X(Z) = c r^2
    w, V = np.linalg.eigh(Ar)
    Z = np.einsum("kij,kj->ki", V, np.einsum("kji,kj->ki", V, u) / np.sqrt(w))
    return Xr, Xr + np.sqrt(c) * r * Z


def slowly_varying_report(g, samples, c, per_point=4, seed=0, C_bound=None):
    """Least ``C`` with ``C^{-1} g_Y <= g_X <= C g_Y`` over sampled close pairs.

    For each sample ``X``, ``per_point`` points ``Y`` with ``g_X(Y - X) <= c``
    are drawn; ``C`` is read off the extreme generalized eigenvalues of the pair.
    """
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    if samples.size == 0:
        raise InvalidParameterError("sample set is empty")
    rng = np.random.default_rng(seed)
    X, Y = _neighbours(g, samples, c, per_point, rng)
    lo, hi = _gen_eig_extremes(g(X), g(Y))
    with np.errstate(divide="ignore", over="ignore"):
        ratios = np.maximum(hi, 1.0 / lo)
    C = float(np.max(ratios))
    violations = 0 if C_bound is None else int(np.sum(ratios > C_bound))
    return SlowReport(C, violations, len(ratios), bool(np.isfinite(C)), ratios.tolist())


@dataclass
class TemperateReport:
    C_est: float
    N_est: int
    curve: list

    def as_dict(self):
        return {"C_est": self.C_est, "N_est": self.N_est, "curve": self.curve}


def _temperate_fit(q, d, N_max, slack):
    logq = np.log(q)
    log1d = np.log1p(d)
    curve = [float(np.exp(np.max(logq - N * log1d))) for N in range(N_max + 1)]
    target = (1.0 + slack) * min(curve)
    N_est = next(N for N, C in enumerate(curve) if C <= target)
    return TemperateReport(curve[N_est], N_est, curve)


def temperate_report(g, samples, N_max=8, slack=1.0, weight=None):
    """Fit ``g_Y(Z) <= C g_X(Z) (1 + g^sigma_Y(X - Y))^N`` over all sample pairs.

    ``sup_Z g_Y(Z)/g_X(Z)`` is the top eigenvalue of ``A_X^{-1} A_Y``.  The
    curve ``C(N)`` for ``N = 0..N_max`` is reported; ``N_est`` is the least
    ``N`` whose constant is within a factor ``1 + slack`` of the best one.
    With ``weight`` given, the ratio ``m(X)/m(Y)`` replaces the metric ratio.
    """
    S = np.atleast_2d(np.asarray(samples, dtype=float))
    if S.size == 0:
        raise InvalidParameterError("sample set is empty")
    k = len(S)
    i, j = np.meshgrid(np.arange(k), np.arange(k), indexing="ij")
    i, j = i.ravel(), j.ravel()
    A = g(S)
    D = np.stack([_mat(dual_metric(a)) for a in A])
    diff = S[i] - S[j]
    d = np.einsum("ki,kij,kj->k", diff, D[j], diff)
    if weight is None:
        _, q = _gen_eig_extremes(A[i], A[j])
    else:
        m = np.asarray(weight(S), dtype=float)
        q = m[i] / m[j]
    return _temperate_fit(q, d, N_max, slack)


@dataclass
class FeasibleVerdict:
    slow_ok: bool
    planck_ok: bool
    C_est: float
    max_planck: float

    def as_dict(self):
        return {"slow_ok": self.slow_ok, "planck_ok": self.planck_ok, "C_est": self.C_est, "max_planck": self.max_planck}


def feasible_check(g, samples, c=0.25, C_bound=100.0, seed=0):
    """Sampled check of "slowly varying and ``h_g <= 1``"."""
    S = np.atleast_2d(np.asarray(samples, dtype=float))
    rep = slowly_varying_report(g, S, c, seed=seed)
    hmax = max(planck(a) for a in g(S))
    return FeasibleVerdict(bool(rep.finite and rep.C_est <= C_bound), bool(hmax <= 1 + 1e-12), rep.C_est, hmax)
