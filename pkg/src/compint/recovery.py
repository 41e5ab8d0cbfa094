"""Modal spectrum recovery: harmonic inversion and Basis Pursuit.

Two routes back from measurements y_j = P(alpha_j) - 1 to the weight vector x:
`ft_recover` projects Nyquist-rate evenly sampled data onto the cosine
harmonics (exact for noiseless M >= 2N), and `basis_pursuit` solves the l1
program for random sub-Nyquist schedules.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .modes import _readonly
from .sensing import (DelaySchedule, MeasurementVector, ModalSpectrum,
                      ScheduleKind, SensingMatrix, even_alphas, sensing_matrix)

# External schedules count as evenly spaced if each alpha_j matches 2*pi*j/M
# to this absolute tolerance (covers files printed with >= 15 digits).
_EVEN_GRID_TOL = 1e-9


class InsufficientSamplingError(ValueError):
    """Even-grid sampling is below the Nyquist rate for the requested N."""


class Method(enum.Enum):
    FT = "ft"
    BP = "bp"


@dataclass(frozen=True)
class BPOptions:
    """Basis Pursuit solver configuration.

    residual_epsilon is the data-fidelity radius ||Phi x - y||_2 <= eps; the
    default 1e-9 approximates the equality-constrained program.  Set
    nonnegative to restrict the search to x >= 0.  Entries of the solution
    smaller in magnitude than zero_threshold are snapped to 0 in the reported
    spectrum (the raw solution is kept alongside).
    """

    residual_epsilon: float = 1e-9
    penalty_rho: float = 1.0
    abs_tol: float = 1e-8
    rel_tol: float = 1e-6
    max_iters: int = 50000
    nonnegative: bool = False
    zero_threshold: float = 1e-6

    def __post_init__(self):
        if self.residual_epsilon < 0:
            raise ValueError("residual_epsilon must be >= 0")
        if self.penalty_rho <= 0:
            raise ValueError("penalty_rho must be > 0")
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be > 0")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.zero_threshold < 0:
            raise ValueError("zero_threshold must be >= 0")


@dataclass(frozen=True)
class RecoveryResult:
    """Recovered spectrum plus solver metadata.

    `spectrum` is the reporting view: zero-snapped at the configured threshold
    and clipped at 0 (weights are physically nonnegative).  `raw` is the
    untouched solver output, which failed or noisy recoveries may leave signed;
    error metrics should use it.
    """

    spectrum: ModalSpectrum
    iterations: int
    final_residual: float
    converged: bool
    method: Method
    raw: np.ndarray

    def __post_init__(self):
        if self.final_residual < 0:
            raise ValueError("final_residual must be >= 0")
        object.__setattr__(self, "raw", _readonly(np.asarray(self.raw, dtype=float).copy()))


def _as_vector(x) -> np.ndarray:
    if isinstance(x, ModalSpectrum):
        return x.weights
    return np.asarray(x, dtype=float)


def _reported_spectrum(raw: np.ndarray, zero_threshold: float) -> ModalSpectrum:
    snapped = np.where(np.abs(raw) < zero_threshold, 0.0, raw)
    return ModalSpectrum(np.maximum(snapped, 0.0))


def _is_even_grid(schedule: DelaySchedule) -> bool:
    if schedule.kind is ScheduleKind.EVEN_GRID:
        return True
    ref = even_alphas(schedule.m)
    return bool(np.max(np.abs(schedule.alphas - ref)) <= _EVEN_GRID_TOL)


def ft_recover(y: MeasurementVector, schedule: DelaySchedule, n_modes: int) -> RecoveryResult:
    """Harmonic inversion of evenly sampled data: x_n = w_n sum_j y_j cos(n a_j).

    w_n = 2/M except at the edge harmonic n = M/2 (reached only when M = 2N
    exactly), where sum_j cos^2(n a_j) = M instead of M/2 and w_n = 1/M.
    Exact on noiseless even-grid data with M >= 2N.
    """
    if n_modes < 1:
        raise ValueError(f"n_modes must be >= 1, got {n_modes}")
    if not _is_even_grid(schedule):
        raise ValueError("ft_recover requires an evenly spaced schedule")
    m = schedule.m
    if m < 2 * n_modes:
        raise InsufficientSamplingError(
            f"M={m} below Nyquist rate 2N={2 * n_modes} for N={n_modes}")
    phi = sensing_matrix(schedule, n_modes)
    coeffs = (2.0 / m) * (phi.entries.T @ y.values)
    if m == 2 * n_modes:
        coeffs[-1] *= 0.5
    residual = float(np.linalg.norm(phi.entries @ coeffs - y.values))
    return RecoveryResult(
        spectrum=ModalSpectrum(np.maximum(coeffs, 0.0)),
        iterations=0,
        final_residual=residual,
        converged=True,
        method=Method.FT,
        raw=coeffs,
    )


def basis_pursuit(phi: SensingMatrix, y: MeasurementVector,
                  opts: BPOptions = BPOptions()) -> RecoveryResult:
    """Solve min ||x||_1 subject to ||Phi x - y||_2 <= residual_epsilon.

    ADMM splitting: x carries the quadratic coupling, z the l1 proximal step
    (soft thresholding, one-sided if nonnegative), and w the projection onto
    the epsilon-ball around y:

        x <- argmin ||x - z + u1||^2 + ||Phi x - w + u2||^2   (cached Cholesky)
        z <- shrink(x + u1, 1/rho)
        w <- y + clip(Phi x + u2 - y, epsilon)
        u1 <- u1 + x - z ;  u2 <- u2 + Phi x - w

    Stops when the standard primal/dual residual criteria hold and the z
    iterate itself is feasible to within abs_tol, so a converged result always
    satisfies ||Phi z - y||_2 <= epsilon + abs_tol.  Non-convergence within
    max_iters is reported through converged=False, never raised.
    """
    a = phi.entries
    m, n = a.shape
    if len(y) != m:
        raise ValueError(f"measurement length {len(y)} != matrix rows {m}")
    rho = opts.penalty_rho
    eps = opts.residual_epsilon
    factor = cho_factor(np.eye(n) + a.T @ a)

    x = np.zeros(n)
    z = np.zeros(n)
    w = np.zeros(m)
    u1 = np.zeros(n)
    u2 = np.zeros(m)
    yv = y.values
    kappa = 1.0 / rho
    sqrt_nm = np.sqrt(n + m)
    sqrt_n = np.sqrt(n)

    iterations = 0
    converged = False
    for iterations in range(1, opts.max_iters + 1):
        x = cho_solve(factor, (z - u1) + a.T @ (w - u2))
        ax = a @ x
        z_prev = z
        w_prev = w
        v = x + u1
        if opts.nonnegative:
            z = np.maximum(v - kappa, 0.0)
        else:
            z = np.sign(v) * np.maximum(np.abs(v) - kappa, 0.0)
        d = ax + u2 - yv
        dist = np.linalg.norm(d)
        w = yv + (d if dist <= eps else d * (eps / dist))
        u1 = u1 + (x - z)
        u2 = u2 + (ax - w)

        pri = np.sqrt(np.sum((x - z) ** 2) + np.sum((ax - w) ** 2))
        dual = rho * np.linalg.norm((z - z_prev) + a.T @ (w - w_prev))
        eps_pri = sqrt_nm * opts.abs_tol + opts.rel_tol * max(
            np.sqrt(np.sum(x ** 2) + np.sum(ax ** 2)),
            np.sqrt(np.sum(z ** 2) + np.sum(w ** 2)))
        eps_dual = sqrt_n * opts.abs_tol + opts.rel_tol * rho * np.linalg.norm(u1 + a.T @ u2)
        if pri <= eps_pri and dual <= eps_dual:
            if np.linalg.norm(a @ z - yv) <= eps + opts.abs_tol:
                converged = True
                break

    residual = float(np.linalg.norm(a @ z - yv))
    return RecoveryResult(
        spectrum=_reported_spectrum(z, opts.zero_threshold),
        iterations=iterations,
        final_residual=residual,
        converged=converged,
        method=Method.BP,
        raw=z,
    )


def reconstruction_error(reference, estimate) -> float:
    """Scaled error ||ref - est||^2 / ||ref||^2.

    Accepts ModalSpectrum objects or plain vectors (so raw solver outputs can
    be scored directly).
    """
    ref = _as_vector(reference)
    est = _as_vector(estimate)
    if ref.shape != est.shape:
        raise ValueError(f"length mismatch: {ref.shape} vs {est.shape}")
    denom = float(ref @ ref)
    if denom == 0.0:
        raise ValueError("reference spectrum must be nonzero")
    diff = ref - est
    return float(diff @ diff) / denom
