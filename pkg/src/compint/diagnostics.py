"""Empirical certification of the interferometric sensing ensemble.

Probes the properties that make random sub-Nyquist cosine sampling usable for
sparse recovery: the per-vector isometry defect eta(x), its distribution over
an ensemble of sparse vectors (a proxy for the restricted isometry constant),
the incoherence bound max |entry|^2 <= 1, and the row second-moment matrix
E[phi^T phi] = 0.5 I.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._rng import derive_seed, stream
from .modes import _readonly
from .sensing import ModalSpectrum, SensingMatrix, random_schedule, sensing_matrix

_TWO_PI = 2.0 * np.pi

# Fixed histogram layout: 101 uniform bins spanning [-1, 1].
_HIST_BINS = 101
_HIST_EDGES = np.linspace(-1.0, 1.0, _HIST_BINS + 1)

# Row block size for the isotropy accumulation (memory cap, not a tuning knob).
_ROW_CHUNK = 1 << 16


@dataclass(frozen=True)
class EtaEnsembleReport:
    """Histogram and summary statistics of eta over an s-sparse ensemble.

    Values outside [-1, 1] are clamped into the end bins and additionally
    counted in clamped_low / clamped_high.
    """

    bin_edges: np.ndarray
    counts: np.ndarray
    max_abs_eta: float
    mean_eta: float
    sample_count: int
    s: int
    m: int
    n_modes: int
    clamped_low: int
    clamped_high: int

    def __post_init__(self):
        edges = np.asarray(self.bin_edges, dtype=float).copy()
        counts = np.asarray(self.counts, dtype=np.int64).copy()
        if len(edges) != len(counts) + 1:
            raise ValueError("bin_edges must be one longer than counts")
        if int(counts.sum()) != self.sample_count:
            raise ValueError("histogram counts must sum to sample_count")
        if self.max_abs_eta < abs(self.mean_eta):
            raise ValueError("max_abs_eta cannot be below |mean_eta|")
        object.__setattr__(self, "bin_edges", _readonly(edges))
        object.__setattr__(self, "counts", _readonly(counts))


@dataclass(frozen=True)
class IsotropyReport:
    """Monte-Carlo estimate of the row second-moment matrix E[phi^T phi]."""

    estimate: np.ndarray
    max_offdiag_abs: float
    max_diag_dev: float
    rows_sampled: int

    def __post_init__(self):
        est = np.asarray(self.estimate, dtype=float).copy()
        if est.ndim != 2 or est.shape[0] != est.shape[1]:
            raise ValueError("estimate must be a square matrix")
        if np.max(np.abs(est - est.T)) > 1e-12:
            raise ValueError("estimate must be symmetric (mean of phi^T phi)")
        object.__setattr__(self, "estimate", _readonly(est))


def eta(phi: SensingMatrix, x) -> float:
    """Isometry defect eta(x) = (2/M) ||Phi x||^2 / ||x||^2 - 1.

    x may be a ModalSpectrum or any (possibly signed) vector of length N.
    """
    v = x.weights if isinstance(x, ModalSpectrum) else np.asarray(x, dtype=float)
    norm2 = float(v @ v)
    if norm2 == 0.0:
        raise ValueError("eta is undefined for the zero vector")
    pv = phi.entries @ v
    return (2.0 / phi.shape[0]) * float(pv @ pv) / norm2 - 1.0


def eta_ensemble(m: int, n_modes: int, s: int, samples: int, seed: int,
                 redraw_phi: bool = False) -> EtaEnsembleReport:
    """Distribution of eta over `samples` random s-sparse signed vectors.

    Supports are uniform over size-s subsets of 1..N and the nonzero values
    standard Gaussian (eta is scale invariant, so the value distribution is
    immaterial).  One sensing matrix drawn from (seed, "eta-phi") is shared by
    all samples -- a typical realization -- unless redraw_phi, in which case
    each sample gets its own schedule.  Sample i is a pure function of
    (seed, i), independent of how the loop is chunked or parallelized.
    """
    if not 1 <= s <= n_modes:
        raise ValueError(f"sparsity {s} outside 1..{n_modes}")
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")

    entries = None
    if not redraw_phi:
        schedule = random_schedule(m, derive_seed(seed, "eta-phi"))
        entries = sensing_matrix(schedule, n_modes).entries

    scale = 2.0 / m
    etas = np.empty(samples)
    for i in range(samples):
        if redraw_phi:
            schedule = random_schedule(m, derive_seed(seed, "eta-phi", i))
            entries = sensing_matrix(schedule, n_modes).entries
        rng = stream(seed, "eta-sample", i)
        support = rng.choice(n_modes, size=s, replace=False)
        values = rng.standard_normal(s)
        pv = entries[:, support] @ values
        etas[i] = scale * (pv @ pv) / (values @ values) - 1.0

    counts, _ = np.histogram(np.clip(etas, -1.0, 1.0), bins=_HIST_EDGES)
    return EtaEnsembleReport(
        bin_edges=_HIST_EDGES,
        counts=counts,
        max_abs_eta=float(np.max(np.abs(etas))),
        mean_eta=float(np.mean(etas)),
        sample_count=samples,
        s=s,
        m=m,
        n_modes=n_modes,
        clamped_low=int(np.count_nonzero(etas < -1.0)),
        clamped_high=int(np.count_nonzero(etas > 1.0)),
    )


def incoherence(phi: SensingMatrix) -> float:
    """Largest squared entry of Phi; at most 1 for cosine rows."""
    return float(np.max(phi.entries ** 2))


def isotropy_from_rows(alphas: np.ndarray, n_modes: int) -> np.ndarray:
    """Average of phi^T phi over the rows phi = (cos a, cos 2a, ..., cos Na)."""
    alphas = np.asarray(alphas, dtype=float)
    harmonics = np.arange(1, n_modes + 1)
    total = np.zeros((n_modes, n_modes))
    for start in range(0, len(alphas), _ROW_CHUNK):
        rows = np.cos(np.outer(alphas[start:start + _ROW_CHUNK], harmonics))
        total += rows.T @ rows
    # Blocked matmul need not return a bitwise-symmetric product.
    total = 0.5 * (total + total.T)
    return total / len(alphas)


def isotropy_estimate(n_modes: int, rows: int, seed: int) -> IsotropyReport:
    """Monte-Carlo check of E[phi^T phi] = 0.5 I over i.i.d. uniform delays."""
    if rows < 1:
        raise ValueError(f"rows must be >= 1, got {rows}")
    if n_modes < 1:
        raise ValueError(f"n_modes must be >= 1, got {n_modes}")
    alphas = stream(seed, "isotropy-rows").uniform(0.0, _TWO_PI, rows)
    estimate = isotropy_from_rows(alphas, n_modes)
    off = estimate - np.diag(np.diag(estimate))
    return IsotropyReport(
        estimate=estimate,
        max_offdiag_abs=float(np.max(np.abs(off))),
        max_diag_dev=float(np.max(np.abs(np.diag(estimate) - 0.5))),
        rows_sampled=rows,
    )
