"""Greedy sparse recovery (orthogonal matching pursuit) with MAC accounting.

Multiply-accumulate counts follow fixed formulas so that identical inputs
always report identical costs:

* column norms        m*n (once)
* correlation pass    m*n per iteration
* least squares       m*k^2 + k^3/3 at support size k
* residual update     m*(k + 1) per iteration
* wavelet synthesis   n*k (in the recover_* wrappers)
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .qrsfilter import FilterMatrix
from .sensing import MeasurementVector, SensingMatrix
from .signal import SampledSignal, _frozen_array
from .wavelet import WaveletBasis, dwt_matrix

DEFAULT_TOL = 0.01


@dataclass(frozen=True, eq=False)
class SparseSolution:
    """Result of one greedy pursuit."""

    coefficients: np.ndarray
    support: tuple[int, ...]
    residual_norm: float
    iterations: int
    mac_count: int
    rank_deficient: bool = False

    def __post_init__(self):
        object.__setattr__(self, "coefficients", _frozen_array(self.coefficients))


def _as_vector(y) -> np.ndarray:
    if isinstance(y, MeasurementVector):
        return y.values
    return np.asarray(y, dtype=float)


def omp(A: np.ndarray, y, max_support: int, tol: float = DEFAULT_TOL) -> SparseSolution:
    """Orthogonal matching pursuit.

    Selects the column of maximal norm-weighted correlation with the residual,
    re-solves least squares on the accumulated support, and stops once the
    residual drops to ``tol * ||y||`` or the support reaches ``max_support``.
    Recovery in under-measured regimes may fail; the residual is reported
    honestly rather than raised.
    """
    A = np.asarray(A, dtype=float)
    yv = _as_vector(y)
    m, n = A.shape
    if yv.shape != (m,):
        raise ValidationError(f"measurement length {yv.shape} does not match rows {m}")
    if not 0 <= max_support <= m:
        raise ValidationError(f"max_support must lie in [0, m={m}], got {max_support}")
    if tol < 0:
        raise ValidationError(f"tol must be >= 0, got {tol}")

    macs = 0
    col_norms = np.sqrt(np.einsum("ij,ij->j", A, A))
    macs += m * n
    if np.any(col_norms == 0):
        raise ValidationError("sensing dictionary contains zero columns")

    y_norm = float(np.linalg.norm(yv))
    macs += m
    coefficients = np.zeros(n)
    if y_norm == 0.0 or max_support == 0:
        return SparseSolution(coefficients, (), float(y_norm), 0, macs)

    support: list[int] = []
    residual = yv.copy()
    residual_norm = y_norm
    coef = np.empty(0)
    rank_deficient = False
    while len(support) < max_support:
        corr = np.abs(A.T @ residual)
        macs += m * n
        corr[support] = -1.0
        j = int(np.argmax(corr))
        if corr[j] <= 0.0:
            break
        support.append(j)
        k = len(support)
        sub = A[:, support]
        coef, _, rank, _ = np.linalg.lstsq(sub, yv, rcond=None)
        macs += m * k * k + k**3 // 3
        if rank < k:
            rank_deficient = True
        residual = yv - sub @ coef
        macs += m * (k + 1)
        residual_norm = float(np.linalg.norm(residual))
        if residual_norm <= tol * y_norm:
            break

    coefficients[support] = coef
    return SparseSolution(
        coefficients,
        tuple(support),
        residual_norm,
        len(support),
        macs,
        rank_deficient,
    )


def _synthesize(W: np.ndarray, sol: SparseSolution) -> tuple[np.ndarray, SparseSolution]:
    """W @ s over the support only, charging n*k MACs."""
    n = W.shape[0]
    if sol.support:
        idx = list(sol.support)
        signal = W[:, idx] @ sol.coefficients[idx]
    else:
        signal = np.zeros(n)
    updated = SparseSolution(
        sol.coefficients,
        sol.support,
        sol.residual_norm,
        sol.iterations,
        sol.mac_count + n * len(sol.support),
        sol.rank_deficient,
    )
    return signal, updated


def gencs_dictionary(
    phi: SensingMatrix, filt: FilterMatrix, basis: WaveletBasis
) -> np.ndarray:
    """Recovery dictionary A = Phi @ F @ W for filter-folded sensing."""
    if not (phi.n == filt.n == basis.n):
        raise ValidationError(
            f"inconsistent dimensions: phi n={phi.n}, F n={filt.n}, W n={basis.n}"
        )
    return phi.entries @ filt.entries @ dwt_matrix(basis)


def recover_filtered(
    y,
    phi: SensingMatrix,
    filt: FilterMatrix,
    basis: WaveletBasis,
    max_support: int,
    tol: float = DEFAULT_TOL,
) -> tuple[SampledSignal, SparseSolution]:
    """Recover the morphology-suppressed signal from filter-folded measurements.

    Expects measurements y = (Phi @ F) @ x of the raw frame.  Solves OMP on
    A = Phi @ F @ W and returns z_hat = W @ s, a spike-train estimate aligned
    with the raw time axis, ready for detect_r_peaks.
    """
    A = gencs_dictionary(phi, filt, basis)
    sol = omp(A, y, max_support, tol)
    z_hat, sol = _synthesize(dwt_matrix(basis), sol)
    return SampledSignal(z_hat, 200.0), sol


def recover_plain_cs(
    y,
    phi: SensingMatrix,
    basis: WaveletBasis,
    max_support: int,
    tol: float = DEFAULT_TOL,
) -> tuple[SampledSignal, SparseSolution]:
    """Baseline CS recovery of the raw frame from y = Phi @ x via A = Phi @ W."""
    if phi.n != basis.n:
        raise ValidationError(
            f"inconsistent dimensions: phi n={phi.n}, W n={basis.n}"
        )
    A = phi.entries @ dwt_matrix(basis)
    sol = omp(A, y, max_support, tol)
    x_hat, sol = _synthesize(dwt_matrix(basis), sol)
    return SampledSignal(x_hat, 200.0), sol
