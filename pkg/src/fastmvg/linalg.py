"""Dense SPD factorization and solve kernels used by every sampler.

Everything is float64 and dense: the precision matrices arising here
have no exploitable sparsity, so the kernels are thin wrappers over
LAPACK/BLAS with the package's error contract layered on top.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import DimensionMismatch, NotPositiveDefinite

# Pivots at or below PIVOT_RTOL * trace(A)/dim are treated as numerical
# singularity rather than roundoff.
PIVOT_RTOL = 1e-12


@dataclass(frozen=True)
class SpdFactor:
    """Lower-triangular Cholesky factor L with L @ L.T == A."""

    lower: np.ndarray

    @property
    def dim(self) -> int:
        return self.lower.shape[0]

    @property
    def log_det(self) -> float:
        """log |A| of the factored matrix."""
        return 2.0 * float(np.sum(np.log(np.diagonal(self.lower))))


def cholesky(a: np.ndarray, *, check_symmetric: bool = True,
             pivot_floor: bool = True) -> SpdFactor:
    """Factor a symmetric positive-definite matrix.

    Raises NotPositiveDefinite when LAPACK reports a non-positive pivot
    or when any pivot falls below PIVOT_RTOL * trace(a)/dim, which
    signals an input that is singular at working precision.

    pivot_floor=False skips the trace-relative check and accepts any
    factorization LAPACK completes.  That is the right mode for
    matrices that are SPD with a known spectral floor by construction
    (the samplers' Phi D Phi' + I systems have eigenvalues >= 1, yet a
    heavy-tailed D inflates the trace until healthy unit pivots would
    trip the relative floor).
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    if check_symmetric:
        scale = np.max(np.abs(a)) if a.size else 0.0
        if scale > 0.0 and np.max(np.abs(a - a.T)) > 1e-10 * scale:
            raise ValueError("matrix is not symmetric within tolerance")
    try:
        lower = sla.cholesky(a, lower=True, check_finite=False)
    except sla.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from exc
    if pivot_floor:
        n = a.shape[0]
        floor = PIVOT_RTOL * float(np.trace(a)) / n
        diag = np.diagonal(lower)
        if np.min(diag * diag) <= floor:
            raise NotPositiveDefinite(
                f"pivot {np.min(diag * diag):.3e} at or below floor {floor:.3e}"
            )
    return SpdFactor(lower)


def solve_spd(factor: SpdFactor, b: np.ndarray) -> np.ndarray:
    """Solve (L @ L.T) x = b given the Cholesky factor."""
    b = np.asarray(b, dtype=float)
    if b.shape[0] != factor.dim:
        raise DimensionMismatch(
            f"factor dim {factor.dim} does not match rhs length {b.shape[0]}"
        )
    return sla.cho_solve((factor.lower, True), b, check_finite=False)


def solve_lower(factor: SpdFactor, b: np.ndarray, *, transpose: bool = False) -> np.ndarray:
    """Solve L x = b (or L.T x = b when transpose) for the triangular factor."""
    b = np.asarray(b, dtype=float)
    if b.shape[0] != factor.dim:
        raise DimensionMismatch(
            f"factor dim {factor.dim} does not match rhs length {b.shape[0]}"
        )
    return sla.solve_triangular(
        factor.lower, b, lower=True, trans="T" if transpose else "N", check_finite=False
    )


def gemm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Dense matrix-matrix product with dimension checking."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 2 or b.ndim != 2:
        raise DimensionMismatch("gemm expects two matrices")
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"inner dimensions differ: {a.shape} x {b.shape}")
    return a @ b


def gemv(a: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Dense matrix-vector product with dimension checking."""
    a = np.asarray(a, dtype=float)
    x = np.asarray(x, dtype=float)
    if a.ndim != 2 or x.ndim != 1:
        raise DimensionMismatch("gemv expects a matrix and a vector")
    if a.shape[1] != x.shape[0]:
        raise DimensionMismatch(f"inner dimensions differ: {a.shape} x {x.shape}")
    return a @ x
