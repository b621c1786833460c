"""Small dense linear-algebra layer.

Exact solves and eigenvalue extraction sit on LAPACK (via numpy); this
module owns input validation and the conventions the rest of the
package relies on: least-squares solves return the minimum-norm
solution on rank-deficient input, and "smallest eigenvalue" always
means smallest *nonzero* eigenvalue under a relative threshold.
"""

from __future__ import annotations

import numpy as np

from .errors import DegenerateProblemError, DimensionError

# Relative cutoff below which an eigenvalue counts as zero.
EIG_ZERO_TAU = 1e-12


def as_matrix(a) -> np.ndarray:
    """Validate and return a C-contiguous float64 matrix (n x d, finite)."""
    m = np.ascontiguousarray(a, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise DimensionError(f"expected a nonempty 2-d matrix, got shape {np.shape(a)}")
    if not np.all(np.isfinite(m)):
        raise DimensionError("matrix entries must be finite")
    return m


def as_vector(v, length: int | None = None) -> np.ndarray:
    """Validate and return a contiguous float64 vector, optionally of fixed length."""
    u = np.ascontiguousarray(v, dtype=np.float64)
    if u.ndim != 1:
        raise DimensionError(f"expected a 1-d vector, got shape {np.shape(v)}")
    if length is not None and u.shape[0] != length:
        raise DimensionError(f"expected length {length}, got {u.shape[0]}")
    if not np.all(np.isfinite(u)):
        raise DimensionError("vector entries must be finite")
    return u


def dot(u, v) -> float:
    """Inner product of two equal-length vectors."""
    uu = as_vector(u)
    vv = as_vector(v)
    if uu.shape[0] != vv.shape[0]:
        raise DimensionError(f"length mismatch: {uu.shape[0]} vs {vv.shape[0]}")
    return float(np.dot(uu, vv))


def solve_least_squares(a, b) -> np.ndarray:
    """Minimizer of ||Ax - b||_2; minimum-norm solution when A is rank
    deficient (pseudoinverse behavior)."""
    m = as_matrix(a)
    rhs = as_vector(b, m.shape[0])
    x, _, _, _ = np.linalg.lstsq(m, rhs, rcond=None)
    return x


def extremal_eigs(m, tau: float = EIG_ZERO_TAU) -> tuple[float, float]:
    """(largest, smallest-nonzero) eigenvalues of a symmetric PSD matrix.

    Eigenvalues at or below tau * largest are treated as zero, so on a
    singular matrix the second value is the smallest eigenvalue of the
    restriction to the range (pseudoinverse convention).
    """
    mm = as_matrix(m)
    if mm.shape[0] != mm.shape[1]:
        raise DimensionError(f"expected a square matrix, got {mm.shape}")
    eigs = np.linalg.eigvalsh(mm)
    largest = float(eigs[-1])
    if largest <= 0.0:
        raise DegenerateProblemError("matrix has no positive eigenvalue")
    cutoff = tau * largest
    nonzero = eigs[eigs > cutoff]
    return largest, float(nonzero[0])
