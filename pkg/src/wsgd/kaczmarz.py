"""Randomized Kaczmarz solvers for linear systems Ax = b.

Three row-selection rules, all special cases of weighted SGD on the
least-squares objective:

* weighted: rows drawn proportional to their squared norms, projection
  step scaled by a relaxation factor c.
* uniform: rows drawn uniformly; equivalent to the weighted rule on the
  row-normalized system, so on noisy systems it converges to the
  norm-weighted least-squares solution instead of the ordinary one.
* hybrid: rows drawn from the half-and-half mixture of the two laws,
  with a step damped by the mean squared row norm.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import problem as problem_mod
from ._backend import kernels
from .errors import BoundUndefinedError, ParameterError, ZeroRowError
from .linalg import as_matrix, as_vector, extremal_eigs, solve_least_squares
from .sampling import build_alias
from .sgd import ErrorBoundCurve, checkpoint_schedule

VARIANT_KINDS = ("weighted", "uniform", "hybrid")


@dataclass(frozen=True)
class Variant:
    """Row-selection rule plus relaxation factor c."""

    kind: str = "weighted"
    c: float = 0.5

    def __post_init__(self) -> None:
        if self.kind not in VARIANT_KINDS:
            raise ParameterError(
                f"kind must be one of {VARIANT_KINDS}, got {self.kind!r}"
            )
        if not (self.c > 0):
            raise ParameterError(f"relaxation factor must be positive, got {self.c}")


@dataclass(frozen=True)
class KaczmarzRecord:
    """Trace of one run; squared errors are logged against the reference
    solution at checkpoint iterations."""

    errors_sq: dict[int, float]
    iterations_run: int
    variant: Variant
    final_x: np.ndarray
    first_hit_iter: Optional[int] = None
    warnings: tuple[str, ...] = ()


def row_norms_sq(a: np.ndarray) -> np.ndarray:
    """Squared row norms; every row must be nonzero."""
    mat = as_matrix(a)
    norms = np.einsum("ij,ij->i", mat, mat)
    if np.any(norms == 0.0):
        bad = int(np.flatnonzero(norms == 0.0)[0])
        raise ZeroRowError(f"row {bad} is zero")
    return norms


def row_probs(a: np.ndarray, kind: str) -> np.ndarray:
    """Row-selection law for a variant kind."""
    norms = row_norms_sq(a)
    n = norms.shape[0]
    if kind == "uniform":
        return np.full(n, 1.0 / n)
    weighted = norms / norms.sum()
    if kind == "weighted":
        return weighted
    if kind == "hybrid":
        return 0.5 * weighted + 0.5 / n
    raise ParameterError(f"kind must be one of {VARIANT_KINDS}, got {kind!r}")


def kaczmarz_step(a_i: np.ndarray, b_i: float, x: np.ndarray,
                  c: float = 1.0) -> np.ndarray:
    """Relaxed projection onto the hyperplane <a_i, x> = b_i."""
    row = np.asarray(a_i, dtype=np.float64)
    norm_sq = float(row @ row)
    if norm_sq == 0.0:
        raise ZeroRowError("cannot project onto a zero row")
    xx = as_vector(x, row.shape[0])
    return xx + c * (b_i - float(row @ xx)) / norm_sq * row


def hybrid_step(a_i: np.ndarray, b_i: float, x: np.ndarray, c: float,
                mean_row_norm_sq: float) -> np.ndarray:
    """Projection damped by the mean squared row norm, matching the
    mixture row law."""
    if mean_row_norm_sq <= 0:
        raise ParameterError("mean_row_norm_sq must be positive")
    row = np.asarray(a_i, dtype=np.float64)
    norm_sq = float(row @ row)
    xx = as_vector(x, row.shape[0])
    denom = mean_row_norm_sq + norm_sq
    return xx + 2.0 * c * (b_i - float(row @ xx)) / denom * row


def equivalence_gamma(c: float, frob_sq: float) -> float:
    """SGD step size reproducing relaxation c on the matching
    least-squares objective."""
    if frob_sq <= 0:
        raise ParameterError(f"frob_sq must be positive, got {frob_sq}")
    return c / frob_sq


def _variant_warnings(variant: Variant) -> tuple[str, ...]:
    if variant.kind == "hybrid":
        if variant.c >= 0.5:
            return (
                f"relaxation {variant.c} is at or above 1/2; the hybrid "
                "contraction guarantee does not apply",
            )
    elif variant.c >= 1.0:
        return (
            f"relaxation {variant.c} is at or above 1; the contraction "
            "guarantee does not apply",
        )
    return ()


def run_kaczmarz(a, b, variant: Variant, max_iters: int, *, seed: int = 0,
                 x0=None, reference=None, checkpoints=None,
                 target_err_sq: float | None = None) -> KaczmarzRecord:
    """Run a Kaczmarz variant from x0 (default: zero).

    The default reference is the ordinary least-squares solution, except
    for the uniform variant whose iterates settle at the norm-weighted
    one.
    """
    mat = as_matrix(a)
    rhs = as_vector(b, mat.shape[0])
    n = mat.shape[0]
    if max_iters < 0:
        raise ParameterError(f"max_iters must be nonnegative, got {max_iters}")
    norms = row_norms_sq(mat)
    probs = row_probs(mat, variant.kind)

    if variant.kind == "hybrid":
        inv_w = 2.0 / (norms.mean() + norms)
    else:
        inv_w = 1.0 / norms

    if reference is None:
        if variant.kind == "uniform":
            ref = problem_mod.weighted_solution(mat, rhs)
        else:
            ref = solve_least_squares(mat, rhs)
    else:
        ref = as_vector(reference, mat.shape[1])

    x_init = np.zeros(mat.shape[1]) if x0 is None else as_vector(x0, mat.shape[1])
    ckpts = (checkpoint_schedule(max_iters) if checkpoints is None
             else np.asarray(checkpoints, dtype=np.int64))
    alias = build_alias(probs)
    ones = np.ones(n)

    x, it_arr, err_arr, iters_run, _, first_hit, _ = kernels.run_weighted_quadratic(
        mat, rhs, ones, inv_w, alias.prob, alias.alias, probs,
        x_init, ref, variant.c, int(max_iters), ckpts,
        -1.0 if target_err_sq is None else float(target_err_sq),
        -1.0, n, seed & 0xFFFFFFFFFFFFFFFF,
    )
    return KaczmarzRecord(
        errors_sq={int(i): float(e) for i, e in zip(it_arr, err_arr)},
        iterations_run=int(iters_run),
        variant=variant,
        final_x=x,
        first_hit_iter=None if first_hit < 0 else int(first_hit),
        warnings=_variant_warnings(variant),
    )


def _least_squares_stats(mat: np.ndarray, rhs: np.ndarray) -> problem_mod.ProblemStats:
    return problem_mod.stats(problem_mod.from_least_squares(mat, rhs))


def row_normalized_cond(a) -> float:
    """Condition number of the row-normalized system, the contraction
    constant governing the uniform variant."""
    mat = as_matrix(a)
    norms = row_norms_sq(mat)
    scaled = mat / np.sqrt(norms)[:, None]
    _, mu = extremal_eigs(scaled.T @ scaled)
    return mat.shape[0] / mu


def kaczmarz_bound(a, b, variant: Variant, eps0: float) -> ErrorBoundCurve:
    """Expected squared-error envelope for a variant started eps0 away.

    Requires c < 1 (weighted, uniform) or c < 1/2 (hybrid); outside
    those ranges no contraction holds and the bound is undefined.
    """
    mat = as_matrix(a)
    rhs = as_vector(b, mat.shape[0])
    if eps0 < 0:
        raise ParameterError(f"eps0 must be nonnegative, got {eps0}")
    n = mat.shape[0]
    norms = row_norms_sq(mat)
    c = variant.c

    if variant.kind == "hybrid":
        if c >= 0.5:
            raise BoundUndefinedError(
                f"hybrid bound needs relaxation below 1/2, got {c}"
            )
        st = _least_squares_stats(mat, rhs)
        cond = st.cond
        rate = 1.0 - 2.0 * c * (1.0 - 2.0 * c) / cond
        horizon = (c * cond / (1.0 - 2.0 * c)) * 2.0 * st.sigma_sq / (n * st.l_bar)
        return ErrorBoundCurve(rate=rate, horizon=horizon, eps0=eps0)

    if c >= 1.0:
        raise BoundUndefinedError(
            f"{variant.kind} bound needs relaxation below 1, got {c}"
        )
    if variant.kind == "weighted":
        st = _least_squares_stats(mat, rhs)
        cond = st.cond
        residual_term = st.sigma_sq / (n * st.l_bar * norms.min())
        rate = 1.0 - 2.0 * c * (1.0 - c) / cond
        horizon = (c / (1.0 - c)) * cond * residual_term
        return ErrorBoundCurve(rate=rate, horizon=horizon, eps0=eps0)

    # uniform: the run behaves like the weighted rule on the
    # row-normalized system, targeting the norm-weighted solution
    cond = row_normalized_cond(mat)
    x_w = problem_mod.weighted_solution(mat, rhs)
    root_norms = np.sqrt(norms)
    e_w = (rhs - mat @ x_w) / root_norms
    res_sq = float(e_w @ e_w)
    # solver roundoff leaves a nonzero residual on solvable systems;
    # below the representable floor it counts as zero
    floor = problem_mod.RESIDUAL_REL_TOL * (
        np.abs(rhs) + root_norms * np.linalg.norm(x_w)) / root_norms
    if res_sq <= float(floor @ floor):
        res_sq = 0.0
    rate = 1.0 - 2.0 * c * (1.0 - c) / cond
    horizon = (c / (1.0 - c)) * cond * res_sq / n
    return ErrorBoundCurve(rate=rate, horizon=horizon, eps0=eps0)
