"""Weighted stochastic gradient descent for quadratic finite sums.

The iteration is x <- x - gamma / w(i) * grad f_i(x) with i drawn from
the w-tilted distribution.  For a step gamma < 1 / sup_i(L_i / w(i))
the expected squared distance to the minimizer contracts linearly down
to a noise horizon proportional to gamma; the closed forms here pick
gamma so the horizon sits at half of a requested error target and
bound how many iterations reach that target.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import problem as problem_mod
from . import weights as weights_mod
from ._backend import kernels
from .errors import BoundUndefinedError, ParameterError
from .linalg import as_vector
from .sampling import build_alias

BOUND_KINDS = ("uniform", "half_bias", "partial_bias", "mean_square")


@dataclass(frozen=True)
class SgdConfig:
    """Run parameters.  Exactly one of step_size / epsilon must be set:
    epsilon derives the step from the closed form matching the scheme."""

    scheme: weights_mod.WeightScheme = field(default_factory=weights_mod.Uniform)
    step_size: Optional[float] = None
    epsilon: Optional[float] = None
    max_iters: int = 1000
    grad_tol: Optional[float] = None          # None: no gradient-norm stopping
    grad_check_interval: Optional[int] = None  # default: one full pass (n)
    seed: int = 0


@dataclass(frozen=True)
class RunRecord:
    """Trace of one run: squared error to the reference point, logged at
    checkpoint iterations (powers of two plus the final iterate)."""

    errors_sq: dict[int, float]
    iterations_run: int
    hit_tolerance_at: Optional[int]
    config: SgdConfig
    final_x: np.ndarray
    gamma: float
    first_hit_iter: Optional[int] = None
    warnings: tuple[str, ...] = ()


def sgd_step(prob: problem_mod.Problem, x, i: int, gamma: float,
             weight: float = 1.0) -> np.ndarray:
    """One update x - gamma / weight * grad f_i(x)."""
    if gamma <= 0:
        raise ParameterError(f"step size must be positive, got {gamma}")
    if weight <= 0:
        raise ParameterError(f"weight must be positive, got {weight}")
    xx = as_vector(x, prob.d)
    return xx - (gamma / weight) * prob.component_gradient(i, xx)


def _check_positive(**kwargs) -> None:
    for name, val in kwargs.items():
        if val <= 0:
            raise ParameterError(f"{name} must be positive, got {val}")


def optimal_step_size(mu: float, epsilon: float, sup_l: float,
                      sigma_sq: float) -> float:
    """Step size minimizing the iteration bound for target E||x_k - x*||^2
    <= epsilon, given effective constants sup_l and sigma_sq."""
    _check_positive(mu=mu, epsilon=epsilon, sup_l=sup_l)
    if sigma_sq < 0:
        raise ParameterError(f"sigma_sq must be nonnegative, got {sigma_sq}")
    return mu * epsilon / (2.0 * epsilon * mu * sup_l + 2.0 * sigma_sq)


def half_bias_step_size(mu: float, epsilon: float, l_bar: float,
                        sigma_sq: float) -> float:
    """Closed-form step for the half-and-half weighting w = 1/2 + L/(2 l_bar),
    whose effective constants are within a factor 2 of (l_bar, sigma_sq)."""
    _check_positive(mu=mu, epsilon=epsilon, l_bar=l_bar)
    if sigma_sq < 0:
        raise ParameterError(f"sigma_sq must be nonnegative, got {sigma_sq}")
    return mu * epsilon / (4.0 * (epsilon * mu * l_bar + sigma_sq))


def partial_bias_envelope(lam: float, l_bar: float, sup_l: float, inf_l: float,
                          sigma_sq: float) -> tuple[float, float]:
    """Envelope constants (A, B) for the lam-mixture weighting:
    sup L_w <= A and sigma_sq_w <= B * sigma_sq.

    Interior lam uses A = min(l_bar/(1-lam), sup_l/lam) and
    B = max(1/lam, l_bar/((1-lam) inf_l)); at the endpoints only the
    finite branch survives.  inf_l = 0 makes the second B branch
    vacuous: for lam > 0 the 1/lam branch still bounds, while lam = 0
    with noise has no finite envelope at all.
    """
    if not (0.0 <= lam <= 1.0):
        raise ParameterError(f"lam must be in [0, 1], got {lam}")
    if lam == 1.0:
        return sup_l, 1.0
    if lam == 0.0:
        if inf_l <= 0.0:
            if sigma_sq > 0.0:
                raise BoundUndefinedError(
                    "no noise envelope for fully biased weights when some "
                    "component has zero curvature"
                )
            return l_bar, 0.0
        return l_bar, l_bar / inf_l
    a = min(l_bar / (1.0 - lam), sup_l / lam)
    if inf_l > 0.0:
        b = max(1.0 / lam, l_bar / ((1.0 - lam) * inf_l))
    else:
        b = 1.0 / lam
    return a, b


def partial_bias_step_size(mu: float, epsilon: float, lam: float, l_bar: float,
                           sup_l: float, inf_l: float, sigma_sq: float) -> float:
    """Closed-form step for the lam-mixture weighting, from the envelope
    constants (no access to the exact reweighted constants needed)."""
    _check_positive(mu=mu, epsilon=epsilon, l_bar=l_bar, sup_l=sup_l)
    if sigma_sq < 0:
        raise ParameterError(f"sigma_sq must be nonnegative, got {sigma_sq}")
    a, b = partial_bias_envelope(lam, l_bar, sup_l, inf_l, sigma_sq)
    return mu * epsilon / (2.0 * epsilon * mu * a + 2.0 * b * sigma_sq)


def iteration_bound(kind: str, *, mu: float, epsilon: float, eps0: float,
                    sup_l: float | None = None, l_bar: float | None = None,
                    inf_l: float | None = None, sigma_sq: float = 0.0,
                    lam: float | None = None,
                    mean_sq_l: float | None = None) -> int:
    """Iterations guaranteeing E||x_k - x*||^2 <= epsilon from eps0.

    Kinds: 'uniform' needs sup_l; 'half_bias' needs l_bar;
    'partial_bias' needs lam, l_bar, sup_l, inf_l; 'mean_square' needs
    mean_sq_l = E[L^2] (second-moment baseline for comparison).
    Returns 0 when epsilon >= 2 * eps0 (the bound is vacuous there).
    """
    _check_positive(mu=mu, epsilon=epsilon, eps0=eps0)
    if sigma_sq < 0:
        raise ParameterError(f"sigma_sq must be nonnegative, got {sigma_sq}")
    if kind not in BOUND_KINDS:
        raise ParameterError(f"kind must be one of {BOUND_KINDS}, got {kind!r}")
    if epsilon >= 2.0 * eps0:
        return 0
    log_term = math.log(2.0 * eps0 / epsilon)
    noise = sigma_sq / (mu * mu * epsilon)
    if kind == "uniform":
        if sup_l is None:
            raise ParameterError("'uniform' needs sup_l")
        k = 2.0 * log_term * (sup_l / mu + noise)
    elif kind == "half_bias":
        if l_bar is None:
            raise ParameterError("'half_bias' needs l_bar")
        k = 4.0 * log_term * (l_bar / mu + noise)
    elif kind == "partial_bias":
        if lam is None or l_bar is None or sup_l is None or inf_l is None:
            raise ParameterError("'partial_bias' needs lam, l_bar, sup_l, inf_l")
        a, b = partial_bias_envelope(lam, l_bar, sup_l, inf_l, sigma_sq)
        k = 2.0 * log_term * (a / mu + b * noise)
    else:  # mean_square
        if mean_sq_l is None:
            raise ParameterError("'mean_square' needs mean_sq_l")
        k = 2.0 * log_term * (mean_sq_l / (mu * mu) + noise)
    return int(math.ceil(k))


@dataclass(frozen=True)
class ErrorBoundCurve:
    """Geometric upper bound rate^k * eps0 + horizon on E||x_k - x*||^2."""

    rate: float
    horizon: float
    eps0: float

    def value(self, k):
        k_arr = np.asarray(k, dtype=np.float64)
        out = self.rate ** k_arr * self.eps0 + self.horizon
        return float(out) if out.ndim == 0 else out


def error_bound_curve(gamma: float, mu: float, sup_l_w: float,
                      sigma_sq_w: float, eps0: float) -> ErrorBoundCurve:
    """Expected-error envelope of the weighted iteration at step gamma.

    Valid only for gamma < 1 / sup_l_w; the contraction factor is
    1 - 2 gamma mu (1 - gamma sup_l_w) and the noise horizon is
    gamma sigma_sq_w / (mu (1 - gamma sup_l_w)).
    """
    _check_positive(gamma=gamma, mu=mu, sup_l_w=sup_l_w)
    if sigma_sq_w < 0 or eps0 < 0:
        raise ParameterError("sigma_sq_w and eps0 must be nonnegative")
    if gamma >= 1.0 / sup_l_w:
        raise ParameterError(
            f"step size {gamma} must be below 1/sup_l_w = {1.0 / sup_l_w}"
        )
    slack = 1.0 - gamma * sup_l_w
    return ErrorBoundCurve(
        rate=1.0 - 2.0 * gamma * mu * slack,
        horizon=gamma * sigma_sq_w / (mu * slack),
        eps0=eps0,
    )


def checkpoint_schedule(max_iters: int, extra=()) -> np.ndarray:
    """0, powers of two up to max_iters, max_iters itself, plus extras."""
    if max_iters < 0:
        raise ParameterError(f"max_iters must be nonnegative, got {max_iters}")
    points = {0, max_iters}
    p = 1
    while p <= max_iters:
        points.add(p)
        p *= 2
    for e in extra:
        if 0 <= int(e) <= max_iters:
            points.add(int(e))
    return np.array(sorted(points), dtype=np.int64)


def derive_step_size(scheme: weights_mod.WeightScheme, epsilon: float,
                     st: problem_mod.ProblemStats,
                     eff: weights_mod.EffectiveConstants) -> float:
    """Scheme-matched step size for a target epsilon.

    Lipschitz-based schemes use their closed-form envelopes; the
    gradient-bound schemes have no envelope, so they use the optimal
    form with their exact reweighted constants.
    """
    if isinstance(scheme, weights_mod.Uniform):
        return optimal_step_size(st.mu, epsilon, st.sup_l, st.sigma_sq)
    if isinstance(scheme, weights_mod.PartialBias):
        return partial_bias_step_size(st.mu, epsilon, scheme.lam, st.l_bar,
                                      st.sup_l, st.inf_l, st.sigma_sq)
    if isinstance(scheme, weights_mod.FullBias):
        return partial_bias_step_size(st.mu, epsilon, 0.0, st.l_bar,
                                      st.sup_l, st.inf_l, st.sigma_sq)
    return optimal_step_size(st.mu, epsilon, eff.sup_l_w, eff.sigma_sq_w)


def run(prob: problem_mod.Problem, config: SgdConfig, *,
        stats: problem_mod.ProblemStats | None = None,
        x0=None, reference=None, checkpoints=None,
        target_err_sq: float | None = None,
        grad_bounds=None) -> RunRecord:
    """Run weighted SGD and log squared errors at checkpoint iterations.

    Errors are measured against ``reference`` (default: the minimizer).
    ``target_err_sq`` additionally tracks the first iteration whose
    error falls to or below the target, checked at every iteration.
    A step at or above 1/sup_l_w records a warning but still runs.
    """
    st = stats if stats is not None else problem_mod.stats(prob)
    table = weights_mod.build_weights(config.scheme, st.lipschitz,
                                      prob.source_probs, grad_bounds)
    eff = weights_mod.effective_constants(
        table, st.lipschitz, prob.grad_norms_sq_at(st.x_star), prob.source_probs
    )

    if (config.step_size is None) == (config.epsilon is None):
        raise ParameterError("set exactly one of step_size and epsilon")
    if config.step_size is not None:
        gamma = float(config.step_size)
        if gamma <= 0:
            raise ParameterError(f"step size must be positive, got {gamma}")
    else:
        if config.epsilon <= 0:
            raise ParameterError(f"epsilon must be positive, got {config.epsilon}")
        gamma = derive_step_size(config.scheme, float(config.epsilon), st, eff)

    warnings = ()
    if eff.sup_l_w > 0 and gamma >= 1.0 / eff.sup_l_w:
        warnings = (
            f"step size {gamma:.6g} is at or above 1/sup_l_w = "
            f"{1.0 / eff.sup_l_w:.6g}; the error bound does not apply",
        )

    if config.max_iters < 0:
        raise ParameterError(f"max_iters must be nonnegative, got {config.max_iters}")
    x_init = np.zeros(prob.d) if x0 is None else as_vector(x0, prob.d)
    ref = st.x_star if reference is None else as_vector(reference, prob.d)
    ckpts = (checkpoint_schedule(config.max_iters) if checkpoints is None
             else np.asarray(checkpoints, dtype=np.int64))
    alias = build_alias(table.sampling_probs)
    inv_w = np.zeros(prob.n)
    np.divide(1.0, table.weights, out=inv_w, where=table.weights > 0)
    interval = config.grad_check_interval if config.grad_check_interval else prob.n
    if interval <= 0:
        raise ParameterError(f"grad_check_interval must be positive, got {interval}")

    x, it_arr, err_arr, iters_run, hit_tol, first_hit, _ = kernels.run_weighted_quadratic(
        prob.z, prob.offsets, prob.scales, inv_w,
        alias.prob, alias.alias, prob.source_probs,
        x_init, ref, gamma, int(config.max_iters), ckpts,
        -1.0 if target_err_sq is None else float(target_err_sq),
        -1.0 if config.grad_tol is None else float(config.grad_tol),
        int(interval), config.seed & 0xFFFFFFFFFFFFFFFF,
    )
    return RunRecord(
        errors_sq={int(i): float(e) for i, e in zip(it_arr, err_arr)},
        iterations_run=int(iters_run),
        hit_tolerance_at=None if hit_tol < 0 else int(hit_tol),
        config=config,
        final_x=x,
        gamma=gamma,
        first_hit_iter=None if first_hit < 0 else int(first_hit),
        warnings=warnings,
    )
