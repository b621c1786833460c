"""Seeded experiment harness.

Five synthetic least-squares families probe how the mixture parameter
lambda trades conditioning against gradient noise: equal rows with one
heavy outlier row, plain Gaussian rows, and graded row norms under
three noise levels.  A sweep runs many independent trials per lambda,
averages error curves at shared checkpoints, and records the mean
iteration count to a target error with censoring at the iteration cap.

The two-point demo measures how long uniform sampling takes to first
draw the single informative component among many flat ones, against
smoothness-proportional sampling which finds it in two draws on
average.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import io as io_mod
from . import problem as problem_mod
from . import weights as weights_mod
from ._backend import kernels
from .errors import DegenerateProblemError, ParameterError
from .rng import derive_seed
from .sampling import build_alias
from .sgd import SgdConfig, checkpoint_schedule, optimal_step_size, run

CASE_IDS = (1, 2, 3, 4, 5)
NOISE_SD = {1: 0.1, 2: 0.1, 3: 20.0, 4: 10.0, 5: 0.1}
HEAVY_ROW_SD = 10.0
DEFAULT_LAMBDA_GRID = tuple(i / 10.0 for i in range(11))
DEFAULT_SEED_BASE = 0


@dataclass(frozen=True)
class CaseSpec:
    """Parameters of one experiment family."""

    case_id: int
    n: int = 1000
    d: int = 10
    trials: int = 100
    lambda_grid: tuple[float, ...] = DEFAULT_LAMBDA_GRID
    eps_target: float = 0.1
    max_iters: int = 50000
    seed_base: int = DEFAULT_SEED_BASE

    def __post_init__(self) -> None:
        if self.case_id not in CASE_IDS:
            raise ParameterError(f"case_id must be in {CASE_IDS}, got {self.case_id}")
        if self.n < 1 or self.d < 1 or self.trials < 1:
            raise ParameterError("n, d and trials must be positive")
        if self.max_iters < 0:
            raise ParameterError(f"max_iters must be nonnegative, got {self.max_iters}")
        if self.eps_target <= 0:
            raise ParameterError(f"eps_target must be positive, got {self.eps_target}")
        if len(self.lambda_grid) == 0:
            raise ParameterError("lambda_grid must be nonempty")
        for lam in self.lambda_grid:
            if not (0.0 <= lam <= 1.0):
                raise ParameterError(f"lambda_grid entries must be in [0, 1], got {lam}")


@dataclass(frozen=True)
class SweepResult:
    """Aggregates of one case sweep: mean squared-error curves per lambda
    at shared checkpoints, and mean iterations to the target error with a
    per-lambda censoring flag (a censored mean counts capped trials at
    max_iters, so it reads as a lower bound)."""

    case_id: int
    lambda_grid: tuple[float, ...]
    checkpoints: np.ndarray
    mean_errors_sq: np.ndarray
    mean_iters_to_eps: np.ndarray
    censored: np.ndarray


@dataclass(frozen=True)
class TightnessResult:
    n_flat: int
    trials: int
    uniform_mean: float
    biased_mean: float


def row_stds(case_id: int, n: int) -> np.ndarray:
    """Per-row standard deviations of the matrix entries."""
    if case_id == 1:
        stds = np.ones(n)
        stds[-1] = HEAVY_ROW_SD
        return stds
    if case_id == 2:
        return np.ones(n)
    if case_id in (3, 4, 5):
        return np.sqrt(np.arange(1, n + 1, dtype=np.float64))
    raise ParameterError(f"case_id must be in {CASE_IDS}, got {case_id}")


def generate_case(spec: CaseSpec, trial: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Instance (A, b, x_true) for one trial; b = A x_true + e.

    One stream per (seed_base, case, trial), consumed in a fixed order:
    x_true, then the matrix row-major, then the residual.  The same
    trial index yields the same instance for every lambda.
    """
    if trial < 0:
        raise ParameterError(f"trial must be nonnegative, got {trial}")
    state = derive_seed(spec.seed_base, spec.case_id, trial)
    x_true = np.empty(spec.d)
    state = kernels.gaussian_fill(state, x_true, 0.0, 1.0)
    a = np.empty(spec.n * spec.d)
    state = kernels.gaussian_fill(state, a, 0.0, 1.0)
    a = a.reshape(spec.n, spec.d)
    a *= row_stds(spec.case_id, spec.n)[:, None]
    e = np.empty(spec.n)
    state = kernels.gaussian_fill(state, e, 0.0, NOISE_SD[spec.case_id])
    b = a @ x_true + e
    return a, b, x_true


def run_sweep(spec: CaseSpec) -> SweepResult:
    """Average trials x lambda-grid runs of mixture-weighted SGD.

    Each run uses the step size minimizing the iteration bound for the
    target error, evaluated with the exact reweighted constants of its
    lambda.  Runs always continue to max_iters so every checkpoint
    averages the full trial count; iterations-to-target is tracked per
    iteration inside the run.
    """
    grid = spec.lambda_grid
    ckpts = checkpoint_schedule(spec.max_iters)
    err_sums = np.zeros((len(grid), len(ckpts)))
    iter_sums = np.zeros(len(grid))
    censored = np.zeros(len(grid), dtype=bool)

    for trial in range(spec.trials):
        a, b, _ = generate_case(spec, trial)
        prob = problem_mod.from_least_squares(a, b)
        try:
            st = problem_mod.stats(prob)
        except DegenerateProblemError as exc:
            raise DegenerateProblemError(
                f"case {spec.case_id} trial {trial}: {exc}"
            ) from exc
        g2 = prob.grad_norms_sq_at(st.x_star)
        for li, lam in enumerate(grid):
            scheme = weights_mod.PartialBias(lam)
            table = weights_mod.build_weights(scheme, st.lipschitz, prob.source_probs)
            eff = weights_mod.effective_constants(table, st.lipschitz, g2,
                                                  prob.source_probs)
            gamma = optimal_step_size(st.mu, spec.eps_target,
                                      eff.sup_l_w, eff.sigma_sq_w)
            cfg = SgdConfig(scheme=scheme, step_size=gamma,
                            max_iters=spec.max_iters,
                            seed=derive_seed(spec.seed_base, spec.case_id,
                                             trial, li))
            rec = run(prob, cfg, stats=st, checkpoints=ckpts,
                      target_err_sq=spec.eps_target)
            err_sums[li] += np.array([rec.errors_sq[int(k)] for k in ckpts])
            if rec.first_hit_iter is None:
                censored[li] = True
                iter_sums[li] += spec.max_iters
            else:
                iter_sums[li] += rec.first_hit_iter

    return SweepResult(
        case_id=spec.case_id,
        lambda_grid=grid,
        checkpoints=ckpts,
        mean_errors_sq=err_sums / spec.trials,
        mean_iters_to_eps=iter_sums / spec.trials,
        censored=censored,
    )


def tightness_demo(n_flat: int, trials: int, seed: int = 0) -> TightnessResult:
    """Mean number of draws until the steep component first appears,
    under the source (uniform) law and under smoothness-proportional
    weighting.  Uniform needs n_flat + 1 draws in expectation; the
    weighted law gives the steep component probability 1/2, so two."""
    if trials < 1:
        raise ParameterError(f"trials must be positive, got {trials}")
    prob = problem_mod.tightness_instance(n_flat)
    st = problem_mod.stats(prob)
    table = weights_mod.build_weights(weights_mod.FullBias(), st.lipschitz,
                                      prob.source_probs)
    laws = (prob.source_probs, table.sampling_probs)
    cap = max(1000, 200 * (n_flat + 1))
    means = []
    for which, law in enumerate(laws):
        alias = build_alias(law)
        state = derive_seed(seed, which)
        total = 0
        for _ in range(trials):
            count, state = kernels.first_hit(alias.prob, alias.alias, 0, cap, state)
            total += count if count > 0 else cap
        means.append(total / trials)
    return TightnessResult(n_flat=n_flat, trials=trials,
                           uniform_mean=means[0], biased_mean=means[1])


def emit_results(results, out_dir, write_plot: bool = True) -> list[Path]:
    """Write curves.csv and iters.csv (plus a gnuplot script) for one or
    more sweep results."""
    if isinstance(results, SweepResult):
        results = [results]
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    curves = out / "curves.csv"
    iters = out / "iters.csv"
    io_mod.write_curves(results, curves)
    io_mod.write_iters(results, iters)
    paths = [curves, iters]
    if write_plot:
        script = out / "plot.gp"
        io_mod.write_plot_script(script)
        paths.append(script)
    return paths
