"""Weighted stochastic gradient descent and randomized Kaczmarz methods
for finite sums of strongly convex quadratics, with closed-form step
sizes, convergence bounds, constant-time samplers, and a seeded
experiment harness."""

from ._backend import BACKEND, backend_name
from .errors import (
    BoundUndefinedError,
    DegenerateProblemError,
    DimensionError,
    DistributionError,
    ParameterError,
    UnreachableComponentError,
    ZeroRowError,
)
from .experiments import (
    CaseSpec,
    SweepResult,
    TightnessResult,
    emit_results,
    generate_case,
    run_sweep,
    tightness_demo,
)
from .kaczmarz import (
    KaczmarzRecord,
    Variant,
    equivalence_gamma,
    hybrid_step,
    kaczmarz_bound,
    kaczmarz_step,
    row_normalized_cond,
    row_probs,
    run_kaczmarz,
)
from .problem import (
    Problem,
    ProblemStats,
    QuadraticComponent,
    cocoercivity_gap,
    from_least_squares,
    stats,
    tightness_instance,
    weighted_solution,
)
from .rng import RngStream, derive_seed
from .sampling import (
    AliasTable,
    MixtureSampler,
    RejectionSampler,
    build_alias,
    draw,
    draw_many,
    draw_mixture_many,
    draw_rejection,
    draw_rejection_many,
    induced_probs,
    mixture_sampler,
    rejection_sampler,
)
from .sgd import (
    ErrorBoundCurve,
    RunRecord,
    SgdConfig,
    checkpoint_schedule,
    error_bound_curve,
    half_bias_step_size,
    iteration_bound,
    optimal_step_size,
    partial_bias_envelope,
    partial_bias_step_size,
    run,
    sgd_step,
)
from .weights import (
    EffectiveConstants,
    FullBias,
    GradBias,
    MixedBias,
    PartialBias,
    Uniform,
    WeightTable,
    build_weights,
    effective_constants,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "backend_name",
    "BoundUndefinedError",
    "DegenerateProblemError",
    "DimensionError",
    "DistributionError",
    "ParameterError",
    "UnreachableComponentError",
    "ZeroRowError",
    "CaseSpec",
    "SweepResult",
    "TightnessResult",
    "emit_results",
    "generate_case",
    "run_sweep",
    "tightness_demo",
    "KaczmarzRecord",
    "Variant",
    "equivalence_gamma",
    "hybrid_step",
    "kaczmarz_bound",
    "kaczmarz_step",
    "row_normalized_cond",
    "row_probs",
    "run_kaczmarz",
    "Problem",
    "ProblemStats",
    "QuadraticComponent",
    "cocoercivity_gap",
    "from_least_squares",
    "stats",
    "tightness_instance",
    "weighted_solution",
    "RngStream",
    "derive_seed",
    "AliasTable",
    "MixtureSampler",
    "RejectionSampler",
    "build_alias",
    "draw",
    "draw_many",
    "draw_mixture_many",
    "draw_rejection",
    "draw_rejection_many",
    "induced_probs",
    "mixture_sampler",
    "rejection_sampler",
    "ErrorBoundCurve",
    "RunRecord",
    "SgdConfig",
    "checkpoint_schedule",
    "error_bound_curve",
    "half_bias_step_size",
    "iteration_bound",
    "optimal_step_size",
    "partial_bias_envelope",
    "partial_bias_step_size",
    "run",
    "sgd_step",
    "EffectiveConstants",
    "FullBias",
    "GradBias",
    "MixedBias",
    "PartialBias",
    "Uniform",
    "WeightTable",
    "build_weights",
    "effective_constants",
    "__version__",
]
