"""Importance-weighting schemes.

A weight function w (normalized so E_p[w] = 1) tilts the sampling
distribution to p_w(i) proportional to w(i) p(i) while the update is
divided by w(i), leaving every reweighted expectation unchanged.  The
schemes here trade the effective smoothness sup_i L_i / w(i) against
the effective gradient noise E_p[||grad f_i(x*)||^2 / w(i)].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from . import linalg
from .errors import (
    DegenerateProblemError,
    ParameterError,
    UnreachableComponentError,
)


@dataclass(frozen=True)
class Uniform:
    """No reweighting: w = 1."""


@dataclass(frozen=True)
class FullBias:
    """Sample proportionally to the Lipschitz constants: w_i = L_i / E_p[L]."""


@dataclass(frozen=True)
class PartialBias:
    """Mixture w_i = lam + (1 - lam) L_i / E_p[L]; lam=1 is Uniform,
    lam=0 is FullBias."""

    lam: float

    def __post_init__(self):
        if not (0.0 <= self.lam <= 1.0):
            raise ParameterError(f"lam must be in [0, 1], got {self.lam}")


@dataclass(frozen=True)
class GradBias:
    """Sample proportionally to supplied per-component gradient-norm
    bounds: w_i = g_i / E_p[g]."""


@dataclass(frozen=True)
class MixedBias:
    """Half gradient-bound, half Lipschitz: w_i = g_i/(2 E_p[g]) + L_i/(2 E_p[L]).

    Keeps both effective constants within a factor 2 of their separately
    optimized values."""


WeightScheme = Union[Uniform, FullBias, PartialBias, GradBias, MixedBias]


@dataclass(frozen=True)
class WeightTable:
    """Normalized weights and the sampling distribution they induce."""

    weights: np.ndarray         # E_p[w] = 1
    sampling_probs: np.ndarray  # p_w(i) = w(i) p(i)
    scheme: WeightScheme


@dataclass(frozen=True)
class EffectiveConstants:
    """Convergence constants of the reweighted process."""

    sup_l_w: float       # a.s. sup of L_i / w(i)
    sigma_sq_w: float    # E_p[||grad f_i(x*)||^2 / w(i)]
    mean_sq_l_w: float   # E_p[L_i^2 / w(i)]


def _require_grad_bounds(grad_bounds, probs) -> np.ndarray:
    if grad_bounds is None:
        raise ParameterError("this scheme needs per-component gradient-norm bounds")
    g = linalg.as_vector(grad_bounds, probs.shape[0])
    if np.any(g < 0):
        raise ParameterError("gradient-norm bounds must be nonnegative")
    g_bar = float(np.dot(probs, g))
    if g_bar <= 0.0:
        raise DegenerateProblemError("gradient-norm bounds are all zero on the support")
    return g / g_bar


def _lipschitz_ratio(lipschitz, probs) -> np.ndarray:
    l_bar = float(np.dot(probs, lipschitz))
    if l_bar <= 0.0:
        raise DegenerateProblemError("mean Lipschitz constant is zero")
    return lipschitz / l_bar


def build_weights(
    scheme: WeightScheme,
    lipschitz,
    source_probs,
    grad_bounds=None,
) -> WeightTable:
    """Evaluate a scheme into normalized weights and sampling probabilities."""
    probs = linalg.as_vector(source_probs)
    lips = linalg.as_vector(lipschitz, probs.shape[0])
    if np.any(lips < 0):
        raise ParameterError("Lipschitz constants must be nonnegative")

    if isinstance(scheme, Uniform):
        w = np.ones_like(probs)
    elif isinstance(scheme, FullBias):
        w = _lipschitz_ratio(lips, probs)
    elif isinstance(scheme, PartialBias):
        w = scheme.lam + (1.0 - scheme.lam) * _lipschitz_ratio(lips, probs)
    elif isinstance(scheme, GradBias):
        w = _require_grad_bounds(grad_bounds, probs).copy()
    elif isinstance(scheme, MixedBias):
        w = 0.5 * _require_grad_bounds(grad_bounds, probs) \
            + 0.5 * _lipschitz_ratio(lips, probs)
    else:
        raise ParameterError(f"unknown weighting scheme: {scheme!r}")

    # Exact normalization in floating point: E_p[w] = 1 to machine precision.
    w = w / float(np.dot(probs, w))
    pw = probs * w
    pw = pw / float(pw.sum())
    return WeightTable(weights=w, sampling_probs=pw, scheme=scheme)


def effective_constants(
    table: WeightTable,
    lipschitz,
    grad_norms_sq,
    source_probs,
) -> EffectiveConstants:
    """Constants of the reweighted process.

    A zero weight is only legal on components that are invisible anyway
    (zero curvature and zero gradient at the solution, or zero sampling
    probability); otherwise the component would never be sampled while
    still carrying signal.
    """
    probs = linalg.as_vector(source_probs)
    lips = linalg.as_vector(lipschitz, probs.shape[0])
    g2 = linalg.as_vector(grad_norms_sq, probs.shape[0])
    w = table.weights
    active = probs > 0
    dead = active & (w == 0)
    if np.any(dead & ((lips > 0) | (g2 > 0))):
        raise UnreachableComponentError(
            "zero weight on a component with nonzero curvature or gradient"
        )
    live = active & (w > 0)
    sup_l_w = float((lips[live] / w[live]).max()) if np.any(live) else 0.0
    sigma_sq_w = float(np.dot(probs[live], g2[live] / w[live]))
    mean_sq_l_w = float(np.dot(probs[live], lips[live] ** 2 / w[live]))
    return EffectiveConstants(sup_l_w=sup_l_w, sigma_sq_w=sigma_sq_w,
                              mean_sq_l_w=mean_sq_l_w)
