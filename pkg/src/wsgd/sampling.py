"""Discrete samplers over component indices.

The workhorse is an alias table (Vose construction): O(n) to build,
and each draw costs one uniform and one comparison.  Rejection-based
samplers are provided for weightings where materializing the tilted
distribution is undesirable; their draw distributions match the exact
tables, at a geometric number of proposals per draw.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from ._backend import kernels
from .errors import DistributionError, ParameterError
from .rng import RngStream

PROB_SUM_TOL = 1e-9


@dataclass(frozen=True)
class AliasTable:
    """Cell acceptance thresholds and alias targets for one distribution."""

    prob: np.ndarray   # (n,) float64 in [0, 1]
    alias: np.ndarray  # (n,) int64

    @property
    def n(self) -> int:
        return self.prob.shape[0]


def build_alias(p) -> AliasTable:
    """Vose alias table for the distribution p (must sum to 1)."""
    probs = linalg.as_vector(p)
    n = probs.shape[0]
    if np.any(probs < 0):
        raise DistributionError("probabilities must be nonnegative")
    if abs(float(probs.sum()) - 1.0) > PROB_SUM_TOL:
        raise DistributionError(f"probabilities sum to {probs.sum()!r}, expected 1")

    scaled = (probs * n).tolist()
    prob = np.ones(n, dtype=np.float64)
    alias = np.arange(n, dtype=np.int64)
    small = [i for i in range(n) if scaled[i] < 1.0]
    large = [i for i in range(n) if scaled[i] >= 1.0]
    while small and large:
        s = small.pop()
        l = large.pop()
        prob[s] = scaled[s]
        alias[s] = l
        scaled[l] = (scaled[l] + scaled[s]) - 1.0
        if scaled[l] < 1.0:
            small.append(l)
        else:
            large.append(l)
    # Leftovers are exactly: cells whose residual mass is 1 up to roundoff.
    return AliasTable(prob=prob, alias=alias)


def induced_probs(table: AliasTable) -> np.ndarray:
    """Distribution the table actually samples (for verification)."""
    n = table.n
    out = table.prob.copy()
    np.add.at(out, table.alias, 1.0 - table.prob)
    return out / n


def draw(table: AliasTable, rng: RngStream) -> int:
    """One index from the table, advancing the stream."""
    idx, rng.state = kernels.alias_draw_many(table.prob, table.alias, 1, rng.state)
    return int(idx[0])


def draw_many(table: AliasTable, rng: RngStream, count: int) -> np.ndarray:
    """``count`` indices from the table, advancing the stream."""
    idx, rng.state = kernels.alias_draw_many(table.prob, table.alias, count, rng.state)
    return idx


@dataclass(frozen=True)
class RejectionSampler:
    """Sample from the w-tilted source distribution by proposing from the
    source table and accepting index i with probability w(i)/cap."""

    source: AliasTable
    accept: np.ndarray
    cap: float


def rejection_sampler(source_probs, weights, cap: float | None = None) -> RejectionSampler:
    """Build a rejection sampler for p_w(i) proportional to w(i) p(i).

    ``cap`` must dominate every weight; with E_p[w] = 1 the expected
    number of proposals per accepted draw is exactly ``cap``.
    """
    probs = linalg.as_vector(source_probs)
    w = linalg.as_vector(weights, probs.shape[0])
    if np.any(w < 0):
        raise ParameterError("weights must be nonnegative")
    w_max = float(w.max())
    if w_max <= 0:
        raise ParameterError("weights are identically zero")
    if cap is None:
        cap = w_max
    if cap < w_max:
        raise ParameterError(f"cap {cap} is below the largest weight {w_max}")
    return RejectionSampler(source=build_alias(probs), accept=w / cap, cap=float(cap))


def draw_rejection(sampler: RejectionSampler, rng: RngStream) -> tuple[int, int]:
    """One accepted index and the number of proposals it consumed."""
    idx, proposals, rng.state = kernels.rejection_draw_many(
        sampler.source.prob, sampler.source.alias, sampler.accept, 1, rng.state
    )
    return int(idx[0]), int(proposals)


def draw_rejection_many(
    sampler: RejectionSampler, rng: RngStream, count: int
) -> tuple[np.ndarray, int]:
    """``count`` accepted indices and the total proposal count."""
    idx, proposals, rng.state = kernels.rejection_draw_many(
        sampler.source.prob, sampler.source.alias, sampler.accept, count, rng.state
    )
    return idx, int(proposals)


@dataclass(frozen=True)
class MixtureSampler:
    """Two-stage sampler for the partial-bias family: with probability
    ``lam`` one plain source draw; otherwise propose from the source and
    accept i with probability L_i / sup L.  The resulting law is exactly
    lam * p + (1 - lam) * p_{w_L}, the partial-bias distribution."""

    source: AliasTable
    accept: np.ndarray
    lam: float


def mixture_sampler(source_probs, lipschitz, lam: float) -> MixtureSampler:
    probs = linalg.as_vector(source_probs)
    lips = linalg.as_vector(lipschitz, probs.shape[0])
    if not (0.0 <= lam <= 1.0):
        raise ParameterError(f"lam must be in [0, 1], got {lam}")
    if np.any(lips < 0):
        raise ParameterError("Lipschitz constants must be nonnegative")
    sup_l = float(lips.max())
    if sup_l <= 0:
        raise ParameterError("Lipschitz constants are identically zero")
    return MixtureSampler(source=build_alias(probs), accept=lips / sup_l, lam=float(lam))


def draw_mixture_many(
    sampler: MixtureSampler, rng: RngStream, count: int
) -> tuple[np.ndarray, int]:
    """``count`` indices and the total proposal count (plain draws included)."""
    idx, proposals, rng.state = kernels.two_stage_draw_many(
        sampler.source.prob, sampler.source.alias, sampler.accept,
        sampler.lam, count, rng.state
    )
    return idx, int(proposals)
