"""Finite sums of one-dimensional quadratic components.

A problem is G(x) = sum_i p(i) f_i(x) with f_i(x) = s_i/2 (<z_i,x> - b_i)^2,
stored packed: component directions as matrix rows plus per-component
offsets, curvature scales, and the source sampling distribution p.
The least-squares objective 1/2 ||Ax - b||^2 is the special case
s_i = n, z_i = a_i, p uniform.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import linalg
from .errors import (
    DegenerateProblemError,
    DimensionError,
    DistributionError,
    ParameterError,
    ZeroRowError,
)

PROB_SUM_TOL = 1e-9
RESIDUAL_REL_TOL = 1e-12


@dataclass(frozen=True)
class QuadraticComponent:
    """Single component f(x) = scale/2 * (<z, x> - offset)^2."""

    z: np.ndarray
    offset: float
    scale: float

    @property
    def lipschitz(self) -> float:
        """Gradient Lipschitz constant: scale * ||z||^2."""
        return self.scale * float(np.dot(self.z, self.z))

    def value(self, x) -> float:
        r = float(np.dot(self.z, x)) - self.offset
        return 0.5 * self.scale * r * r

    def gradient(self, x) -> np.ndarray:
        r = float(np.dot(self.z, x)) - self.offset
        return self.scale * r * self.z


@dataclass(frozen=True)
class Problem:
    """Packed component collection with its sampling distribution."""

    z: np.ndarray            # (n, d) component directions
    offsets: np.ndarray      # (n,)
    scales: np.ndarray       # (n,) nonnegative curvatures
    source_probs: np.ndarray  # (n,) sums to 1

    def __post_init__(self):
        z = linalg.as_matrix(self.z)
        n = z.shape[0]
        offsets = linalg.as_vector(self.offsets, n)
        scales = linalg.as_vector(self.scales, n)
        probs = linalg.as_vector(self.source_probs, n)
        if np.any(scales < 0):
            raise ParameterError("component scales must be nonnegative")
        if np.any(probs < 0):
            raise DistributionError("sampling probabilities must be nonnegative")
        if abs(float(probs.sum()) - 1.0) > PROB_SUM_TOL:
            raise DistributionError(
                f"sampling probabilities sum to {probs.sum()!r}, expected 1"
            )
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "offsets", offsets)
        object.__setattr__(self, "scales", scales)
        object.__setattr__(self, "source_probs", probs)

    @property
    def n(self) -> int:
        return self.z.shape[0]

    @property
    def d(self) -> int:
        return self.z.shape[1]

    def component(self, i: int) -> QuadraticComponent:
        return QuadraticComponent(self.z[i], float(self.offsets[i]), float(self.scales[i]))

    @cached_property
    def lipschitz(self) -> np.ndarray:
        """Per-component gradient Lipschitz constants L_i = s_i ||z_i||^2."""
        return self.scales * np.einsum("ij,ij->i", self.z, self.z)

    def residuals(self, x) -> np.ndarray:
        """<z_i, x> - b_i for every component."""
        return self.z @ np.asarray(x, dtype=np.float64) - self.offsets

    def component_value(self, i: int, x) -> float:
        r = float(np.dot(self.z[i], x)) - float(self.offsets[i])
        return 0.5 * float(self.scales[i]) * r * r

    def component_gradient(self, i: int, x) -> np.ndarray:
        r = float(np.dot(self.z[i], x)) - float(self.offsets[i])
        return float(self.scales[i]) * r * self.z[i]

    def full_gradient(self, x) -> np.ndarray:
        """Gradient of G(x) = sum_i p(i) f_i(x)."""
        coef = self.source_probs * self.scales * self.residuals(x)
        return coef @ self.z

    def grad_norms_sq_at(self, x) -> np.ndarray:
        """||grad f_i(x)||^2 for every component."""
        r = self.residuals(x)
        return (self.scales * r) ** 2 * np.einsum("ij,ij->i", self.z, self.z)


@dataclass(frozen=True)
class ProblemStats:
    """Constants governing convergence, all taken at the minimizer of G."""

    lipschitz: np.ndarray   # per-component L_i
    l_bar: float            # E_p[L_i]
    sup_l: float            # max L_i over the sampled support
    inf_l: float            # min L_i over the sampled support
    mu: float               # strong convexity of G (smallest nonzero Hessian eig)
    sigma_sq: float         # E_p ||grad f_i(x*)||^2
    cond: float             # scaled condition number l_bar / mu
    x_star: np.ndarray      # minimizer of G (minimum-norm if not unique)


def from_least_squares(a, b) -> Problem:
    """Problem whose G equals 1/2 ||Ax - b||^2, sampled uniformly."""
    m = linalg.as_matrix(a)
    rhs = linalg.as_vector(b, m.shape[0])
    n = m.shape[0]
    return Problem(
        z=m,
        offsets=rhs,
        scales=np.full(n, float(n)),
        source_probs=np.full(n, 1.0 / n),
    )


def stats(prob: Problem) -> ProblemStats:
    """Compute the convergence constants of a problem.

    The minimizer is found by an exact least-squares solve on the
    sqrt(p_i s_i)-scaled component rows; the strong convexity constant
    is the smallest nonzero eigenvalue of the Hessian of G.
    """
    support = prob.source_probs > 0
    if not np.any(support):
        raise DistributionError("sampling distribution has empty support")
    lips = prob.lipschitz
    if float(lips[support].max(initial=0.0)) <= 0.0:
        raise DegenerateProblemError("every sampled component has zero curvature")

    w = prob.source_probs * prob.scales
    sw = np.sqrt(w)
    x_star = linalg.solve_least_squares(sw[:, None] * prob.z, sw * prob.offsets)
    hessian = (w[:, None] * prob.z).T @ prob.z
    hessian = 0.5 * (hessian + hessian.T)  # symmetrize roundoff
    _, mu = linalg.extremal_eigs(hessian)

    l_bar = float(np.dot(prob.source_probs, lips))
    sup_l = float(lips[support].max())
    inf_l = float(lips[support].min())
    sigma_sq = float(np.dot(prob.source_probs, prob.grad_norms_sq_at(x_star)))
    # a consistent system solved in floats leaves residuals at roundoff
    # level; below the relative tolerance they count as exactly zero
    row_norms = np.sqrt(np.einsum("ij,ij->i", prob.z, prob.z))
    res_floor = RESIDUAL_REL_TOL * (
        np.abs(prob.offsets) + row_norms * float(np.linalg.norm(x_star))
    )
    floor = float(np.dot(prob.source_probs,
                         (prob.scales * res_floor) ** 2 * row_norms ** 2))
    if sigma_sq <= floor:
        sigma_sq = 0.0
    return ProblemStats(
        lipschitz=lips,
        l_bar=l_bar,
        sup_l=sup_l,
        inf_l=inf_l,
        mu=mu,
        sigma_sq=sigma_sq,
        cond=l_bar / mu,
        x_star=x_star,
    )


def weighted_solution(a, b) -> np.ndarray:
    """Minimizer of ||D^{-1}(Ax - b)||_2 where D = diag(row norms of A).

    This is the point row-normalized (uniform-row) iteration methods
    converge to on inconsistent systems.
    """
    m = linalg.as_matrix(a)
    rhs = linalg.as_vector(b, m.shape[0])
    norms = np.sqrt(np.einsum("ij,ij->i", m, m))
    if np.any(norms == 0):
        raise ZeroRowError("matrix has a zero row; row-normalized solution undefined")
    return linalg.solve_least_squares(m / norms[:, None], rhs / norms)


def tightness_instance(n_flat: int, sign: int = 1) -> Problem:
    """Two-dimensional instance on which uniform sampling provably stalls.

    One steep component (curvature ``n_flat``, direction e_1, offset
    ``sign``) hides among ``n_flat`` flat unit-curvature components in
    direction e_2.  Uniform sampling needs ~``n_flat`` draws to see the
    steep component once; sampling proportional to curvature needs ~2.
    """
    if n_flat < 1:
        raise ParameterError(f"n_flat must be >= 1, got {n_flat}")
    if sign not in (-1, 1):
        raise ParameterError(f"sign must be -1 or +1, got {sign}")
    n = n_flat + 1
    z = np.zeros((n, 2))
    z[0, 0] = 1.0
    z[1:, 1] = 1.0
    offsets = np.zeros(n)
    offsets[0] = float(sign)
    scales = np.ones(n)
    scales[0] = float(n_flat)
    return Problem(z=z, offsets=offsets, scales=scales,
                   source_probs=np.full(n, 1.0 / n))


def cocoercivity_gap(comp: QuadraticComponent, x, y) -> float:
    """L <x-y, grad f(x) - grad f(y)> - ||grad f(x) - grad f(y)||^2.

    Nonnegative for any L-smooth convex function; identically zero (up
    to roundoff) for these one-dimensional quadratics, where the
    inequality is tight.
    """
    xx = linalg.as_vector(x)
    yy = linalg.as_vector(y)
    if xx.shape != yy.shape or xx.shape[0] != comp.z.shape[0]:
        raise DimensionError("x and y must match the component dimension")
    gdiff = comp.gradient(xx) - comp.gradient(yy)
    return comp.lipschitz * float(np.dot(xx - yy, gdiff)) - float(np.dot(gdiff, gdiff))
