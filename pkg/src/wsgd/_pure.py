"""Pure-Python fallback kernels.

Every function here has a compiled twin in ``_core`` with identical
semantics: same draw order, same floating-point operation order, so a
given seed produces bitwise-identical traces on either backend.  Arrays
are converted to plain lists up front; element access on lists is much
cheaper than scalar indexing into ndarrays.
"""

from __future__ import annotations

import math

import numpy as np

_MASK = 0xFFFFFFFFFFFFFFFF
_INCREMENT = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_INV_2_53 = 2.0 ** -53
_TWO_PI = 2.0 * math.pi

BACKEND = "pure"


def _next(state: int) -> tuple[int, int]:
    state = (state + _INCREMENT) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    return z ^ (z >> 31), state


def uniform_many(state: int, count: int):
    """Return ``count`` doubles in [0, 1) and the advanced state."""
    out = np.empty(count, dtype=np.float64)
    for j in range(count):
        v, state = _next(state)
        out[j] = (v >> 11) * _INV_2_53
    return out, state


def gaussian_fill(state: int, out: np.ndarray, mean: float, std: float) -> int:
    """Fill ``out`` with normal deviates; two raw draws per element."""
    buf = [0.0] * len(out)
    for j in range(len(buf)):
        v1, state = _next(state)
        v2, state = _next(state)
        u1 = ((v1 >> 11) + 1) * _INV_2_53
        u2 = (v2 >> 11) * _INV_2_53
        buf[j] = mean + std * (math.sqrt(-2.0 * math.log(u1)) * math.cos(_TWO_PI * u2))
    out[:] = buf
    return state


def _draw(prob, alias, n, state):
    v, state = _next(state)
    scaled = ((v >> 11) * _INV_2_53) * n
    j = int(scaled)
    if j >= n:
        j = n - 1
    if scaled - j < prob[j]:
        return j, state
    return alias[j], state


def alias_draw_many(prob, alias, count: int, state: int):
    """``count`` draws from an alias table; one uniform per draw."""
    p = prob.tolist()
    a = alias.tolist()
    n = len(p)
    out = np.empty(count, dtype=np.int64)
    for j in range(count):
        idx, state = _draw(p, a, n, state)
        out[j] = idx
    return out, state


def rejection_draw_many(sprob, salias, accept, count: int, state: int):
    """``count`` accepted draws; proposals come from the source alias table
    and index i is kept with probability accept[i]."""
    p = sprob.tolist()
    a = salias.tolist()
    acc = accept.tolist()
    n = len(p)
    out = np.empty(count, dtype=np.int64)
    proposals = 0
    for j in range(count):
        while True:
            idx, state = _draw(p, a, n, state)
            proposals += 1
            v, state = _next(state)
            u = (v >> 11) * _INV_2_53
            if u < acc[idx]:
                break
        out[j] = idx
    return out, proposals, state


def two_stage_draw_many(sprob, salias, accept, lam: float, count: int, state: int):
    """``count`` draws from the mixture: with probability ``lam`` a plain
    source draw, otherwise a rejection-accepted draw (accept[i] per
    proposal).  Proposal count includes the plain draws."""
    p = sprob.tolist()
    a = salias.tolist()
    acc = accept.tolist()
    n = len(p)
    out = np.empty(count, dtype=np.int64)
    proposals = 0
    for j in range(count):
        v, state = _next(state)
        u = (v >> 11) * _INV_2_53
        if u < lam:
            idx, state = _draw(p, a, n, state)
            proposals += 1
        else:
            while True:
                idx, state = _draw(p, a, n, state)
                proposals += 1
                v, state = _next(state)
                u = (v >> 11) * _INV_2_53
                if u < acc[idx]:
                    break
        out[j] = idx
    return out, proposals, state


def first_hit(sprob, salias, target: int, cap: int, state: int):
    """Number of draws until ``target`` first appears (inclusive), or -1
    if it does not appear within ``cap`` draws."""
    p = sprob.tolist()
    a = salias.tolist()
    n = len(p)
    for j in range(1, cap + 1):
        idx, state = _draw(p, a, n, state)
        if idx == target:
            return j, state
    return -1, state


def run_weighted_quadratic(
    z,
    offsets,
    scales,
    inv_w,
    aprob,
    aalias,
    source_probs,
    x0,
    ref,
    gamma: float,
    max_iters: int,
    checkpoints,
    target_err_sq: float,
    grad_tol: float,
    grad_interval: int,
    state: int,
):
    """Iterate x := x - gamma/w(i) * grad f_i(x) with alias-sampled i.

    Components are f_i(x) = scales[i]/2 * (<z[i], x> - offsets[i])^2 and
    inv_w[i] = 1/w(i).  Logs error-to-``ref`` at the given checkpoint
    iterations (sorted, starting at 0); tracks the first iteration whose
    error is <= target_err_sq when that target is nonnegative; checks
    ||grad G(x)|| <= grad_tol every grad_interval iterations when
    grad_tol is nonnegative (G averages over source_probs).

    Returns (x, ckpt_iters, ckpt_errs, iterations_run, hit_tol_at,
    first_hit_iter, new_state); the *_at values are -1 when unset.
    """
    n, d = z.shape
    rows = z.tolist()
    offs = offsets.tolist()
    scl = scales.tolist()
    iw = inv_w.tolist()
    p = aprob.tolist()
    a = aalias.tolist()
    sp = source_probs.tolist()
    x = x0.tolist()
    r = ref.tolist()
    cks = checkpoints.tolist()
    n_ck = len(cks)

    def err():
        s = 0.0
        for t in range(d):
            dv = x[t] - r[t]
            s += dv * dv
        return s

    def grad_norm_sq():
        g = [0.0] * d
        for i in range(n):
            pi = sp[i]
            if pi == 0.0:
                continue
            row = rows[i]
            dot = 0.0
            for t in range(d):
                dot += row[t] * x[t]
            c = pi * scl[i] * (dot - offs[i])
            for t in range(d):
                g[t] += c * row[t]
        s = 0.0
        for t in range(d):
            s += g[t] * g[t]
        return s

    log_iters = []
    log_errs = []
    k = 0
    ci = 0
    hit_tol_at = -1
    first_hit_iter = -1
    if target_err_sq >= 0.0 and err() <= target_err_sq:
        first_hit_iter = 0
    while True:
        if ci < n_ck and cks[ci] == k:
            log_iters.append(k)
            log_errs.append(err())
            ci += 1
        if k >= max_iters:
            break
        if grad_tol >= 0.0 and k > 0 and k % grad_interval == 0:
            if grad_norm_sq() <= grad_tol * grad_tol:
                hit_tol_at = k
                break
        idx, state = _draw(p, a, n, state)
        row = rows[idx]
        dot = 0.0
        for t in range(d):
            dot += row[t] * x[t]
        coef = gamma * iw[idx] * scl[idx] * (dot - offs[idx])
        for t in range(d):
            x[t] -= coef * row[t]
        k += 1
        if target_err_sq >= 0.0 and first_hit_iter < 0:
            if err() <= target_err_sq:
                first_hit_iter = k
    if not log_iters or log_iters[-1] != k:
        log_iters.append(k)
        log_errs.append(err())
    return (
        np.array(x, dtype=np.float64),
        np.array(log_iters, dtype=np.int64),
        np.array(log_errs, dtype=np.float64),
        k,
        hit_tol_at,
        first_hit_iter,
        state,
    )
