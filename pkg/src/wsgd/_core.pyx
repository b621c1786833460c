# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: splitmix64 stream, alias/rejection sampling, and the
weighted quadratic SGD inner loop.  Semantics (draw order, float op
order) mirror ``_pure`` exactly so traces are bitwise identical across
backends."""

import numpy as np

from libc.math cimport cos, log, sqrt, M_PI

ctypedef unsigned long long u64
ctypedef long long i64

cdef double INV_2_53 = 1.0 / 9007199254740992.0
cdef double TWO_PI = 2.0 * M_PI
cdef u64 INCREMENT = 0x9E3779B97F4A7C15ULL
cdef u64 MIX1 = 0xBF58476D1CE4E5B9ULL
cdef u64 MIX2 = 0x94D049BB133111EBULL

BACKEND = "compiled"


cdef inline u64 _next(u64* state) nogil:
    state[0] += INCREMENT
    cdef u64 z = state[0]
    z = (z ^ (z >> 30)) * MIX1
    z = (z ^ (z >> 27)) * MIX2
    return z ^ (z >> 31)


cdef inline double _uniform(u64* state) nogil:
    return (_next(state) >> 11) * INV_2_53


cdef inline Py_ssize_t _draw(const double[::1] prob, const i64[::1] alias,
                             Py_ssize_t n, u64* state) nogil:
    cdef double scaled = _uniform(state) * n
    cdef Py_ssize_t j = <Py_ssize_t>scaled
    if j >= n:
        j = n - 1
    if scaled - j < prob[j]:
        return j
    return alias[j]


def uniform_many(u64 state, Py_ssize_t count):
    """Return ``count`` doubles in [0, 1) and the advanced state."""
    out = np.empty(count, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t j
    with nogil:
        for j in range(count):
            o[j] = _uniform(&state)
    return out, state


def gaussian_fill(u64 state, double[::1] out, double mean, double std):
    """Fill ``out`` with normal deviates; two raw draws per element."""
    cdef Py_ssize_t j
    cdef double u1, u2
    with nogil:
        for j in range(out.shape[0]):
            u1 = ((_next(&state) >> 11) + 1) * INV_2_53
            u2 = (_next(&state) >> 11) * INV_2_53
            out[j] = mean + std * (sqrt(-2.0 * log(u1)) * cos(TWO_PI * u2))
    return state


def alias_draw_many(const double[::1] prob, const i64[::1] alias,
                    Py_ssize_t count, u64 state):
    """``count`` draws from an alias table; one uniform per draw."""
    cdef Py_ssize_t n = prob.shape[0]
    out = np.empty(count, dtype=np.int64)
    cdef i64[::1] o = out
    cdef Py_ssize_t j
    with nogil:
        for j in range(count):
            o[j] = _draw(prob, alias, n, &state)
    return out, state


def rejection_draw_many(const double[::1] sprob, const i64[::1] salias,
                        const double[::1] accept, Py_ssize_t count, u64 state):
    """``count`` accepted draws; index i is kept with probability accept[i]."""
    cdef Py_ssize_t n = sprob.shape[0]
    out = np.empty(count, dtype=np.int64)
    cdef i64[::1] o = out
    cdef Py_ssize_t j, idx
    cdef i64 proposals = 0
    cdef double u
    with nogil:
        for j in range(count):
            while True:
                idx = _draw(sprob, salias, n, &state)
                proposals += 1
                u = _uniform(&state)
                if u < accept[idx]:
                    break
            o[j] = idx
    return out, proposals, state


def two_stage_draw_many(const double[::1] sprob, const i64[::1] salias,
                        const double[::1] accept, double lam,
                        Py_ssize_t count, u64 state):
    """Mixture draws: plain source draw with probability ``lam``, else a
    rejection-accepted draw.  Proposal count includes the plain draws."""
    cdef Py_ssize_t n = sprob.shape[0]
    out = np.empty(count, dtype=np.int64)
    cdef i64[::1] o = out
    cdef Py_ssize_t j, idx
    cdef i64 proposals = 0
    cdef double u
    with nogil:
        for j in range(count):
            u = _uniform(&state)
            if u < lam:
                idx = _draw(sprob, salias, n, &state)
                proposals += 1
            else:
                while True:
                    idx = _draw(sprob, salias, n, &state)
                    proposals += 1
                    u = _uniform(&state)
                    if u < accept[idx]:
                        break
            o[j] = idx
    return out, proposals, state


def first_hit(const double[::1] sprob, const i64[::1] salias,
              Py_ssize_t target, i64 cap, u64 state):
    """Number of draws until ``target`` first appears, or -1 within ``cap``."""
    cdef Py_ssize_t n = sprob.shape[0]
    cdef Py_ssize_t idx
    cdef i64 j
    cdef i64 hit = -1
    with nogil:
        for j in range(1, cap + 1):
            idx = _draw(sprob, salias, n, &state)
            if idx == target:
                hit = j
                break
    return hit, state


def run_weighted_quadratic(const double[:, ::1] z, const double[::1] offsets,
                           const double[::1] scales, const double[::1] inv_w,
                           const double[::1] aprob, const i64[::1] aalias,
                           const double[::1] source_probs,
                           const double[::1] x0, const double[::1] ref,
                           double gamma, i64 max_iters,
                           const i64[::1] checkpoints,
                           double target_err_sq, double grad_tol,
                           i64 grad_interval, u64 state):
    """Compiled twin of ``_pure.run_weighted_quadratic``; see its docstring."""
    cdef Py_ssize_t n = z.shape[0]
    cdef Py_ssize_t d = z.shape[1]
    cdef Py_ssize_t n_ck = checkpoints.shape[0]

    x_arr = np.array(x0, dtype=np.float64)
    g_arr = np.empty(d, dtype=np.float64)
    iters_arr = np.empty(n_ck + 1, dtype=np.int64)
    errs_arr = np.empty(n_ck + 1, dtype=np.float64)
    cdef double[::1] x = x_arr
    cdef double[::1] g = g_arr
    cdef i64[::1] log_iters = iters_arr
    cdef double[::1] log_errs = errs_arr

    cdef i64 k = 0
    cdef Py_ssize_t ci = 0, n_logged = 0
    cdef i64 hit_tol_at = -1
    cdef i64 first_hit_iter = -1
    cdef Py_ssize_t i, t, idx
    cdef double dot, coef, s, dv, c, pi

    with nogil:
        if target_err_sq >= 0.0:
            s = 0.0
            for t in range(d):
                dv = x[t] - ref[t]
                s += dv * dv
            if s <= target_err_sq:
                first_hit_iter = 0
        while True:
            if ci < n_ck and checkpoints[ci] == k:
                s = 0.0
                for t in range(d):
                    dv = x[t] - ref[t]
                    s += dv * dv
                log_iters[n_logged] = k
                log_errs[n_logged] = s
                n_logged += 1
                ci += 1
            if k >= max_iters:
                break
            if grad_tol >= 0.0 and k > 0 and k % grad_interval == 0:
                for t in range(d):
                    g[t] = 0.0
                for i in range(n):
                    pi = source_probs[i]
                    if pi == 0.0:
                        continue
                    dot = 0.0
                    for t in range(d):
                        dot += z[i, t] * x[t]
                    c = pi * scales[i] * (dot - offsets[i])
                    for t in range(d):
                        g[t] += c * z[i, t]
                s = 0.0
                for t in range(d):
                    s += g[t] * g[t]
                if s <= grad_tol * grad_tol:
                    hit_tol_at = k
                    break
            idx = _draw(aprob, aalias, n, &state)
            dot = 0.0
            for t in range(d):
                dot += z[idx, t] * x[t]
            coef = gamma * inv_w[idx] * scales[idx] * (dot - offsets[idx])
            for t in range(d):
                x[t] -= coef * z[idx, t]
            k += 1
            if target_err_sq >= 0.0 and first_hit_iter < 0:
                s = 0.0
                for t in range(d):
                    dv = x[t] - ref[t]
                    s += dv * dv
                if s <= target_err_sq:
                    first_hit_iter = k
        if n_logged == 0 or log_iters[n_logged - 1] != k:
            s = 0.0
            for t in range(d):
                dv = x[t] - ref[t]
                s += dv * dv
            log_iters[n_logged] = k
            log_errs[n_logged] = s
            n_logged += 1

    return (
        x_arr,
        iters_arr[:n_logged].copy(),
        errs_arr[:n_logged].copy(),
        k,
        hit_tol_at,
        first_hit_iter,
        state,
    )
