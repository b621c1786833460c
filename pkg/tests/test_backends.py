"""Bitwise agreement between the compiled kernels and the pure fallback.

Every kernel must replay the exact same draw sequence and produce the
exact same doubles, so a seed gives one answer regardless of backend.
"""

import numpy as np
import pytest

from wsgd import _backend, _pure
from wsgd.problem import from_least_squares, stats
from wsgd.sampling import build_alias
from wsgd.sgd import checkpoint_schedule
from wsgd.weights import PartialBias, build_weights

compiled = pytest.importorskip(
    "wsgd._core", reason="compiled backend not built; parity not checkable"
)


def _assert_same(got, want):
    for g, w in zip(got, want):
        if isinstance(w, np.ndarray):
            assert g.dtype == w.dtype
            assert np.array_equal(g, w)
        else:
            assert g == w


def test_uniform_many_parity():
    _assert_same(compiled.uniform_many(99, 4096), _pure.uniform_many(99, 4096))


def test_gaussian_fill_parity():
    out_c = np.empty(1001)
    out_p = np.empty(1001)
    sc = compiled.gaussian_fill(5, out_c, -2.0, 3.5)
    sp = _pure.gaussian_fill(5, out_p, -2.0, 3.5)
    assert sc == sp
    assert np.array_equal(out_c, out_p)


def test_alias_draw_parity():
    table = build_alias(np.array([0.5, 0.25, 0.125, 0.125]))
    _assert_same(
        compiled.alias_draw_many(table.prob, table.alias, 10000, 31),
        _pure.alias_draw_many(table.prob, table.alias, 10000, 31),
    )


def test_rejection_draw_parity():
    table = build_alias(np.full(8, 0.125))
    accept = np.linspace(0.1, 1.0, 8)
    _assert_same(
        compiled.rejection_draw_many(table.prob, table.alias, accept, 2000, 7),
        _pure.rejection_draw_many(table.prob, table.alias, accept, 2000, 7),
    )


def test_two_stage_draw_parity():
    table = build_alias(np.full(6, 1.0 / 6.0))
    accept = np.array([1.0, 0.5, 0.25, 0.9, 0.1, 0.75])
    _assert_same(
        compiled.two_stage_draw_many(table.prob, table.alias, accept, 0.3, 2000, 13),
        _pure.two_stage_draw_many(table.prob, table.alias, accept, 0.3, 2000, 13),
    )


def test_first_hit_parity():
    table = build_alias(np.array([0.01] * 50 + [0.5]))
    for seed in (1, 2, 3, 500):
        assert compiled.first_hit(table.prob, table.alias, 17, 100000, seed) == \
            _pure.first_hit(table.prob, table.alias, 17, 100000, seed)


def _run_args(lam, max_iters, seed, grad_tol=-1.0, target=-1.0):
    rng = np.random.default_rng(8)
    a = rng.normal(size=(35, 6))
    b = a @ rng.normal(size=6) + 0.3 * rng.normal(size=35)
    prob = from_least_squares(a, b)
    st = stats(prob)
    table = build_weights(PartialBias(lam), st.lipschitz, prob.source_probs)
    alias = build_alias(table.sampling_probs)
    inv_w = 1.0 / table.weights
    return (
        prob.z, prob.offsets, prob.scales, inv_w, alias.prob, alias.alias,
        prob.source_probs, np.zeros(prob.d), st.x_star, 1.0 / (3.0 * st.sup_l),
        max_iters, checkpoint_schedule(max_iters), target, grad_tol, prob.n, seed,
    )


@pytest.mark.parametrize("lam,iters,seed", [(0.0, 500, 3), (0.5, 2047, 17), (1.0, 64, 99)])
def test_run_kernel_parity(lam, iters, seed):
    args = _run_args(lam, iters, seed)
    _assert_same(
        compiled.run_weighted_quadratic(*args),
        _pure.run_weighted_quadratic(*args),
    )


def test_run_kernel_parity_with_tracking():
    args = _run_args(0.4, 3000, 23, grad_tol=1e-3, target=0.05)
    _assert_same(
        compiled.run_weighted_quadratic(*args),
        _pure.run_weighted_quadratic(*args),
    )


def test_env_var_forces_pure_backend(tmp_path):
    import subprocess
    import sys

    code = "import wsgd; print(wsgd.backend_name())"
    out = subprocess.run(
        [sys.executable, "-c", code],
        capture_output=True, text=True, env={"PATH": "/usr/bin:/bin", "WSGD_PURE": "1"},
    )
    assert out.stdout.strip() == "pure"


def test_default_backend_is_compiled_when_built():
    assert _backend.BACKEND == "compiled"
    assert _backend.backend_name() == "compiled"
