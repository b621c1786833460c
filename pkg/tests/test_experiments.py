"""Benchmark case generation, sweeps, and result serialization."""

import numpy as np
import pytest

from wsgd.errors import ParameterError
from wsgd.experiments import (
    CASE_IDS,
    CaseSpec,
    NOISE_SD,
    generate_case,
    row_stds,
    run_sweep,
    tightness_demo,
)
from wsgd.io import read_sweeps
from wsgd.sgd import checkpoint_schedule


SMALL = dict(n=60, d=4, trials=3, lambda_grid=(0.0, 0.5, 1.0),
             eps_target=0.05, max_iters=400, seed_base=11)


# --------------------------------------------------------------- generation

def test_row_stds_shapes():
    assert np.array_equal(row_stds(2, 5), np.ones(5))
    got = row_stds(3, 4)
    assert np.allclose(got, np.sqrt([1, 2, 3, 4]), rtol=1e-15)
    c1 = row_stds(1, 6)
    assert np.array_equal(c1[:-1], np.ones(5)) and c1[-1] == 10.0


def test_flat_case_frobenius_mass():
    spec = CaseSpec(case_id=2, n=1000, d=10, trials=1)
    a, _, _ = generate_case(spec, trial=0)
    frob = float((a * a).sum())
    assert abs(frob - 10000.0) <= 0.03 * 10000.0


def test_heavy_row_case_mass():
    spec = CaseSpec(case_id=1, n=200, d=10, trials=1)
    heavy = [float(generate_case(spec, t)[0][-1] @ generate_case(spec, t)[0][-1])
             for t in range(50)]
    assert 800.0 <= float(np.mean(heavy)) <= 1200.0


def test_graded_case_mass():
    spec = CaseSpec(case_id=4, n=300, d=10, trials=1)
    a, _, _ = generate_case(spec, 0)
    want = 10.0 * 300 * 301 / 2
    assert abs(float((a * a).sum()) - want) <= 0.05 * want


def test_noise_scale_per_case():
    for case_id in CASE_IDS:
        spec = CaseSpec(case_id=case_id, n=1000, d=10, trials=1)
        a, b, x_true = generate_case(spec, 0)
        resid = b - a @ x_true
        sd = float(np.std(resid))
        assert abs(sd - NOISE_SD[case_id]) <= 0.15 * NOISE_SD[case_id]


def test_generate_case_deterministic_and_trial_sensitive():
    spec = CaseSpec(case_id=3, n=50, d=5, trials=2)
    a0, b0, x0 = generate_case(spec, 0)
    a0b, b0b, x0b = generate_case(spec, 0)
    a1, _, _ = generate_case(spec, 1)
    assert np.array_equal(a0, a0b) and np.array_equal(b0, b0b)
    assert np.array_equal(x0, x0b)
    assert not np.array_equal(a0, a1)


def test_case_spec_validation():
    with pytest.raises(ParameterError):
        CaseSpec(case_id=7)
    with pytest.raises(ParameterError):
        CaseSpec(case_id=1, trials=0)
    with pytest.raises(ParameterError):
        CaseSpec(case_id=1, lambda_grid=(0.0, 1.5))
    with pytest.raises(ParameterError):
        CaseSpec(case_id=1, lambda_grid=())
    with pytest.raises(ParameterError):
        CaseSpec(case_id=1, eps_target=0.0)


# -------------------------------------------------------------------- sweeps

def test_sweep_shapes_and_determinism():
    spec = CaseSpec(case_id=2, **SMALL)
    res = run_sweep(spec)
    n_lam = len(SMALL["lambda_grid"])
    assert res.case_id == 2
    assert res.lambda_grid == SMALL["lambda_grid"]
    assert np.array_equal(res.checkpoints, checkpoint_schedule(SMALL["max_iters"]))
    assert res.mean_errors_sq.shape == (n_lam, len(res.checkpoints))
    assert res.mean_iters_to_eps.shape == (n_lam,)
    assert len(res.censored) == n_lam
    res2 = run_sweep(spec)
    assert np.array_equal(res.mean_errors_sq, res2.mean_errors_sq)
    assert np.array_equal(res.mean_iters_to_eps, res2.mean_iters_to_eps)
    assert np.array_equal(res.censored, res2.censored)


def test_sweep_initial_checkpoint_is_lambda_independent():
    # the starting error is a property of the instance, not the sampler
    spec = CaseSpec(case_id=2, **SMALL)
    res = run_sweep(spec)
    col0 = res.mean_errors_sq[:, 0]
    assert np.allclose(col0, col0[0], rtol=1e-12)


def test_sweep_errors_decrease_for_sane_cells():
    spec = CaseSpec(case_id=2, **SMALL)
    res = run_sweep(spec)
    assert (res.mean_errors_sq[:, -1] < res.mean_errors_sq[:, 0]).all()


def test_sweep_censoring_at_tiny_budget():
    spec = CaseSpec(case_id=2, n=60, d=4, trials=2, lambda_grid=(0.5,),
                    eps_target=1e-12, max_iters=5, seed_base=11)
    res = run_sweep(spec)
    assert res.censored.tolist() == [True]
    assert res.mean_iters_to_eps[0] == 5.0


def test_sweep_zero_budget_reports_initial_error():
    spec = CaseSpec(case_id=2, n=60, d=4, trials=1, lambda_grid=(0.0, 1.0),
                    eps_target=1e-9, max_iters=0, seed_base=3)
    res = run_sweep(spec)
    assert res.mean_errors_sq.shape == (2, 1)
    assert res.mean_errors_sq[0, 0] == res.mean_errors_sq[1, 0] > 0
    assert res.censored.tolist() == [True, True]
    assert np.array_equal(res.mean_iters_to_eps, [0.0, 0.0])


def test_sweep_loose_target_hits_immediately():
    spec = CaseSpec(case_id=2, n=60, d=4, trials=2, lambda_grid=(0.5,),
                    eps_target=1e9, max_iters=10, seed_base=4)
    res = run_sweep(spec)
    # start already inside the target ball: first hit is iteration 0
    assert res.censored.tolist() == [False]
    assert res.mean_iters_to_eps[0] == 0.0


# ----------------------------------------------------------------- tightness

def test_tightness_two_components():
    res = tightness_demo(1, 10000, seed=0)
    assert res.n_flat == 1 and res.trials == 10000
    # both laws give the marked component probability 1/2
    assert 1.9 <= res.uniform_mean <= 2.1
    assert 1.9 <= res.biased_mean <= 2.1


def test_tightness_seed_determinism():
    r1 = tightness_demo(9, 500, seed=3)
    r2 = tightness_demo(9, 500, seed=3)
    r3 = tightness_demo(9, 500, seed=4)
    assert (r1.uniform_mean, r1.biased_mean) == (r2.uniform_mean, r2.biased_mean)
    assert (r1.uniform_mean, r1.biased_mean) != (r3.uniform_mean, r3.biased_mean)


def test_tightness_validation():
    with pytest.raises(ParameterError):
        tightness_demo(0, 10)
    with pytest.raises(ParameterError):
        tightness_demo(5, 0)


# ------------------------------------------------------------- serialization

def test_emit_and_read_back_exact(tmp_path):
    from wsgd.experiments import emit_results
    specs = [CaseSpec(case_id=c, **SMALL) for c in (1, 2)]
    results = [run_sweep(s) for s in specs]
    paths = emit_results(results, tmp_path)
    names = sorted(p.name for p in paths)
    assert names == ["curves.csv", "iters.csv", "plot.gp"]
    back = read_sweeps(tmp_path / "curves.csv", tmp_path / "iters.csv")
    assert len(back) == 2
    for orig, rt in zip(results, back):
        assert rt.case_id == orig.case_id
        assert rt.lambda_grid == orig.lambda_grid
        assert np.array_equal(rt.checkpoints, orig.checkpoints)
        assert np.array_equal(rt.mean_errors_sq, orig.mean_errors_sq)
        assert np.array_equal(rt.mean_iters_to_eps, orig.mean_iters_to_eps)
        assert np.array_equal(rt.censored, orig.censored)


def test_emit_is_byte_deterministic(tmp_path):
    from wsgd.experiments import emit_results
    res = [run_sweep(CaseSpec(case_id=2, **SMALL))]
    d1, d2 = tmp_path / "a", tmp_path / "b"
    d1.mkdir(), d2.mkdir()
    emit_results(res, d1)
    emit_results(res, d2)
    for name in ("curves.csv", "iters.csv", "plot.gp"):
        assert (d1 / name).read_bytes() == (d2 / name).read_bytes()


def test_emit_without_plot(tmp_path):
    from wsgd.experiments import emit_results
    res = [run_sweep(CaseSpec(case_id=2, **SMALL))]
    paths = emit_results(res, tmp_path, write_plot=False)
    assert sorted(p.name for p in paths) == ["curves.csv", "iters.csv"]
