"""Exercise every subcommand through main(argv)."""

import numpy as np
import pytest
from scipy.io import mmwrite

from wsgd.cli import main
from wsgd.io import read_run_record
from wsgd.problem import from_least_squares, stats
from wsgd.sgd import iteration_bound, partial_bias_step_size


def _write_system(tmp_path, a, b, prefix="sys"):
    mp = tmp_path / f"{prefix}_a.csv"
    rp = tmp_path / f"{prefix}_b.csv"
    np.savetxt(mp, a, delimiter=",")
    np.savetxt(rp, b, delimiter=",")
    return str(mp), str(rp)


def _noisy(tmp_path, seed=0, n=40, d=4):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(n, d))
    b = a @ rng.normal(size=d) + 0.3 * rng.normal(size=n)
    paths = _write_system(tmp_path, a, b)
    return a, b, paths


def _grab(out, key):
    for line in out.splitlines():
        if line.startswith(key + ":"):
            return line.split(":", 1)[1].strip()
    raise AssertionError(f"{key!r} not printed:\n{out}")


# -------------------------------------------------------------------- solve

def test_solve_sgd_prints_derived_step(tmp_path, capsys):
    a, b, (mp, rp) = _noisy(tmp_path)
    code = main(["solve", mp, rp, "--epsilon", "0.05", "--lambda", "0.3",
                 "--max-iters", "200"])
    out = capsys.readouterr().out
    assert code == 0
    st = stats(from_least_squares(a, b))
    want = partial_bias_step_size(st.mu, 0.05, 0.3, st.l_bar, st.sup_l,
                                  st.inf_l, st.sigma_sq)
    assert float(_grab(out, "step size")) == want
    assert int(_grab(out, "iterations")) == 200
    assert float(_grab(out, "error to least-squares solution")) >= 0.0


def test_solve_kaczmarz_identity_exact(tmp_path, capsys):
    mp, rp = _write_system(tmp_path, np.eye(3), np.array([1.0, 2.0, 3.0]))
    code = main(["solve", mp, rp, "--method", "kaczmarz-weighted",
                 "--c", "1.0", "--max-iters", "200"])
    cap = capsys.readouterr()
    assert code == 0
    # full projections on an identity system pin coordinates exactly
    assert float(_grab(cap.out, "error to least-squares solution")) == 0.0
    assert float(_grab(cap.out, "error to norm-weighted solution")) == 0.0
    assert "does not apply" in cap.err


def test_solve_kaczmarz_rejects_sgd_flags(tmp_path, capsys):
    _, _, (mp, rp) = _noisy(tmp_path, seed=1)
    code = main(["solve", mp, rp, "--method", "kaczmarz-uniform",
                 "--epsilon", "0.1"])
    cap = capsys.readouterr()
    assert code == 2
    assert "error:" in cap.err


def test_solve_trace_roundtrip(tmp_path, capsys):
    _, _, (mp, rp) = _noisy(tmp_path, seed=2)
    trace = tmp_path / "trace.csv"
    code = main(["solve", mp, rp, "--step-size", "0.001",
                 "--max-iters", "64", "--out", str(trace)])
    assert code == 0
    assert "trace written" in capsys.readouterr().out
    errs = read_run_record(trace)
    assert 0 in errs and 64 in errs
    assert all(v >= 0 for v in errs.values())


def test_missing_rhs_is_input_error(tmp_path, capsys):
    _, _, (mp, _) = _noisy(tmp_path, seed=3)
    code = main(["solve", mp, str(tmp_path / "nope.csv")])
    cap = capsys.readouterr()
    assert code == 2
    assert "nope.csv" in cap.err


def test_zero_matrix_is_degenerate(tmp_path, capsys):
    mp, rp = _write_system(tmp_path, np.zeros((4, 3)), np.zeros(4))
    code = main(["solve", mp, rp])
    assert code == 3
    assert "error:" in capsys.readouterr().err


# -------------------------------------------------------------------- stats

def test_stats_identity(tmp_path, capsys):
    mp, rp = _write_system(tmp_path, np.eye(3), np.array([1.0, 2.0, 3.0]))
    code = main(["stats", mp, rp])
    out = capsys.readouterr().out
    assert code == 0
    assert _grab(out, "n") == "3"
    assert _grab(out, "d") == "3"
    assert _grab(out, "inf L") == "3"
    assert _grab(out, "sup L") == "3"
    assert _grab(out, "mu") == "1"
    assert _grab(out, "sigma_sq") == "0"
    assert _grab(out, "cond") == "3"
    assert _grab(out, "cond normalized rows") == "3"
    assert float(_grab(out, "eps0 (from zero start)")) == 14.0
    want = iteration_bound("uniform", mu=1.0, epsilon=0.1, eps0=14.0,
                           sup_l=3.0, sigma_sq=0.0)
    assert int(_grab(out, "iterations uniform")) == want
    assert "iterations mean-square" in out


def test_stats_matrix_market_input(tmp_path, capsys):
    mp = tmp_path / "m.mtx"
    mmwrite(mp, np.eye(4))
    rp = tmp_path / "b.csv"
    np.savetxt(rp, np.zeros(4), delimiter=",")
    code = main(["stats", str(mp), str(rp)])
    out = capsys.readouterr().out
    assert code == 0
    assert _grab(out, "cond") == "4"
    assert "iteration bounds skipped" in out


# ------------------------------------------------------------------- bounds

def test_bounds_scalar_mode(capsys):
    code = main(["bounds", "--gamma", "0.05", "--mu", "1", "--sup-l", "10",
                 "--sigma-sq", "2", "--eps0", "4", "--k-max", "3"])
    out = capsys.readouterr().out
    assert code == 0
    assert float(_grab(out, "rate")) == pytest.approx(0.95, rel=1e-15)
    assert float(_grab(out, "horizon")) == pytest.approx(0.2, rel=1e-15)
    lines = out.splitlines()
    start = lines.index("iteration,bound")
    rows = lines[start + 1:start + 5]
    assert rows[0].startswith("0,") and float(rows[0].split(",")[1]) == \
        pytest.approx(4.2, rel=1e-15)
    assert len(rows) == 4


def test_bounds_scalar_mode_requires_constants(capsys):
    code = main(["bounds", "--gamma", "0.05", "--sup-l", "10", "--eps0", "1"])
    cap = capsys.readouterr()
    assert code == 2
    assert "--mu is required" in cap.err


def test_bounds_rejects_unstable_step(capsys):
    code = main(["bounds", "--gamma", "0.2", "--mu", "1", "--sup-l", "10",
                 "--eps0", "1"])
    cap = capsys.readouterr()
    assert code == 2
    assert "below" in cap.err


def test_bounds_matrix_mode_to_file(tmp_path, capsys):
    mp, rp = _write_system(tmp_path, np.eye(3), np.array([1.0, 2.0, 3.0]))
    out_csv = tmp_path / "curve.csv"
    code = main(["bounds", "--matrix", mp, "--rhs", rp, "--variant", "uniform",
                 "--c", "0.5", "--k-max", "10", "--out", str(out_csv)])
    out = capsys.readouterr().out
    assert code == 0
    # identity rows are unit norm: normalized conditioning is n/1 = 3
    assert float(_grab(out, "rate")) == pytest.approx(1 - 0.5 / 3, rel=1e-12)
    assert _grab(out, "horizon") == "0"
    assert float(_grab(out, "eps0")) == 14.0
    lines = out_csv.read_text().splitlines()
    assert lines[0] == "iteration,bound"
    assert len(lines) == 12


def test_bounds_matrix_mode_requires_rhs(tmp_path, capsys):
    mp, _ = _write_system(tmp_path, np.eye(3), np.zeros(3))
    code = main(["bounds", "--matrix", mp])
    assert code == 2
    assert "--rhs" in capsys.readouterr().err


# -------------------------------------------------- experiment and tightness

def test_experiment_smoke(tmp_path, capsys):
    out_dir = tmp_path / "res"
    code = main(["experiment", "--case", "2", "--trials", "2",
                 "--max-iters", "300", "--lambda-grid", "0,1",
                 "--seed", "5", "--out-dir", str(out_dir)])
    out = capsys.readouterr().out
    assert code == 0
    assert "running case 2" in out
    for name in ("curves.csv", "iters.csv", "plot.gp"):
        assert (out_dir / name).exists()
        assert f"wrote {out_dir / name}" in out


def test_tightness_command(capsys):
    code = main(["tightness", "--n-flat", "1", "--trials", "2000"])
    out = capsys.readouterr().out
    assert code == 0
    assert _grab(out, "components") == "2"
    assert 1.8 <= float(_grab(out, "uniform mean first hit")) <= 2.2
    assert 1.8 <= float(_grab(out, "weighted mean first hit")) <= 2.2
