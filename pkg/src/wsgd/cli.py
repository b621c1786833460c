"""Command-line interface.

Subcommands: solve (run a method on a linear system), stats (print
conditioning constants and iteration bounds), bounds (emit error-bound
curves), experiment (run the sweep suite), tightness (the two-law
first-hit demo).  Exit codes: 0 success, 2 usage or input error,
3 degenerate problem.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import experiments as exp_mod
from . import io as io_mod
from . import kaczmarz as kz_mod
from . import problem as problem_mod
from . import sgd as sgd_mod
from . import weights as weights_mod
from ._backend import backend_name
from .errors import DegenerateProblemError, ParameterError

KACZMARZ_METHODS = {
    "kaczmarz-weighted": "weighted",
    "kaczmarz-uniform": "uniform",
    "kaczmarz-hybrid": "hybrid",
}


def fmt(x: float) -> str:
    return io_mod.fmt(x)


def cmd_solve(args) -> int:
    a = io_mod.load_matrix(args.matrix)
    b = io_mod.load_vector(args.rhs)

    if args.method == "sgd":
        prob = problem_mod.from_least_squares(a, b)
        st = problem_mod.stats(prob)
        cfg = sgd_mod.SgdConfig(
            scheme=weights_mod.PartialBias(args.lam),
            step_size=args.step_size,
            epsilon=args.epsilon,
            max_iters=args.max_iters,
            grad_tol=args.delta,
            seed=args.seed,
        )
        rec = sgd_mod.run(prob, cfg, stats=st)
        for w in rec.warnings:
            print(f"warning: {w}", file=sys.stderr)
        if args.epsilon is not None:
            print(f"step size: {fmt(rec.gamma)}")
        final = rec.final_x
        record = rec
        x_plain = st.x_star
    else:
        if args.step_size is not None or args.epsilon is not None:
            raise ParameterError(
                "--step-size/--epsilon apply to --method sgd; use --c here"
            )
        variant = kz_mod.Variant(kind=KACZMARZ_METHODS[args.method], c=args.c)
        rec = kz_mod.run_kaczmarz(a, b, variant, args.max_iters, seed=args.seed)
        for w in rec.warnings:
            print(f"warning: {w}", file=sys.stderr)
        final = rec.final_x
        record = rec
        x_plain = problem_mod.stats(problem_mod.from_least_squares(a, b)).x_star

    x_weighted = problem_mod.weighted_solution(a, b)
    err_plain = float(np.sum((final - x_plain) ** 2))
    err_weighted = float(np.sum((final - x_weighted) ** 2))
    print(f"iterations: {record.iterations_run}")
    print(f"error to least-squares solution: {fmt(err_plain)}")
    print(f"error to norm-weighted solution: {fmt(err_weighted)}")
    if args.out:
        io_mod.write_run_record(record, args.out)
        print(f"trace written to {args.out}")
    return 0


def cmd_stats(args) -> int:
    a = io_mod.load_matrix(args.matrix)
    b = io_mod.load_vector(args.rhs)
    prob = problem_mod.from_least_squares(a, b)
    st = problem_mod.stats(prob)
    lip = st.lipschitz
    eps0 = float(st.x_star @ st.x_star)
    mean_sq_l = float(prob.source_probs @ (lip * lip))

    print(f"n: {prob.n}")
    print(f"d: {prob.d}")
    print(f"inf L: {fmt(st.inf_l)}")
    print(f"mean L: {fmt(st.l_bar)}")
    print(f"sup L: {fmt(st.sup_l)}")
    print(f"mu: {fmt(st.mu)}")
    print(f"sigma_sq: {fmt(st.sigma_sq)}")
    print(f"cond: {fmt(st.cond)}")
    print(f"cond normalized rows: {fmt(kz_mod.row_normalized_cond(a))}")
    print(f"eps0 (from zero start): {fmt(eps0)}")

    if eps0 == 0.0:
        print("iteration bounds skipped: start already at the solution")
        return 0
    kw = dict(mu=st.mu, epsilon=args.epsilon, eps0=eps0, sigma_sq=st.sigma_sq)
    print(f"iterations uniform: "
          f"{sgd_mod.iteration_bound('uniform', sup_l=st.sup_l, **kw)}")
    print(f"iterations half-bias: "
          f"{sgd_mod.iteration_bound('half_bias', l_bar=st.l_bar, **kw)}")
    print(f"iterations partial-bias (lambda={fmt(args.lam)}): "
          f"{sgd_mod.iteration_bound('partial_bias', lam=args.lam, l_bar=st.l_bar, sup_l=st.sup_l, inf_l=st.inf_l, **kw)}")
    print(f"iterations mean-square: "
          f"{sgd_mod.iteration_bound('mean_square', mean_sq_l=mean_sq_l, **kw)}")
    return 0


def cmd_bounds(args) -> int:
    if args.matrix is not None:
        if args.rhs is None:
            raise ParameterError("--rhs is required with --matrix")
        a = io_mod.load_matrix(args.matrix)
        b = io_mod.load_vector(args.rhs)
        variant = kz_mod.Variant(kind=args.variant, c=args.c)
        if args.eps0 is not None:
            eps0 = args.eps0
        elif variant.kind == "uniform":
            x_w = problem_mod.weighted_solution(a, b)
            eps0 = float(x_w @ x_w)
        else:
            st = problem_mod.stats(problem_mod.from_least_squares(a, b))
            eps0 = float(st.x_star @ st.x_star)
        curve = kz_mod.kaczmarz_bound(a, b, variant, eps0)
    else:
        for name in ("gamma", "mu", "sup_l", "eps0"):
            if getattr(args, name) is None:
                raise ParameterError(f"--{name.replace('_', '-')} is required "
                                     "without --matrix")
        curve = sgd_mod.error_bound_curve(args.gamma, args.mu, args.sup_l,
                                          args.sigma_sq, args.eps0)

    print(f"rate: {fmt(curve.rate)}")
    print(f"horizon: {fmt(curve.horizon)}")
    print(f"eps0: {fmt(curve.eps0)}")
    ks = np.arange(args.k_max + 1)
    values = curve.value(ks)
    if args.out:
        io_mod.write_bound_curve(ks, np.atleast_1d(values), args.out)
        print(f"curve written to {args.out}")
    else:
        print(",".join(io_mod.BOUND_HEADER))
        for k, v in zip(ks, np.atleast_1d(values)):
            print(f"{int(k)},{fmt(v)}")
    return 0


def cmd_experiment(args) -> int:
    cases = exp_mod.CASE_IDS if args.case == "all" else (int(args.case),)
    grid = tuple(float(tok) for tok in args.lambda_grid.split(","))
    results = []
    for case_id in cases:
        spec = exp_mod.CaseSpec(
            case_id=case_id, trials=args.trials, lambda_grid=grid,
            eps_target=args.epsilon, max_iters=args.max_iters,
            seed_base=args.seed,
        )
        print(f"running case {case_id} "
              f"({args.trials} trials, {len(grid)} lambdas)...", flush=True)
        results.append(exp_mod.run_sweep(spec))
    paths = exp_mod.emit_results(results, args.out_dir)
    for p in paths:
        print(f"wrote {p}")
    return 0


def cmd_tightness(args) -> int:
    res = exp_mod.tightness_demo(args.n_flat, args.trials, args.seed)
    print(f"components: {res.n_flat + 1}")
    print(f"uniform mean first hit: {fmt(res.uniform_mean)}")
    print(f"weighted mean first hit: {fmt(res.biased_mean)}")
    return 0


def _add_system_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("matrix", help="matrix file (Matrix Market or CSV)")
    p.add_argument("rhs", help="right-hand-side file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wsgd",
        description="Weighted SGD and randomized Kaczmarz solvers "
                    f"(backend: {backend_name()})",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("solve", help="solve a least-squares system")
    _add_system_args(p)
    p.add_argument("--method", default="sgd",
                   choices=["sgd"] + sorted(KACZMARZ_METHODS))
    p.add_argument("--lambda", dest="lam", type=float, default=0.5,
                   help="mixture parameter between uniform (1) and "
                        "smoothness-proportional (0) sampling")
    p.add_argument("--step-size", type=float, default=None)
    p.add_argument("--epsilon", type=float, default=None,
                   help="target error; derives the step size")
    p.add_argument("--c", type=float, default=0.5,
                   help="Kaczmarz relaxation factor")
    p.add_argument("--max-iters", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--delta", type=float, default=None,
                   help="stop when the full gradient norm falls to this")
    p.add_argument("--out", default=None, help="trace CSV path")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("stats", help="print conditioning constants and bounds")
    _add_system_args(p)
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--lambda", dest="lam", type=float, default=0.5)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("bounds", help="emit error-bound curves")
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--mu", type=float, default=None)
    p.add_argument("--sup-l", type=float, default=None)
    p.add_argument("--sigma-sq", type=float, default=0.0)
    p.add_argument("--eps0", type=float, default=None)
    p.add_argument("--k-max", type=int, default=100)
    p.add_argument("--matrix", default=None,
                   help="switch to Kaczmarz bounds for this system")
    p.add_argument("--rhs", default=None)
    p.add_argument("--variant", default="weighted",
                   choices=sorted(kz_mod.VARIANT_KINDS))
    p.add_argument("--c", type=float, default=0.5)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("experiment", help="run the sweep suite")
    p.add_argument("--case", default="all",
                   choices=[str(c) for c in exp_mod.CASE_IDS] + ["all"])
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--lambda-grid",
                   default=",".join(str(l) for l in exp_mod.DEFAULT_LAMBDA_GRID))
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--max-iters", type=int, default=50000)
    p.add_argument("--seed", type=int, default=exp_mod.DEFAULT_SEED_BASE)
    p.add_argument("--out-dir", default="results")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("tightness", help="first-hit demo: uniform vs weighted")
    p.add_argument("--n-flat", type=int, default=99,
                   help="number of flat components beside the steep one")
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_tightness)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DegenerateProblemError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
