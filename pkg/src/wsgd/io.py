"""File formats: matrix/vector inputs, trace CSVs, sweep CSVs, and the
plot script.

Matrices load from Matrix Market files (sniffed by banner) or CSV with
an optional header row; vectors additionally accept one value per line.
All floats are written with 17 significant digits so parsing an emitted
file reproduces the exact doubles.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np
import scipy.io

CURVES_HEADER = ["case", "lambda", "iteration", "mean_error_sq"]
ITERS_HEADER = ["case", "lambda", "mean_iters_to_eps", "censored"]
RECORD_HEADER = ["iteration", "error_sq"]
BOUND_HEADER = ["iteration", "bound"]


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def _is_matrix_market(path: Path) -> bool:
    with open(path, "rb") as fh:
        return fh.read(14) == b"%%MatrixMarket"


def _has_header(path: Path) -> bool:
    with open(path, newline="") as fh:
        first = fh.readline()
    for tok in first.strip().split(","):
        try:
            float(tok)
        except ValueError:
            return True
    return False


def load_matrix(path) -> np.ndarray:
    """Dense matrix from a Matrix Market or CSV file."""
    p = Path(path)
    if _is_matrix_market(p):
        m = scipy.io.mmread(str(p))
        if hasattr(m, "toarray"):
            m = m.toarray()
        return np.asarray(m, dtype=np.float64)
    skip = 1 if _has_header(p) else 0
    return np.loadtxt(p, delimiter=",", skiprows=skip, ndmin=2, dtype=np.float64)


def load_vector(path) -> np.ndarray:
    """Vector from a Matrix Market file, a CSV row/column, or one value
    per line."""
    return load_matrix(path).ravel()


def _read_csv(path, expected_header: list[str]) -> list[list[str]]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != expected_header:
            raise ValueError(
                f"{path}: expected header {','.join(expected_header)!r}, "
                f"got {header!r}"
            )
        return [row for row in reader if row]


def write_run_record(record, path) -> None:
    """Trace CSV: one checkpoint per line, iterations increasing."""
    errors = record.errors_sq if hasattr(record, "errors_sq") else dict(record)
    with open(path, "w", newline="") as fh:
        fh.write(",".join(RECORD_HEADER) + "\n")
        for k in sorted(errors):
            fh.write(f"{int(k)},{fmt(errors[k])}\n")


def read_run_record(path) -> dict[int, float]:
    rows = _read_csv(path, RECORD_HEADER)
    return {int(r[0]): float(r[1]) for r in rows}


def write_curves(results, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(",".join(CURVES_HEADER) + "\n")
        for res in results:
            for li, lam in enumerate(res.lambda_grid):
                for ci, k in enumerate(res.checkpoints):
                    fh.write(
                        f"{res.case_id},{fmt(lam)},{int(k)},"
                        f"{fmt(res.mean_errors_sq[li, ci])}\n"
                    )


def write_iters(results, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(",".join(ITERS_HEADER) + "\n")
        for res in results:
            for li, lam in enumerate(res.lambda_grid):
                fh.write(
                    f"{res.case_id},{fmt(lam)},{fmt(res.mean_iters_to_eps[li])},"
                    f"{int(res.censored[li])}\n"
                )


def read_sweeps(curves_path, iters_path):
    """Rebuild sweep results from the two emitted CSVs (exact floats)."""
    from .experiments import SweepResult

    curve_rows = _read_csv(curves_path, CURVES_HEADER)
    iter_rows = _read_csv(iters_path, ITERS_HEADER)

    # group curve rows by case, preserving lambda order of appearance
    cases: dict[int, dict[float, list[tuple[int, float]]]] = {}
    for case_s, lam_s, it_s, err_s in curve_rows:
        by_lam = cases.setdefault(int(case_s), {})
        by_lam.setdefault(float(lam_s), []).append((int(it_s), float(err_s)))

    iters: dict[int, dict[float, tuple[float, bool]]] = {}
    for case_s, lam_s, mean_s, cens_s in iter_rows:
        iters.setdefault(int(case_s), {})[float(lam_s)] = (
            float(mean_s), bool(int(cens_s))
        )

    results = []
    for case_id, by_lam in cases.items():
        grid = tuple(by_lam.keys())
        first = next(iter(by_lam.values()))
        ckpts = np.array([it for it, _ in first], dtype=np.int64)
        errs = np.array([[e for _, e in by_lam[lam]] for lam in grid])
        case_iters = iters.get(case_id, {})
        mean_iters = np.array([case_iters[lam][0] for lam in grid])
        censored = np.array([case_iters[lam][1] for lam in grid], dtype=bool)
        results.append(SweepResult(
            case_id=case_id, lambda_grid=grid, checkpoints=ckpts,
            mean_errors_sq=errs, mean_iters_to_eps=mean_iters,
            censored=censored,
        ))
    return results


def write_bound_curve(iterations, values, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(",".join(BOUND_HEADER) + "\n")
        for k, v in zip(iterations, values):
            fh.write(f"{int(k)},{fmt(v)}\n")


PLOT_SCRIPT = """\
# Mean squared error per case and lambda, log-scale vertical axis.
# Run from the directory holding curves.csv:  gnuplot plot.gp
set datafile separator ","
set terminal dumb size 120,40
set logscale y
set xlabel "iteration"
set ylabel "mean squared error"
set key outside
plot for [c=1:5] for [l=0:10] "curves.csv" \\
    using 3:(($1 == c && abs($2 - l/10.0) < 1e-9) ? $4 : 1/0) \\
    with lines title sprintf("case %d lambda %.1f", c, l/10.0)
"""


def write_plot_script(path) -> None:
    with open(path, "w") as fh:
        fh.write(PLOT_SCRIPT)
