"""Log-log least-squares fits of scaling tables."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import stats


@dataclass(frozen=True)
class ScalingFit:
    slope: float
    intercept: float
    stderr: float
    ci95: tuple[float, float]
    max_residual: float
    n: int


def _rows(table):
    if isinstance(table, (str, Path)):
        text = Path(table).read_text() if Path(str(table)).is_file() else str(table)
        lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        return list(csv.DictReader(io.StringIO("\n".join(lines))))
    return list(table)


def _match(cell, v) -> bool:
    if cell is None:
        return False
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        try:
            return math.isclose(float(cell), float(v), rel_tol=1e-9, abs_tol=1e-12)
        except ValueError:
            return False
    return str(cell) == str(v)


def fit_loglog(x, y) -> ScalingFit:
    """Least-squares slope of ``log y`` against ``log x``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size != y.size:
        raise ValueError("x and y differ in length")
    if x.size < 4:
        raise ValueError(f"need at least 4 points, got {x.size}")
    if np.any(x <= 0) or np.any(y <= 0):
        raise ValueError("log-log fit needs positive values")
    lx, ly = np.log(x), np.log(y)
    if np.ptp(lx) == 0:
        raise ValueError("x values must not all coincide")
    r = stats.linregress(lx, ly)
    resid = ly - (r.intercept + r.slope * lx)
    se = float(r.stderr)
    half = float(stats.t.ppf(0.975, x.size - 2)) * se if x.size > 2 else math.inf
    return ScalingFit(float(r.slope), float(r.intercept), se, (float(r.slope - half), float(r.slope + half)),
                      float(np.max(np.abs(resid))), int(x.size))


def fit_scaling(table, x: str, y: str, where: dict | None = None) -> ScalingFit:
    """Fit ``log y ~ slope * log x`` over the rows of a CSV table (path, text or dict rows).

    ``where`` keeps only rows whose columns match the given values (numbers
    compare to 1e-9 relative, anything else as strings).
    """
    rows = _rows(table)
    if where:
        rows = [r for r in rows if all(_match(r.get(k), v) for k, v in where.items())]
    try:
        xs = [float(r[x]) for r in rows]
        ys = [float(r[y]) for r in rows]
    except KeyError as e:
        raise ValueError(f"column {e.args[0]!r} not in table") from None
    return fit_loglog(xs, ys)
