"""Certified upper bounds and exact structural formulas for multiplier quasi-norms."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..linalg import PExponent, as_matrix, lq_aggregate, schatten_norm, sharp_aggregate
from ..quadrature import lp_norm
from ..symbols import AnalyticSymbol, TrigPolynomial, as_symbol


def mult_upper_hadamard(A, p) -> float:
    """``||A||_{S_{p#}}``; the operator norm when ``p = 1``."""
    pe = PExponent.of(p)
    A = as_matrix(A)
    if not np.any(A):
        return 0.0
    return schatten_norm(A, pe.p_sharp).value


def mult_upper_hankel_poly(psi, p, trig: bool | None = None, oversample: int = 16) -> float:
    """``(2m)**(1/p - 1) ||psi||_p`` for an analytic polynomial of degree ``m - 1``.

    For a trigonometric polynomial with ``|k| <= m - 1`` the factor is ``4m``.
    ``trig`` defaults to whether ``psi`` has negative frequencies.
    """
    pe = PExponent.of(p)
    f = as_symbol(psi).trimmed()
    if f.is_zero():
        return 0.0
    if trig is None:
        trig = f.lo < 0
    if trig:
        m = f.d + 1
        factor = 4 * m
    else:
        if f.lo < 0:
            raise ValueError("analytic bound needs a symbol without negative frequencies")
        m = f.hi + 1
        factor = 2 * m
    return factor ** (1.0 / pe.p - 1.0) * lp_norm(f, pe.p, oversample)


def mult_exact_row(A) -> float | None:
    """Exact value ``max |a_jk|`` for a single row or column, else ``None``."""
    A = as_matrix(A)
    if min(A.shape) == 1:
        return float(np.abs(A).max())
    return None


def hankel_symbol_of(A, tol: float = 0.0) -> AnalyticSymbol | None:
    """The symbol ``psi`` with ``A[j, k] = psi^(j + k)`` if ``A`` is a Hankel window."""
    A = as_matrix(A)
    r, c = A.shape
    coeffs = np.concatenate([A[:, 0], A[-1, 1:]])
    idx = np.add.outer(np.arange(r), np.arange(c))
    if np.max(np.abs(A - coeffs[idx])) > tol * max(1.0, np.abs(A).max()):
        return None
    return AnalyticSymbol(coeffs)


def toeplitz_symbol_of(A, tol: float = 0.0) -> TrigPolynomial | None:
    """The symbol ``t`` with ``A[j, k] = t_{j-k}`` if ``A`` is a Toeplitz window."""
    A = as_matrix(A)
    r, c = A.shape
    # index j-k runs from -(c-1) to r-1
    coeffs = np.concatenate([A[0, :0:-1], A[:, 0]])
    idx = np.subtract.outer(np.arange(r), np.arange(c)) + (c - 1)
    if np.max(np.abs(A - coeffs[idx])) > tol * max(1.0, np.abs(A).max()):
        return None
    return TrigPolynomial(coeffs, -(c - 1))


def mult_upper_window(A, p, oversample: int = 16) -> float | None:
    """Interpolation bound for a Hankel or Toeplitz window; ``None`` otherwise.

    Entry ``(j, k)`` depends only on ``s = j + k`` (Hankel) or ``s = j - k``
    (Toeplitz, after reversing the column order), with ``s`` in a range of
    length ``L = rows + cols - 1``. Sampling the symbol restricted to that
    range at ``L`` roots of unity and averaging over rotations gives
    ``||A||_{M_p} <= L**(1/p - 1) ||f||_p``.
    """
    pe = PExponent.of(p)
    A = as_matrix(A)
    L = A.shape[0] + A.shape[1] - 1
    f = hankel_symbol_of(A)
    if f is None:
        f = toeplitz_symbol_of(A)
    if f is None:
        return None
    if f.is_zero():
        return 0.0
    return L ** (1.0 / pe.p - 1.0) * lp_norm(f, pe.p, oversample)


def block_diagonal_norm(values: Sequence[float], p) -> float:
    """``(sum v_k**p#)**(1/p#)``, the max at ``p = 1``."""
    v = [float(getattr(x, "lower", x)) for x in values]
    if any(x < 0 for x in v):
        raise ValueError("block values must be nonnegative")
    return sharp_aggregate(v, p)


def strip_aggregate(values: Sequence[float], p) -> float:
    """``(sum v_l**p_flat)**(1/p_flat)`` of per-strip upper bounds."""
    return lq_aggregate([float(v) for v in values], PExponent.of(p).p_flat)


def _check_cuts(cuts, n):
    cuts = [int(c) for c in cuts]
    if not cuts or cuts[0] != 0 or cuts[-1] != n or any(b <= a for a, b in zip(cuts, cuts[1:])):
        raise ValueError(f"strip cuts must increase strictly from 0 to {n} without overlap, got {cuts}")
    return cuts


def strip_upper_bound(A, row_cuts, per_strip: Sequence[float] | None, p) -> float:
    """Row-strip bound; strip values default to the best available certificate per strip."""
    A = as_matrix(A)
    cuts = _check_cuts(row_cuts, A.shape[0])
    strips = [A[a:b] for a, b in zip(cuts, cuts[1:])]
    if per_strip is None:
        per_strip = [strip_certificate(S, p) for S in strips]
    elif len(per_strip) != len(strips):
        raise ValueError("one value per strip is required")
    return strip_aggregate(per_strip, p)


def strip_certificate(S, p) -> float:
    """Upper bound for one strip: exact for a single row or column, else ``S_{p#}``."""
    ex = mult_exact_row(S)
    return ex if ex is not None else mult_upper_hadamard(S, p)


def mult_upper_strips(A, p, row_cuts=None, col_cuts=None) -> float:
    """Best of row-strip and column-strip bounds (singleton strips by default)."""
    A = as_matrix(A)
    r, c = A.shape
    rc = list(range(r + 1)) if row_cuts is None else row_cuts
    cc = list(range(c + 1)) if col_cuts is None else col_cuts
    rows = strip_upper_bound(A, rc, None, p)
    cols = strip_upper_bound(A.T, cc, None, p)
    return min(rows, cols)


def corner_cut(A, m: int, n: int) -> np.ndarray:
    """Zero the entries with row index ``< m`` or column index ``< n``."""
    A = as_matrix(A)
    if not (0 <= m <= A.shape[0] and 0 <= n <= A.shape[1]):
        raise ValueError("corner indices outside the matrix")
    B = A.copy()
    B[:m, :] = 0
    B[:, :n] = 0
    return B


def q_corner(m: int, size: int | None = None) -> np.ndarray:
    """All-ones ``(m+1) x (m+1)`` block, embedded in a ``size x size`` zero matrix."""
    size = m + 1 if size is None else size
    if m < 0 or size < m + 1:
        raise ValueError("need 0 <= m < size")
    Q = np.zeros((size, size), dtype=complex)
    Q[: m + 1, : m + 1] = 1.0
    return Q
