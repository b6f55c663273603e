"""L^p quasi-norms of trigonometric polynomials by FFT Riemann means."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

MAX_DOUBLINGS = 4
REL_TOL = 1e-6


class QuadratureWarning(RuntimeWarning):
    pass


def _core(f) -> np.ndarray:
    """Coefficients between the first and last nonzero entry.

    Shifting the index range multiplies values by a unimodular factor, so
    the modulus on the circle depends only on this core.
    """
    from .symbols import as_symbol

    c = as_symbol(f).coeffs
    nz = np.flatnonzero(c)
    if nz.size == 0:
        return np.zeros(1, dtype=complex)
    return c[nz[0] : nz[-1] + 1]


def sample_circle(f, M: int) -> np.ndarray:
    """Values of ``f`` at ``exp(2 pi i k / M)`` up to a common unimodular factor.

    Requires ``M`` at least the span of the core coefficients (no aliasing).
    """
    c = _core(f)
    if M < c.size:
        raise ValueError(f"grid of {M} points aliases a span of {c.size}")
    return np.fft.ifft(c, n=M) * M


def _mean_power(vals_abs: np.ndarray, p: float, axis=-1) -> np.ndarray:
    if math.isinf(p):
        return vals_abs.max(axis=axis)
    top = vals_abs.max(axis=axis, keepdims=True)
    safe = np.where(top > 0, top, 1.0)
    m = np.mean((vals_abs / safe) ** p, axis=axis)
    return np.squeeze(safe, axis=axis) * m ** (1.0 / p)


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    points: int
    converged: bool
    previous: float


def lp_quadrature(f, p: float, oversample: int = 8) -> QuadratureResult:
    """``((1/M) sum_k |f(e^{2 pi i k/M})|^p)^(1/p)`` with grid doubling.

    Starts from ``M = oversample * span`` and doubles until two successive
    values agree to ``REL_TOL`` relative, at most ``MAX_DOUBLINGS`` times.
    ``p = inf`` gives the grid maximum.
    """
    if oversample < 4:
        raise ValueError("oversample must be at least 4")
    if not p > 0:
        raise ValueError("p must be positive")
    c = _core(f)
    if not np.any(c):
        return QuadratureResult(0.0, 0, True, 0.0)
    if c.size == 1:
        v = float(abs(c[0]))
        return QuadratureResult(v, 1, True, v)
    M = oversample * c.size
    prev = float(_mean_power(np.abs(np.fft.ifft(c, n=M) * M), p))
    for _ in range(MAX_DOUBLINGS):
        M *= 2
        cur = float(_mean_power(np.abs(np.fft.ifft(c, n=M) * M), p))
        if abs(cur - prev) <= REL_TOL * abs(cur):
            return QuadratureResult(cur, M, True, prev)
        prev, last = cur, prev
    warnings.warn(
        f"L^{p:g} quadrature not converged at M={M}: last values {last:.12g}, {prev:.12g}",
        QuadratureWarning,
        stacklevel=2,
    )
    return QuadratureResult(prev, M, False, last)


def lp_norm(f, p: float, oversample: int = 8) -> float:
    """L^p quasi-norm of ``f`` on the circle with respect to normalized measure."""
    return lp_quadrature(f, p, oversample).value


def lp_norm_batch(coeffs: np.ndarray, p: float, oversample: int = 8) -> np.ndarray:
    """Row-wise L^p norms of a stack of coefficient windows sharing one index range.

    Uses a fixed grid of ``oversample * span`` points and one doubling check;
    intended for many small polynomials, e.g. families of differences.
    """
    C = np.atleast_2d(np.asarray(coeffs, dtype=complex))
    span = C.shape[1]
    M = max(oversample, 4) * span
    a = _mean_power(np.abs(np.fft.ifft(C, n=M, axis=1) * M), p, axis=1)
    b = _mean_power(np.abs(np.fft.ifft(C, n=2 * M, axis=1) * 2 * M), p, axis=1)
    bad = np.abs(a - b) > 1e-4 * np.maximum(np.abs(b), 1e-300)
    if np.any(bad & (b > 1e-12 * np.max(b))):
        warnings.warn("batched quadrature changed by more than 1e-4 under doubling", QuadratureWarning, stacklevel=2)
    return b
