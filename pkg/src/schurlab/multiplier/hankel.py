"""Hankel-specific constructions: the root-of-unity decomposition, the
coefficient inequality, the strictly-lower part of lacunary Hankel matrices
and mollifier convergence tables."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..cutoffs import F_DEFAULT, SmoothCutoffSpec
from ..linalg import PExponent, as_matrix
from ..symbols import as_analytic


def hankel_split_decompose(psi, a, b, m: int | None = None) -> list[np.ndarray]:
    """Rank-one matrices ``B_d`` with ``mean_d B_d = Gamma_psi * outer(a, b)`` on the ``m x m`` window.

    With ``zeta_d = exp(2 pi i d / 2m)``, ``d = 0..2m-1``,

        B_d = psi(zeta_d) * outer(a * conj(zeta_d)**j, b * conj(zeta_d)**k).

    ``m`` defaults to ``deg(psi) + 1``; ``a`` and ``b`` must vanish at indices ``>= m``.
    """
    f = as_analytic(psi)
    m = f.degree + 1 if m is None else int(m)
    if m < f.degree + 1:
        raise ValueError(f"m={m} is smaller than deg(psi)+1={f.degree + 1}")
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    for name, v in (("a", a), ("b", b)):
        if v.size > m and np.any(v[m:]):
            raise ValueError(f"{name} has support outside [0, {m})")
    a = np.pad(a[:m], (0, max(0, m - a.size)))
    b = np.pad(b[:m], (0, max(0, m - b.size)))
    L = 2 * m
    d = np.arange(L)
    zeta = np.exp(2j * np.pi * d / L)
    vals = f.evaluate(2 * np.pi * d / L)
    j = np.arange(m)
    out = []
    for z, v in zip(zeta, vals):
        w = np.conj(z) ** j
        out.append(v * np.outer(a * w, b * w))
    return out


@dataclass(frozen=True)
class CoefficientCheck:
    lhs: float
    rhs: float
    ok: bool


def coefficient_bound_check(psi, n: int, m: int, mult_upper: float, p, tol: float = 1e-9) -> CoefficientCheck:
    """Compare ``|psi^(n)|`` with the weighted local energy bound.

    ``rhs = ((1/(m+1)) sum_{|j|<=m} (1 - |j|/(m+1)) |psi^(n+j)|**2)**((1-p)/(2-p))
    * mult_upper**(p/(2-p))``.
    """
    if not 0 <= m <= n:
        raise ValueError(f"need 0 <= m <= n, got m={m}, n={n}")
    pe = PExponent.of(p)
    f = as_analytic(psi)
    j = np.arange(-m, m + 1)
    c = np.abs(f.coefficient(n + j)) ** 2
    energy = float(np.sum((1 - np.abs(j) / (m + 1)) * c) / (m + 1))
    q = pe.p
    rhs = energy ** ((1 - q) / (2 - q)) * float(mult_upper) ** (q / (2 - q))
    lhs = abs(f.coefficient(n))
    return CoefficientCheck(lhs, rhs, bool(lhs <= rhs * (1 + tol) + 1e-300))


def lacunary_frequencies(psi) -> np.ndarray:
    """Support of ``psi``, validated to satisfy ``n_0 > 0`` and ``n_{l+1} >= 2 n_l``."""
    f = as_analytic(psi)
    n = f.support()
    if n.size == 0:
        return n
    if n[0] <= 0:
        raise ValueError("frequencies must start above 0")
    bad = np.flatnonzero(n[1:] < 2 * n[:-1])
    if bad.size:
        l = int(bad[0])
        raise ValueError(f"n[{l + 1}]={n[l + 1]} < 2*n[{l}]={2 * n[l]}")
    return n


def gamma_minus_upper(psi, p) -> float:
    """Entrywise ``l^{p#}`` norm of the strictly-lower Hankel part, a bound for its multiplier norm.

    Anti-diagonal ``j + k = n`` has ``ceil(n/2)`` entries with ``j > k``; the sup
    of the coefficients is returned at ``p = 1``.
    """
    pe = PExponent.of(p)
    f = as_analytic(psi)
    n = lacunary_frequencies(f)
    if n.size == 0:
        return 0.0
    lam = np.abs(f.coefficient(n))
    if pe.sharp_is_infinite:
        return float(lam.max())
    q = pe.p_sharp
    counts = (n + 1) // 2
    top = lam.max()
    return float(top * np.sum(counts * (lam / top) ** q) ** (1 / q))


@dataclass(frozen=True)
class MollifierRow:
    m: int
    lower: float
    upper: float
    max_entry: float


def mollified_difference(A, F: SmoothCutoffSpec, m: int) -> np.ndarray:
    """``A * Gamma_{F_(m)} - A``: entry ``(j, k)`` is ``a_jk (F((j+k)/m) - 1)``."""
    A = as_matrix(A)
    s = np.add.outer(np.arange(A.shape[0]), np.arange(A.shape[1]))
    return A * (F(s / m) - 1.0)


def mollifier_convergence(A, F: SmoothCutoffSpec = F_DEFAULT, m_list=(1, 2, 4, 8, 16, 32, 64), p=0.5,
                          restarts: int = 8, seed: int = 0) -> list[MollifierRow]:
    """Bracket ``||A * Gamma_{F_(m)} - A||_{M_p}`` for each ``m``."""
    from .estimate import estimate_multiplier

    if abs(float(F(0.0)) - 1.0) > 1e-15:
        raise ValueError("the cutoff must equal 1 at the origin")
    rows = []
    for m in m_list:
        D = mollified_difference(A, F, int(m))
        if not np.any(D):
            rows.append(MollifierRow(int(m), 0.0, 0.0, 0.0))
            continue
        est = estimate_multiplier(D, p, restarts=restarts, seed=seed)
        rows.append(MollifierRow(int(m), est.lower, est.upper, float(np.abs(D).max())))
    return rows

