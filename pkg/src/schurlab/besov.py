"""Besov norms through dyadic blocks, lacunary classification and the
finite-difference characterizations."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cutoffs import V_PARTITION, SmoothCutoffSpec
from .lacunary import GapProfile, auto_cover, lacunary_cover
from .linalg import PExponent, lq_aggregate
from .quadrature import lp_norm, lp_norm_batch
from .symbols import as_symbol, dyadic_block, dyadic_range


@dataclass(frozen=True)
class BesovParams:
    s: float
    p: float
    q: float = math.inf

    def __post_init__(self):
        if not self.p > 0:
            raise ValueError("p must be positive")
        if not self.q > 0:
            raise ValueError("q must be positive (math.inf for sup)")


@dataclass(frozen=True)
class BlockRow:
    n: int
    block_lp: float
    weighted: float


def besov_blocks(psi, s: float, p: float, v: SmoothCutoffSpec = V_PARTITION, oversample: int = 8) -> list[BlockRow]:
    """Per-block table ``(n, ||psi * V_n||_p, 2**(|n| s) ||psi * V_n||_p)``."""
    rows = []
    for n in dyadic_range(psi):
        b = dyadic_block(psi, n, v)
        val = lp_norm(b, p, oversample) if not b.is_zero() else 0.0
        rows.append(BlockRow(n, val, 2.0 ** (abs(n) * s) * val))
    return rows


def besov_norm(psi, params: BesovParams, v: SmoothCutoffSpec = V_PARTITION, oversample: int = 8) -> float:
    """``(sum_n (2**(n s) ||psi * V_n||_p)**q)**(1/q)``; a supremum when ``q`` is infinite."""
    rows = besov_blocks(psi, params.s, params.p, v, oversample)
    return lq_aggregate([r.weighted for r in rows], params.q)


# -- lacunary symbols -----------------------------------------------------------

@dataclass(frozen=True)
class LacunarySymbolSpec:
    """``psi = sum_j lam_j z**n_j`` with strictly increasing positive ``n_j``."""

    frequencies: tuple
    amplitudes: tuple

    def __post_init__(self):
        n = tuple(int(v) for v in self.frequencies)
        lam = tuple(complex(v) for v in self.amplitudes)
        if len(n) != len(lam) or not n:
            raise ValueError("need equally many frequencies and amplitudes")
        if n[0] < 1 or any(b <= a for a, b in zip(n, n[1:])):
            raise ValueError("frequencies must be strictly increasing positive integers")
        object.__setattr__(self, "frequencies", n)
        object.__setattr__(self, "amplitudes", lam)

    def symbol(self, upto: int | None = None):
        """The analytic polynomial of the first ``upto`` terms."""
        from .symbols import AnalyticSymbol

        k = len(self.frequencies) if upto is None else upto
        c = np.zeros(self.frequencies[k - 1] + 1, dtype=complex)
        for n, lam in zip(self.frequencies[:k], self.amplitudes[:k]):
            c[n] = lam
        return AnalyticSymbol(c)


@dataclass(frozen=True)
class MembershipResult:
    in_Mp: bool
    score: float
    rho: float
    N: int
    profile: GapProfile


def lacunary_score(spec: LacunarySymbolSpec, p: PExponent | float) -> float:
    """``||{n_j**(1/p#) |lam_j|}||_{l^{p#}}`` (``sup |lam_j|`` when ``p = 1``)."""
    pe = PExponent.of(p)
    n = np.asarray(spec.frequencies, dtype=float)
    lam = np.abs(np.asarray(spec.amplitudes))
    if pe.sharp_is_infinite:
        return float(lam.max())
    return lq_aggregate(n ** (1.0 / pe.p_sharp) * lam, pe.p_sharp)


def lacunary_membership(
    spec: LacunarySymbolSpec,
    p: PExponent | float,
    rho: float | None = None,
    N: int | None = None,
    tail_decay: float | None = None,
) -> MembershipResult:
    """Classify a lacunary symbol by its weighted ``l^{p#}`` score.

    Parameters
    ----------
    rho, N : optional
        Lacunarity data; searched automatically when omitted.
    tail_decay : float, optional
        If given, the terms ``n_j**(1/p#) |lam_j|`` are assumed to continue
        beyond the input like ``j**(-tail_decay)``; membership then requires
        ``tail_decay * p# > 1`` (or ``tail_decay >= 0`` at ``p = 1``). Without
        a tail model a finite input is always a member.
    """
    pe = PExponent.of(p)
    if rho is None or N is None:
        profile, rho, N = auto_cover(spec.frequencies)
    else:
        profile = lacunary_cover(spec.frequencies, rho, N)
    score = lacunary_score(spec, pe)
    if tail_decay is None:
        member = math.isfinite(score)
    elif pe.sharp_is_infinite:
        member = tail_decay >= 0
    else:
        member = tail_decay * pe.p_sharp > 1
    return MembershipResult(bool(member), score, float(rho), int(N), profile)


def gap_necessary_score(psi, profile: GapProfile, p: PExponent | float, v: SmoothCutoffSpec = V_PARTITION) -> float:
    """``||psi||`` in ``B^{1/p#}_{p, p#}`` for a symbol supported in the profile's intervals."""
    pe = PExponent.of(p)
    f = as_symbol(psi)
    idx = f.support()
    bad = idx[~profile.contains(idx)] if idx.size else idx
    if bad.size:
        raise ValueError(f"coefficients outside the gap profile at indices {bad[:20].tolist()}")
    s = 0.0 if pe.sharp_is_infinite else 1.0 / pe.p_sharp
    return besov_norm(f, BesovParams(s, pe.p, pe.p_sharp), v)


# -- finite differences ---------------------------------------------------------

@dataclass(frozen=True)
class DifferenceSeminorm:
    value: float
    rotation_sup: float
    radial_sup: float
    grid: int
    argmax_rotation: int


def _rotation_sup(coeffs, lo, s, p, grid, chunk=512):
    k = np.arange(lo, lo + coeffs.size)
    best, arg = 0.0, 0
    for start in range(1, grid, chunk):
        js = np.arange(start, min(grid, start + chunk))
        ang = 2 * np.pi * js / grid
        diff = coeffs[None, :] * (np.exp(1j * np.outer(ang, k)) - 1.0)
        norms = lp_norm_batch(diff, p)
        ratio = norms / np.abs(np.exp(1j * ang) - 1.0) ** s
        i = int(np.argmax(ratio))
        if ratio[i] > best:
            best, arg = float(ratio[i]), int(js[i])
    return best, arg


def finite_difference_besov(psi, s: float, p: float, grid: int = 4096, radial_levels: int | None = None) -> DifferenceSeminorm:
    """Sup of rotation differences ``||f(zeta .) - f||_p / |zeta - 1|**s`` over a
    uniform grid of rotations, and of radial differences ``||f - f_r||_p / (1-r)**s``
    over ``r = 1 - 2**-k``; the value is the larger of the two.
    """
    if not 0 < s < 1:
        raise ValueError("smoothness must lie in (0, 1)")
    if grid < 64:
        raise ValueError("grid must be at least 64")
    f = as_symbol(psi).trimmed()
    if f.is_zero():
        return DifferenceSeminorm(0.0, 0.0, 0.0, grid, 0)
    c = f.coeffs
    rot, arg = _rotation_sup(c, f.lo, s, p, grid)
    K = radial_levels or max(12, int(max(abs(f.lo), abs(f.hi))).bit_length() + 6)
    k = np.abs(np.arange(f.lo, f.hi + 1))
    rs = 1.0 - 2.0 ** -np.arange(1, K + 1)
    diff = c[None, :] * (1.0 - rs[:, None] ** k[None, :])
    rad = float(np.max(lp_norm_batch(diff, p) / (1.0 - rs) ** s))
    return DifferenceSeminorm(max(rot, rad), rot, rad, grid, arg)
