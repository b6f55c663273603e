"""Gap profiles and covers of finite unions of Hadamard lacunary sequences."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class ClassificationError(ValueError):
    """A frequency sequence fails the lacunarity hypothesis."""


@dataclass(frozen=True)
class GapProfile:
    """Intervals ``[xi_k, eta_k)`` separated by multiplicative gaps.

    Invariants: ``xi_k < eta_k < xi_{k+1}``, ``xi_{k+1} / eta_k > d`` and
    ``eta_k / xi_k < D``.
    """

    xi: tuple
    eta: tuple
    d: float
    D: float

    def __post_init__(self):
        xi = tuple(int(v) for v in self.xi)
        eta = tuple(int(v) for v in self.eta)
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "eta", eta)
        if len(xi) != len(eta) or not xi:
            raise ValueError("xi and eta must be nonempty and of equal length")
        if not (self.d > 1 and self.D > 1):
            raise ValueError("gap constants must exceed 1")
        for k in range(len(xi)):
            if not (0 < xi[k] < eta[k]):
                raise ValueError(f"interval {k} is empty: [{xi[k]}, {eta[k]})")
            if eta[k] / xi[k] >= self.D:
                raise ValueError(f"interval {k} too long for D={self.D}")
            if k + 1 < len(xi):
                if not eta[k] < xi[k + 1] or xi[k + 1] / eta[k] <= self.d:
                    raise ValueError(f"gap after interval {k} too small for d={self.d}")

    def contains(self, j) -> np.ndarray:
        j = np.asarray(j)
        xi, eta = np.array(self.xi), np.array(self.eta)
        k = np.searchsorted(xi, j, side="right") - 1
        ok = k >= 0
        kk = np.clip(k, 0, None)
        return ok & (j < eta[kk])

    @classmethod
    def trivial(cls, n: int) -> "GapProfile":
        """A single interval ``[n, n+1)``."""
        return cls((n,), (n + 1,), 2.0, 1.0 + 1.0 / n + 1e-9)


def _check_increasing(n) -> np.ndarray:
    a = np.asarray(n, dtype=np.int64)
    if a.ndim != 1 or a.size == 0:
        raise ValueError("frequencies must be a nonempty 1-D sequence")
    if a[0] < 1 or np.any(np.diff(a) <= 0):
        raise ValueError("frequencies must be strictly increasing positive integers")
    return a


def lacunary_cover(n, rho: float, N: int) -> GapProfile:
    """Cover ``n`` by gap intervals, assuming it is a union of ``N`` sequences with ratio ``rho``.

    Among any ``N + 1`` consecutive ratios ``n_{j+1}/n_j`` one must exceed
    ``rho**(1/N)``; the intervals are cut at those ratios. The first interval
    starts at 1. Neighbouring intervals that would touch are merged.
    """
    a = _check_increasing(n)
    if rho <= 1 or N < 1:
        raise ValueError("need rho > 1 and N >= 1")
    thr = rho ** (1.0 / N)
    ratios = a[1:] / a[:-1]
    big = ratios > thr
    for j in range(0, max(0, ratios.size - N)):
        if not big[j : j + N + 1].any():
            raise ClassificationError(
                f"no ratio above rho^(1/N)={thr:.6g} among n[{j}..{j + N + 1}] = {a[j : j + N + 2].tolist()}"
            )
    xi, eta = [1], []
    for j in np.flatnonzero(big):
        eta.append(int(a[j]) + 1)
        xi.append(int(a[j + 1]))
    eta.append(int(a[-1]) + 1)
    # merge touching intervals
    mx, me = [xi[0]], [eta[0]]
    for x, e in zip(xi[1:], eta[1:]):
        if x <= me[-1]:
            me[-1] = e
        else:
            mx.append(x)
            me.append(e)
    gaps = [mx[k + 1] / me[k] for k in range(len(mx) - 1)]
    d = 1.0 + 0.999 * (min(gaps) - 1.0) if gaps else 2.0
    lens = [e / x for x, e in zip(mx, me)]
    D = 1.001 * max(lens)
    return GapProfile(tuple(mx), tuple(me), d, D)


def auto_cover(n, rhos=None, Ns=(1, 2, 3, 4)) -> tuple[GapProfile, float, int]:
    """Try ``N = 1..4`` and ``rho`` from 2 down to 1.1; return the first cover found."""
    rhos = rhos if rhos is not None else [2.0 - 0.1 * i for i in range(10)]
    last = None
    for N in Ns:
        for rho in rhos:
            try:
                return lacunary_cover(n, rho, N), rho, N
            except ClassificationError as exc:
                last = exc
    raise ClassificationError(f"sequence is not a union of <= {max(Ns)} lacunary sequences: {last}")
