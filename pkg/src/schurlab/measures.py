"""Discrete measures on the circle and their Toeplitz and Hankel multipliers.

For ``mu = sum_m w_m delta_{theta_m}`` the Toeplitz matrix ``{mu^(j-k)}`` has
multiplier quasi-norm ``(sum |w_m|**p)**(1/p)``; finite windows approach it
from below, and arc-localized witnesses realize the approach explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .cutoffs import OMEGA, SmoothCutoffSpec
from .linalg import PExponent, lq_aggregate
from .quadrature import lp_norm
from .symbols import TrigPolynomial

ANGLE_TOL = 1e-12
GRAM_TOL = 0.01
TWO_PI = 2 * math.pi


def _circular_gaps(theta: np.ndarray) -> np.ndarray:
    """Pairwise circular distances (``inf`` on the diagonal)."""
    d = np.abs(theta[:, None] - theta[None, :]) % TWO_PI
    d = np.minimum(d, TWO_PI - d)
    np.fill_diagonal(d, np.inf)
    return d


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    """Finitely many point masses ``w_m`` at angles ``theta_m`` in ``[0, 2 pi)``."""

    thetas: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.thetas, dtype=float).ravel() % TWO_PI
        w = np.asarray(self.weights, dtype=complex).ravel()
        if t.shape != w.shape:
            raise ValueError(f"{t.size} angles but {w.size} weights")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(w))):
            raise ValueError("angles and weights must be finite")
        if t.size > 1 and _circular_gaps(t).min() <= ANGLE_TOL:
            raise ValueError("atoms closer than 1e-12 rad; merge them explicitly with merged()")
        t.flags.writeable = False
        w.flags.writeable = False
        object.__setattr__(self, "thetas", t)
        object.__setattr__(self, "weights", w)

    @classmethod
    def empty(cls) -> "DiscreteMeasure":
        return cls(np.zeros(0), np.zeros(0))

    @classmethod
    def delta(cls, theta: float = 0.0, weight: complex = 1.0) -> "DiscreteMeasure":
        return cls([theta], [weight])

    @property
    def size(self) -> int:
        return int(self.thetas.size)

    def min_separation(self) -> float:
        """Smallest circular distance between atoms (``inf`` for fewer than two)."""
        return float(_circular_gaps(self.thetas).min()) if self.size > 1 else math.inf

    def __add__(self, other: "DiscreteMeasure") -> "DiscreteMeasure":
        return DiscreteMeasure(np.concatenate([self.thetas, other.thetas]),
                               np.concatenate([self.weights, other.weights]))

    def __mul__(self, c) -> "DiscreteMeasure":
        return DiscreteMeasure(self.thetas, self.weights * complex(c))

    __rmul__ = __mul__

    def merged(self, tol: float) -> "DiscreteMeasure":
        """Combine atoms within ``tol`` of each other (summing weights, keeping the first angle)."""
        order = np.argsort(self.thetas, kind="stable")
        t, w = [], []
        for i in order:
            th = self.thetas[i]
            hit = next((k for k, s in enumerate(t) if min(abs(th - s), TWO_PI - abs(th - s)) <= tol), None)
            if hit is None:
                t.append(th)
                w.append(self.weights[i])
            else:
                w[hit] += self.weights[i]
        return DiscreteMeasure(t, w)


def random_measure(rng: np.random.Generator, atoms: int, min_sep: float = 0.3) -> DiscreteMeasure:
    """Atoms at random angles at least ``min_sep`` apart, complex Gaussian weights."""
    if atoms * min_sep >= TWO_PI:
        raise ValueError("too many atoms for the requested separation")
    while True:
        t = np.sort(rng.uniform(0, TWO_PI, atoms))
        if atoms < 2 or _circular_gaps(t).min() >= min_sep:
            break
    w = rng.standard_normal(atoms) + 1j * rng.standard_normal(atoms)
    return DiscreteMeasure(t, w)


def fourier_coefficient(mu: DiscreteMeasure, k):
    """``mu^(k) = sum_m w_m exp(-i k theta_m)``; vectorized over ``k``."""
    k = np.asarray(k)
    if mu.size == 0:
        return np.zeros(k.shape, dtype=complex) if k.ndim else 0j
    out = np.exp(-1j * np.multiply.outer(k, mu.thetas)) @ mu.weights
    return out if k.ndim else complex(out)


def measure_mp_norm(mu: DiscreteMeasure, p) -> float:
    """``(sum |w_m|**p)**(1/p)``, the exact Toeplitz multiplier quasi-norm."""
    if mu.size == 0:
        return 0.0
    return lq_aggregate(np.abs(mu.weights), PExponent.of(p).p)


def toeplitz_window(mu: DiscreteMeasure, n: int, shift: int = 0) -> np.ndarray:
    """``n x n`` matrix with entries ``mu^(j - k - shift)``."""
    if n < 1:
        raise ValueError("window size must be positive")
    j = np.arange(n)
    return fourier_coefficient(mu, np.subtract.outer(j, j) - shift).astype(complex)


def hankel_window(mu: DiscreteMeasure, n: int, shift: int = 0) -> np.ndarray:
    """``n x n`` matrix with entries ``mu^(j + k - shift)``."""
    if n < 1:
        raise ValueError("window size must be positive")
    j = np.arange(n)
    return fourier_coefficient(mu, np.add.outer(j, j) - shift).astype(complex)


# -- arc witnesses ------------------------------------------------------------------------

@dataclass(frozen=True)
class ArcWitness:
    x: np.ndarray
    y: np.ndarray
    arc_width: float
    gram_offdiag: float
    captured: float


def arc_profile(n: int, arc_width: float) -> np.ndarray:
    """Coefficients of a mollified arc indicator on ``j = -(n//2) .. n - 1 - n//2``.

    ``f^(j) = sin(j w / 2) / (pi j)`` (and ``w / 2 pi`` at 0) for the arc of
    width ``w`` centred at 0, multiplied by ``omega(j / K)`` with ``K = n // 4``
    so that the profile vanishes outside the window.
    """
    j = np.arange(n) - n // 2
    K = max(1, n // 4)
    with np.errstate(invalid="ignore", divide="ignore"):
        f = np.where(j == 0, arc_width / TWO_PI, np.sin(j * arc_width / 2) / (math.pi * j))
    return f * OMEGA(j / K)


def arc_witness(mu: DiscreteMeasure, arc_width: float | None = None, samples: int = 256) -> ArcWitness:
    """Rank-one witness for ``toeplitz_window(mu, samples)`` from an arc-supported function.

    Rotated copies of the arc function sit at the atoms; when they are nearly
    orthogonal the Schur product is close to ``sum_m w_m g_m g_m*`` with
    orthonormal ``g_m``, whose ``S_p`` quasi-norm is ``(sum |w_m|**p)**(1/p)``.

    Parameters
    ----------
    arc_width : float, optional
        Defaults to half the minimal atom separation, capped at ``pi / 4``.
    samples : int
        Window size.

    Raises
    ------
    ValueError
        If atoms are closer than ``arc_width`` or the Gram off-diagonal of
        the rotated copies reaches 0.01.
    """
    if samples < 8:
        raise ValueError("window must have at least 8 entries")
    sep = mu.min_separation()
    if arc_width is None:
        arc_width = min(math.pi / 4, 0.5 * sep)
    if not 0 < arc_width < TWO_PI:
        raise ValueError("arc width must lie in (0, 2 pi)")
    if arc_width >= sep:
        raise ValueError(f"atoms {sep:.3g} rad apart are closer than the arc width {arc_width:.3g}; "
                         "narrow the arc below the atom separation")
    f = arc_profile(samples, arc_width)
    e2 = np.abs(f) ** 2
    total = float(e2.sum())
    if total == 0:
        raise ValueError("arc profile vanishes on this window; widen the arc or enlarge the window")
    gram = 0.0
    if mu.size > 1:
        j = np.arange(samples) - samples // 2
        diffs = np.subtract.outer(mu.thetas, mu.thetas)
        G = np.abs(np.exp(-1j * np.multiply.outer(diffs, j)) @ e2) / total
        np.fill_diagonal(G, 0.0)
        gram = float(G.max())
        if gram >= GRAM_TOL:
            raise ValueError(f"rotated arc functions overlap (Gram off-diagonal {gram:.3g} >= {GRAM_TOL}); "
                             "narrow the arc or enlarge the window")
    # fraction of the continuous L2 mass w / 2 pi kept by the mollified, truncated profile
    captured = total / (arc_width / TWO_PI)
    x = np.abs(f) / math.sqrt(total)
    return ArcWitness(x, x.copy(), float(arc_width), gram, captured)


# -- window sweeps ------------------------------------------------------------------------

@dataclass(frozen=True)
class WindowRow:
    N: int
    lower: float
    upper: float
    ratio: float
    method: str


def window_lower(mu: DiscreteMeasure, N: int, p, arc_width: float | None = None, *, kind: str = "toeplitz",
                 shift: int = 0, sweeps: int = 10, restarts: int = 0, seed: int = 0, extra_starts=()):
    """Lower bound for the ``N x N`` Toeplitz (or Hankel) window from the arc witness.

    The arc witness is refined by ``sweeps`` ascent steps. With ``restarts > 0``
    a full multistart run is added, seeded with the arc witness.
    """
    from .multiplier.estimate import mult_lower_rank1, refine_witness

    A = toeplitz_window(mu, N, shift) if kind == "toeplitz" else hankel_window(mu, N, shift)
    if not np.any(A):
        return 0.0, "zero", None
    starts = list(extra_starts)
    if mu.size >= 1 and N >= 8:
        try:
            w = arc_witness(mu, arc_width, N)
        except ValueError:
            # default width on a window too short to separate the arcs: fall back to multistart
            if arc_width is not None:
                raise
            w = None
        if w is not None:
            # a Hankel window is a column-reversed Toeplitz window
            x = w.x if kind == "toeplitz" else w.x[::-1]
            starts.append((x, w.y))
    arc_used = len(starts) > len(extra_starts)
    best, method, wit = 0.0, "none", None
    for x, y in starts:
        est = refine_witness(A, x, y, p, sweeps)
        if est.lower > best:
            best, method, wit = est.lower, "arc-witness", (est.witness_x, est.witness_y)
    if restarts > 0 or not arc_used:
        est = mult_lower_rank1(A, p, max(1, restarts), seed, starts=starts, max_sweeps=max(sweeps, 1), polish=False)
        if est.lower > best:
            best, method, wit = est.lower, est.lower_method, (est.witness_x, est.witness_y)
    return best, method, wit


def window_sweep(mu: DiscreteMeasure, p, Ns: Sequence[int], arc_width: float | None = None, *,
                 kind: str = "toeplitz", sweeps: int = 10, restarts: int = 0, seed: int = 0) -> list[WindowRow]:
    """Lower bounds for growing windows against the exact value.

    Each window is warm-started from the previous witness padded with zeros,
    so lower bounds never decrease in ``N``.
    """
    from .multiplier.estimate import witness_value

    exact = measure_mp_norm(mu, p)
    rows, prev, prev_val = [], None, 0.0
    for N in sorted(int(n) for n in Ns):
        extra = []
        pad_val = 0.0
        if prev is not None:
            px, py = prev
            k = N - px.size
            # Toeplitz windows are nested at the top-left corner
            x = np.concatenate([px, np.zeros(k)])
            y = np.concatenate([py, np.zeros(k)])
            A = toeplitz_window(mu, N) if kind == "toeplitz" else hankel_window(mu, N)
            pad_val = witness_value(A, x, y, p)
            extra.append((x + 1e-3 / math.sqrt(N), y + 1e-3 / math.sqrt(N)))
        low, method, wit = window_lower(mu, N, p, arc_width, kind=kind, sweeps=sweeps,
                                        restarts=restarts, seed=seed, extra_starts=extra)
        if max(pad_val, prev_val) > low:
            low, method = max(pad_val, prev_val), "previous-window"
        else:
            prev = wit
        prev_val = low
        rows.append(WindowRow(N, low, exact, low / exact if exact > 0 else math.nan, method))
    return rows


# -- convolution with Omega_n and Wiener means ---------------------------------------------

def omega_kernel(n: int, omega: SmoothCutoffSpec = OMEGA, shift: float = 0.0) -> TrigPolynomial:
    """``Omega_n(z exp(-i shift)) = sum_k omega(k / 2**n) exp(-i k shift) z**k``."""
    if n < 0:
        raise ValueError("scale index must be nonnegative")
    R = int(math.floor(omega.radius * 2**n))
    k = np.arange(-R, R + 1)
    c = omega(k / 2.0**n) * np.exp(-1j * k * shift)
    return TrigPolynomial(c, -R)


@dataclass(frozen=True)
class DecayRow:
    n: int
    lp: float
    scale: float
    ratio: float


def omega_convolution_decay(mu: DiscreteMeasure, omega: SmoothCutoffSpec = OMEGA, p: float = 0.5,
                            n_range: Sequence[int] = range(4, 10)) -> list[DecayRow]:
    """``||mu * Omega_n||_p`` against ``2**(n (1 - 1/p))`` for each ``n``."""
    omega.validate_plateau()
    rows = []
    for n in n_range:
        R = int(math.floor(omega.radius * 2**n))
        k = np.arange(-R, R + 1)
        c = fourier_coefficient(mu, k) * omega(k / 2.0**n)
        f = TrigPolynomial(np.asarray(c, dtype=complex), -R)
        val = lp_norm(f, p) if np.any(c) else 0.0
        scale = 2.0 ** (n * (1 - 1 / p))
        rows.append(DecayRow(int(n), val, scale, val / scale))
    return rows


def wiener_mean(mu: DiscreteMeasure, N: int) -> float:
    """``(1/(N+1)) sum_{k=0}^{N} |mu^(k)|**2``."""
    if N < 1:
        raise ValueError("N must be at least 1")
    if mu.size == 0:
        return 0.0
    return float(np.mean(np.abs(fourier_coefficient(mu, np.arange(N + 1))) ** 2))
