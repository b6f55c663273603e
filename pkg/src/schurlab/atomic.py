"""Greedy decomposition of trigonometric polynomials into shifted ``Omega_n`` atoms.

Atoms are ``Omega_n(z exp(-i s))`` with coefficients ``omega(k / 2**n) exp(-i k s)``.
Each step scans a shift grid of ``2**(n+3)`` points per scale, refines the
best shifts, takes the L2-optimal scalar and keeps the candidate that lowers
the ``L^p`` energy ``||residual||_p**p`` most. After every accepted term all
scalars and shifts are refit jointly by least squares on the coefficients,
and the refit is kept only if it lowers the ``L^p`` energy further.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares, minimize_scalar

from .cutoffs import OMEGA, SmoothCutoffSpec
from .symbols import TrigPolynomial, as_symbol

TOP_SHIFTS = 4


@dataclass(frozen=True)
class AtomTerm:
    alpha: complex
    n: int
    s: float


@dataclass
class AtomicDecomposition:
    terms: list
    residual: TrigPolynomial
    residual_lp: float
    initial_energy: float
    energies: list = field(default_factory=list)
    p: float = 0.5

    @property
    def residual_energy(self) -> float:
        return self.energies[-1] if self.energies else self.initial_energy

    @property
    def relative_energy(self) -> float:
        return self.residual_energy / self.initial_energy if self.initial_energy > 0 else 0.0

    @property
    def weighted_p_sum(self) -> float:
        """``sum |alpha_j|**p 2**(-n_j (1 - p))``."""
        return float(sum(abs(t.alpha) ** self.p * 2.0 ** (-t.n * (1 - self.p)) for t in self.terms))

    @property
    def l1_sum(self) -> float:
        return float(sum(abs(t.alpha) for t in self.terms))

    @property
    def decay_factor(self) -> float:
        """Geometric mean of the per-term energy ratios."""
        e = [self.initial_energy] + list(self.energies)
        if len(e) < 2 or e[0] <= 0 or e[-1] <= 0:
            return 0.0
        return (e[-1] / e[0]) ** (1.0 / (len(e) - 1))


class StagnationError(RuntimeError):
    """No atom lowers the residual energy; the partial decomposition is attached."""

    def __init__(self, message: str, decomposition: AtomicDecomposition):
        super().__init__(message)
        self.decomposition = decomposition
        self.residual = decomposition.residual


class _Grid:
    """Coefficients on ``[-K, K]`` and samples at ``M`` equispaced points."""

    def __init__(self, K: int, oversample: int = 8):
        self.K = K
        self.k = np.arange(-K, K + 1)
        self.M = 1 << max(6, int(oversample * (2 * K + 1) - 1).bit_length())

    def values(self, c: np.ndarray) -> np.ndarray:
        buf = np.zeros(self.M, dtype=complex)
        np.add.at(buf, self.k % self.M, c)
        return np.fft.ifft(buf) * self.M

    def energy(self, c: np.ndarray, p: float) -> float:
        return float(np.mean(np.abs(self.values(c)) ** p))


def _joint_refit(grid, target, profiles, alphas, shifts):
    """Least-squares refit of all scalars and shifts in coefficient space."""
    k = grid.k
    P = np.stack(profiles)
    m = len(alphas)

    def unpack(z):
        return z[:m] + 1j * z[m:2 * m], z[2 * m:]

    def resid(z):
        al, sh = unpack(z)
        r = target - (al[:, None] * P * np.exp(-1j * np.outer(sh, k))).sum(axis=0)
        return np.concatenate([r.real, r.imag])

    def jac(z):
        al, sh = unpack(z)
        E = P * np.exp(-1j * np.outer(sh, k))
        dre, dim, ds = -E, -1j * E, 1j * k[None, :] * al[:, None] * E
        J = np.concatenate([dre, dim, ds]).T
        return np.concatenate([J.real, J.imag])

    a = np.asarray(alphas, dtype=complex)
    z0 = np.concatenate([a.real, a.imag, np.asarray(shifts, dtype=float)])
    sol = least_squares(resid, z0, jac=jac, method="lm", max_nfev=200 * (3 * m + 1))
    al, sh = unpack(sol.x)
    r = resid(sol.x)
    half = r.size // 2
    return list(al), list(np.mod(sh, 2 * math.pi)), r[:half] + 1j * r[half:]


def greedy_atomic_decompose(f, p: float, max_terms: int = 12, tol: float = 1e-3, *,
                            omega: SmoothCutoffSpec = OMEGA, scales=None) -> AtomicDecomposition:
    """Greedy ``Omega_n`` decomposition of ``f`` until ``||res||_p**p <= tol * ||f||_p**p``.

    Parameters
    ----------
    f : TrigPolynomial or array_like
        Polynomial to decompose.
    p : float
        Exponent in (0, 1).
    max_terms : int
        Maximal number of accepted atoms.
    tol : float
        Target relative ``L^p`` energy.
    scales : iterable of int, optional
        Scale indices ``n``; by default the dyadic range of the spectrum
        of ``f`` widened by one on each side.

    Raises
    ------
    StagnationError
        If no candidate atom lowers the residual energy before the target.
    """
    if not 0 < p < 1:
        raise ValueError("p must lie in (0, 1)")
    if max_terms < 1:
        raise ValueError("max_terms must be at least 1")
    f = as_symbol(f).trimmed()
    if f.is_zero():
        return AtomicDecomposition([], f, 0.0, 0.0, [], p)
    kmax = int(max(abs(f.lo), abs(f.hi)))
    if scales is None:
        top = max(1, kmax).bit_length() + 1
        scales = range(0, top + 1)
    scales = sorted(int(n) for n in scales)
    R = omega.radius
    K = max(kmax, int(math.floor(R * 2 ** scales[-1])))
    grid = _Grid(K)
    target = f.window(-K, K)
    res = target.copy()
    E0 = grid.energy(res, p)
    terms: list[AtomTerm] = []
    profiles: list[np.ndarray] = []
    alphas: list[complex] = []
    energies: list[float] = []
    E = E0

    def finish():
        out = TrigPolynomial(res.copy(), -K).trimmed()
        return AtomicDecomposition(list(terms), out, E ** (1 / p), E0, list(energies), p)

    while len(terms) < max_terms and E > tol * E0:
        best = None
        for n in scales:
            a = omega(grid.k / 2.0**n)
            na = float(np.sum(a**2))
            if na == 0:
                continue
            L = 1 << (n + 3)
            # c(s) = sum_k res_k a_k exp(i k s), sampled at s = 2 pi l / L
            buf = np.zeros(L, dtype=complex)
            np.add.at(buf, grid.k % L, res * a)
            corr = np.fft.ifft(buf) * L
            for l in np.argsort(-np.abs(corr), kind="stable")[:TOP_SHIFTS]:
                h = 2 * math.pi / L

                def neg(s):
                    return -abs(np.sum(res * a * np.exp(1j * grid.k * s)))

                opt = minimize_scalar(neg, bounds=(l * h - h, l * h + h), method="bounded",
                                      options={"xatol": 1e-12})
                s = float(opt.x) if -opt.fun > abs(corr[l]) else l * h
                s %= 2 * math.pi
                atom = a * np.exp(-1j * grid.k * s)
                alpha = complex(np.vdot(atom, res) / na)
                e = grid.energy(res - alpha * atom, p)
                if best is None or e < best[0]:
                    best = (e, n, s, alpha, atom)
        if best is None or best[0] >= E:
            raise StagnationError(f"no atom lowers the residual energy after {len(terms)} terms", finish())
        e, n, s, alpha, atom = best
        alphas.append(alpha)
        res = res - alpha * atom
        terms.append(AtomTerm(alpha, n, s))
        profiles.append(omega(grid.k / 2.0**n))
        # least-squares refit of all scalars and shifts, kept if the L^p energy drops
        al_fit, sh_fit, res_fit = _joint_refit(grid, target, profiles, alphas, [t.s for t in terms])
        e_fit = grid.energy(res_fit, p)
        if e_fit < e:
            alphas = [complex(v) for v in al_fit]
            terms = [AtomTerm(al, t.n, float(sh)) for al, sh, t in zip(alphas, sh_fit, terms)]
            res, e = res_fit, e_fit
        else:
            terms[-1] = AtomTerm(alpha, n, s)
        energies.append(e)
        E = e
    return finish()
