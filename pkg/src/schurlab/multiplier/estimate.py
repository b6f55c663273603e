"""Rank-one witness lower bounds for Schur multiplier quasi-norms.

For ``0 < p <= 1`` the multiplier quasi-norm of ``A`` is the maximum of

    F(x, y) = || diag(y) A diag(x) ||_{S_p}

over nonnegative unit vectors ``x`` (columns) and ``y`` (rows). In squared
coordinates ``u = x**2``, ``t = y**2`` the p-th power of ``F`` is concave in
each of ``t`` and ``u`` separately, and with ``M = U S V*``

    t_j dF^p/dt_j = (p/2) sum_i s_i**p |U_ji|**2,

so the fixed-point map ``t -> diag(U S^p U*) / sum s**p`` points uphill. The
ascent moves both ``t`` and ``u`` towards their fixed-point images with
backtracking, accepting only strict improvements, from many starts.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..linalg import SV_FLOOR, PExponent, as_matrix, schatten_from_singular, schatten_norm

log = logging.getLogger(__name__)

MAX_SWEEPS = 200
REL_STOP = 1e-8
MAX_HALVINGS = 12
BATCH_ELEMENTS = 4_000_000
POLISH_DIM = 16


class BracketError(AssertionError):
    """Lower bound exceeds a certified upper bound: a bug, never a result."""


@dataclass(frozen=True)
class BlockPartition:
    """Row cuts and column cuts, each increasing from 0 to the matrix size."""

    row_cuts: tuple
    col_cuts: tuple

    def __post_init__(self):
        for name in ("row_cuts", "col_cuts"):
            c = tuple(int(v) for v in getattr(self, name))
            if len(c) < 2 or c[0] != 0 or any(b <= a for a, b in zip(c, c[1:])):
                raise ValueError(f"{name} must increase strictly from 0")
            object.__setattr__(self, name, c)
        if len(self.row_cuts) != len(self.col_cuts):
            raise ValueError("row and column cuts must define the same number of blocks")

    def check(self, shape) -> None:
        if self.row_cuts[-1] != shape[0] or self.col_cuts[-1] != shape[1]:
            raise ValueError(f"cuts end at {self.row_cuts[-1]}x{self.col_cuts[-1]}, matrix is {shape}")

    def blocks(self):
        """Diagonal blocks as (row slice, col slice)."""
        r, c = self.row_cuts, self.col_cuts
        return [(slice(r[k], r[k + 1]), slice(c[k], c[k + 1])) for k in range(len(r) - 1)]


@dataclass
class MultiplierEstimate:
    lower: float
    upper: float
    witness_x: np.ndarray
    witness_y: np.ndarray
    lower_method: str
    upper_method: str
    restarts_used: int
    seed: int
    certificates: dict = field(default_factory=dict)
    sweeps: int = 0

    @property
    def bracket(self) -> tuple[float, float]:
        return (self.lower, self.upper)

    @property
    def gap(self) -> float:
        return self.upper / self.lower if self.lower > 0 else math.inf


# -- batched objective -----------------------------------------------------------

def _values(A, X, Y, p):
    """Objective for a stack of (x, y) pairs."""
    M = Y[:, :, None] * A[None] * X[:, None, :]
    s = np.linalg.svd(M, compute_uv=False)
    return schatten_from_singular(s, p)


def _targets(A, X, Y, p):
    """Current values and fixed-point images of the squared witnesses."""
    M = Y[:, :, None] * A[None] * X[:, None, :]
    U, s, Vh = np.linalg.svd(M, full_matrices=False)
    vals = schatten_from_singular(s, p)
    smax = s[:, :1]
    w = np.where(s > SV_FLOOR * smax, s, 0.0)
    w = np.where(smax > 0, w / np.where(smax > 0, smax, 1.0), 0.0) ** p
    tot = w.sum(axis=1, keepdims=True)
    tot = np.where(tot > 0, tot, 1.0)
    t_new = np.einsum("bji,bi->bj", np.abs(U) ** 2, w) / tot
    u_new = np.einsum("bik,bi->bk", np.abs(Vh) ** 2, w) / tot
    return vals, t_new, u_new


def _ascend(A, T, Uu, p, max_sweeps):
    """Backtracking fixed-point ascent on squared witnesses (rows of T, Uu)."""
    B = T.shape[0]
    vals = _values(A, np.sqrt(Uu), np.sqrt(T), p)
    active = np.ones(B, dtype=bool)
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        _, tn, un = _targets(A, np.sqrt(Uu[idx]), np.sqrt(T[idx]), p)
        dT, dU = tn - T[idx], un - Uu[idx]
        pending = np.ones(idx.size, dtype=bool)
        improved = np.zeros(idx.size, dtype=bool)
        new_vals = vals[idx].copy()
        alpha = 1.0
        for _ in range(MAX_HALVINGS):
            k = np.flatnonzero(pending)
            if k.size == 0:
                break
            Tc = np.clip(T[idx[k]] + alpha * dT[k], 0, None)
            Uc = np.clip(Uu[idx[k]] + alpha * dU[k], 0, None)
            Tc /= Tc.sum(axis=1, keepdims=True)
            Uc /= Uc.sum(axis=1, keepdims=True)
            v = _values(A, np.sqrt(Uc), np.sqrt(Tc), p)
            ok = v > vals[idx[k]]
            acc = k[ok]
            T[idx[acc]] = Tc[ok]
            Uu[idx[acc]] = Uc[ok]
            new_vals[acc] = v[ok]
            improved[acc] = True
            pending[acc] = False
            alpha *= 0.5
        rel = (new_vals - vals[idx]) / np.maximum(vals[idx], 1e-300)
        vals[idx] = new_vals
        active[idx[(~improved) | (rel < REL_STOP)]] = False
    return vals, sweeps


def _coordinate_polish(A, t, u, p, passes=2, scan=16, golden_iters=24):
    """Golden-section search on one squared amplitude at a time."""
    def value(tt, uu):
        return float(_values(A, np.sqrt(uu)[None], np.sqrt(tt)[None], p)[0])

    best = value(t, u)
    gr = (math.sqrt(5) - 1) / 2
    for _ in range(passes):
        start = best
        for which in (0, 1):
            vec = t if which == 0 else u
            for j in range(vec.size):
                if vec.size == 1:
                    continue
                rest = vec.copy()
                rest[j] = 0.0
                rs = rest.sum()
                rest = rest / rs if rs > 0 else np.full(vec.size, 1.0 / (vec.size - 1))
                rest[j] = 0.0

                def cand(phi, rest=rest, j=j):
                    c = math.sin(phi) ** 2 * rest
                    c[j] = math.cos(phi) ** 2
                    return c

                def f(phi, which=which, cand=cand):
                    c = cand(phi)
                    return value(c, u) if which == 0 else value(t, c)

                grid = np.linspace(0, math.pi / 2, scan + 1)
                fv = [f(g) for g in grid]
                i = int(np.argmax(fv))
                a, b = grid[max(i - 1, 0)], grid[min(i + 1, scan)]
                x1, x2 = b - gr * (b - a), a + gr * (b - a)
                f1, f2 = f(x1), f(x2)
                for _ in range(golden_iters):
                    if f1 < f2:
                        a, x1, f1 = x1, x2, f2
                        x2 = a + gr * (b - a)
                        f2 = f(x2)
                    else:
                        b, x2, f2 = x2, x1, f1
                        x1 = b - gr * (b - a)
                        f1 = f(x1)
                phis = [grid[i], x1, x2]
                vals = [fv[i], f1, f2]
                k = int(np.argmax(vals))
                if vals[k] > best:
                    best = vals[k]
                    c = cand(phis[k])
                    if which == 0:
                        t = c
                    else:
                        u = c
                    vec = t if which == 0 else u
        if best <= start * (1 + REL_STOP):
            break
    return t, u, best


# -- starts ----------------------------------------------------------------------

def _dominant(n, i, mass=0.9):
    v = np.full(n, (1.0 - mass) / n)
    v[i] += mass
    return v / v.sum()


def _structured_starts(A, p, partition, user_starts):
    r, c = A.shape
    starts = [(np.full(r, 1.0 / r), np.full(c, 1.0 / c), "uniform")]
    absA = np.abs(A)
    order = np.argsort(-absA.ravel(), kind="stable")[: min(8, absA.size)]
    for flat in order:
        i, j = divmod(int(flat), c)
        if absA[i, j] > 0:
            starts.append((_dominant(r, i), _dominant(c, j), "entry"))
    for x, y in user_starts:
        x = np.abs(np.asarray(x, dtype=float)) ** 2
        y = np.abs(np.asarray(y, dtype=float)) ** 2
        if x.shape != (c,) or y.shape != (r,):
            raise ValueError("user start has wrong length")
        # keep a sliver of mass everywhere so multiplicative steps can move
        t = 0.999 * y / y.sum() + 0.001 / r
        u = 0.999 * x / x.sum() + 0.001 / c
        starts.append((t, u, "user"))
    if partition is not None:
        partition.check(A.shape)
        for rs, cs in partition.blocks():
            t = np.full(r, 0.02 / r)
            u = np.full(c, 0.02 / c)
            t[rs] += 0.98 / (rs.stop - rs.start)
            u[cs] += 0.98 / (cs.stop - cs.start)
            starts.append((t / t.sum(), u / u.sum(), "block"))
    return starts


def _block_combination(A, pe, partition, restarts, seed, max_sweeps):
    """Combine per-block optima with masses proportional to ``v_k**p#``."""
    r, c = A.shape
    vals, parts = [], []
    for k, (rs, cs) in enumerate(partition.blocks()):
        sub = A[rs, cs]
        if not np.any(sub):
            vals.append(0.0)
            parts.append(None)
            continue
        est = mult_lower_rank1(sub, pe, restarts=restarts, seed=seed + 7919 * (k + 1), max_sweeps=max_sweeps)
        vals.append(est.lower)
        parts.append((rs, cs, est.witness_y**2, est.witness_x**2))
    v = np.asarray(vals)
    if not np.any(v > 0):
        return None
    if pe.sharp_is_infinite:
        mass = (v == v.max()).astype(float)
    else:
        mass = (v / v.max()) ** pe.p_sharp
    mass /= mass.sum()
    t, u = np.zeros(r), np.zeros(c)
    for m, part in zip(mass, parts):
        if part is None:
            continue
        rs, cs, tk, uk = part
        t[rs] += m * tk
        u[cs] += m * uk
    t = 0.9999 * t + 1e-4 / r
    u = 0.9999 * u + 1e-4 / c
    return t / t.sum(), u / u.sum()


def _random_start(r, c, seed, idx):
    rng = np.random.default_rng([seed, idx])
    return rng.dirichlet(np.ones(r)), rng.dirichlet(np.ones(c))


# -- public API ----------------------------------------------------------------------

def mult_lower_rank1(
    A,
    p,
    restarts: int = 32,
    seed: int = 0,
    *,
    starts: Sequence = (),
    partition: BlockPartition | None = None,
    max_sweeps: int = MAX_SWEEPS,
    polish: bool | None = None,
) -> MultiplierEstimate:
    """Best rank-one witness value ``max ||diag(y) A diag(x)||_{S_p}`` found by multistart ascent.

    Parameters
    ----------
    A : array_like
        Complex matrix.
    p : float or PExponent
        Exponent in (0, 1].
    restarts : int
        Number of random (Dirichlet) starts, in addition to the structured
        starts (uniform, entry-dominant, block and user-supplied).
    seed : int
        Restart ``i`` draws from ``default_rng([seed, i])``.
    starts : sequence of (x, y)
        Extra warm starts; magnitudes are used.
    partition : BlockPartition, optional
        Adds block-indicator starts and the optimal combination of per-block
        witnesses.
    max_sweeps : int
        Sweep cap per start.
    polish : bool, optional
        Coordinate golden-section refinement of the best starts; defaults to
        on for matrices with ``rows + cols <= 16``.

    Returns
    -------
    MultiplierEstimate
        ``lower`` is the exact objective at the returned witnesses; ``upper``
        is left at ``inf``.
    """
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    pe = PExponent.of(p)
    A = as_matrix(A)
    r, c = A.shape
    if not np.any(A):
        return MultiplierEstimate(0.0, math.inf, np.full(c, c**-0.5), np.full(r, r**-0.5),
                                  "zero", "", restarts, seed)
    cand = _structured_starts(A, pe, partition, starts)
    if partition is not None and len(partition.blocks()) > 1:
        comb = _block_combination(A, pe, partition, max(4, restarts // 4), seed, max_sweeps)
        if comb is not None:
            cand.append((comb[0], comb[1], "block-combination"))
    for i in range(restarts):
        t, u = _random_start(r, c, seed, i)
        cand.append((t, u, "random"))

    T = np.array([s[0] for s in cand])
    U = np.array([s[1] for s in cand])
    labels = [s[2] for s in cand]
    per = max(1, BATCH_ELEMENTS // (r * c))
    vals = np.empty(len(cand))
    sweeps_used = 0
    for b0 in range(0, len(cand), per):
        sl = slice(b0, b0 + per)
        Tb, Ub = T[sl].copy(), U[sl].copy()
        v, sw = _ascend(A, Tb, Ub, pe.p, max_sweeps)
        T[sl], U[sl], vals[sl] = Tb, Ub, v
        sweeps_used = max(sweeps_used, sw)
    if sweeps_used >= max_sweeps:
        log.debug("some starts hit the sweep cap (%d)", max_sweeps)

    do_polish = (r + c <= POLISH_DIM) if polish is None else polish
    if do_polish:
        top = np.argsort(-vals, kind="stable")[:4]
        for i in top:
            t, u, v = _coordinate_polish(A, T[i].copy(), U[i].copy(), pe.p)
            if v > vals[i]:
                T[i], U[i], vals[i] = t, u, v

    # exact entry value: coordinate witnesses give max |a_jk|
    absA = np.abs(A)
    i_best = int(np.argmax(vals))
    y, x = np.sqrt(T[i_best]), np.sqrt(U[i_best])
    method = f"rank1-ascent:{labels[i_best]}"
    value = schatten_norm(y[:, None] * A * x[None, :], pe.p).value
    if absA.max() > value:
        jj, kk = np.unravel_index(int(np.argmax(absA)), absA.shape)
        y = np.zeros(r)
        x = np.zeros(c)
        y[jj], x[kk] = 1.0, 1.0
        value = float(absA.max())
        method = "rank1-ascent:max-entry"
    return MultiplierEstimate(
        lower=value,
        upper=math.inf,
        witness_x=x,
        witness_y=y,
        lower_method=method,
        upper_method="",
        restarts_used=restarts,
        seed=seed,
        sweeps=sweeps_used,
    )


def witness_value(A, x, y, p) -> float:
    """``||diag(y) A diag(x)||_{S_p}`` for given witnesses."""
    A = as_matrix(A)
    return schatten_norm(np.asarray(y)[:, None] * A * np.asarray(x)[None, :], float(p)).value


def refine_witness(A, x, y, p, max_sweeps: int = 20) -> MultiplierEstimate:
    """Ascend from one given witness pair only; cheap for large windows.

    The result is never below the value at ``(x, y)``.
    """
    pe = PExponent.of(p)
    A = as_matrix(A)
    x = np.abs(np.asarray(x, dtype=float))
    y = np.abs(np.asarray(y, dtype=float))
    if x.shape != (A.shape[1],) or y.shape != (A.shape[0],):
        raise ValueError("witness lengths do not match the matrix")
    if not (x.any() and y.any()):
        raise ValueError("witness vectors must be nonzero")
    T = (y**2 / np.sum(y**2))[None].copy()
    U = (x**2 / np.sum(x**2))[None].copy()
    _, sweeps = _ascend(A, T, U, pe.p, max_sweeps)
    yb, xb = np.sqrt(T[0]), np.sqrt(U[0])
    value = witness_value(A, xb, yb, pe.p)
    return MultiplierEstimate(value, math.inf, xb, yb, "rank1-ascent:given", "", 0, 0, sweeps=sweeps)


UPPER_FAMILIES = ("hadamard", "hankel-poly", "strips")


def upper_certificates(A, p, families=UPPER_FAMILIES, partition: BlockPartition | None = None) -> dict:
    """All applicable certified upper bounds, keyed by certificate name."""
    from .bounds import mult_exact_row, mult_upper_hadamard, mult_upper_strips, mult_upper_window

    A = as_matrix(A)
    out = {}
    exact = mult_exact_row(A)
    if exact is not None:
        out["single-line"] = exact
    if "hadamard" in families:
        out["hadamard"] = mult_upper_hadamard(A, p)
    if "hankel-poly" in families:
        w = mult_upper_window(A, p)
        if w is not None:
            out["window-interpolation"] = w
    if "strips" in families:
        out["strips"] = mult_upper_strips(A, p)
        if partition is not None:
            partition.check(A.shape)
            out["strips-partition"] = mult_upper_strips(A, p, partition.row_cuts, partition.col_cuts)
    return out


def estimate_multiplier(
    A,
    p,
    restarts: int = 32,
    seed: int = 0,
    *,
    families=UPPER_FAMILIES,
    extra_upper: dict | None = None,
    starts: Sequence = (),
    partition: BlockPartition | None = None,
    max_sweeps: int = MAX_SWEEPS,
    polish: bool | None = None,
) -> MultiplierEstimate:
    """Bracket ``[lower, upper]``; ``upper`` is the minimum over certificates.

    ``extra_upper`` adds externally certified bounds (for instance an exact
    formula known for the input). A lower bound above any certificate by
    more than ``1e-9`` relative raises :class:`BracketError`.
    """
    est = mult_lower_rank1(A, p, restarts, seed, starts=starts, partition=partition,
                           max_sweeps=max_sweeps, polish=polish)
    certs = upper_certificates(A, p, families, partition)
    if extra_upper:
        certs.update({k: float(v) for k, v in extra_upper.items()})
    if certs:
        name = min(certs, key=lambda k: (certs[k], k))
        est.upper, est.upper_method = certs[name], name
    est.certificates = certs
    for k, v in certs.items():
        if est.lower > v * (1 + 1e-9) + 1e-300:
            raise BracketError(f"lower {est.lower!r} exceeds certificate {k}={v!r}")
    return est
