"""Dense complex linear algebra: Schatten quasi-norms, Schur products and the
exponent bookkeeping shared by the rest of the package."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
import scipy.linalg

#: singular values below ``SV_FLOOR * s_max`` are treated as exact zeros
SV_FLOOR = 1e-14


class NumericError(ArithmeticError):
    """Raised when a decomposition fails to converge."""


@dataclass(frozen=True)
class PExponent:
    """A validated exponent ``p`` in (0, 1] with its derived companions.

    ``p_sharp`` is ``p / (1 - p)`` (``math.inf`` at ``p == 1``) and
    ``p_flat`` is ``2p / (2 - p)``.
    """

    p: float

    def __post_init__(self):
        p = float(self.p)
        if not (0.0 < p <= 1.0) or not math.isfinite(p):
            raise ValueError(f"exponent must lie in (0, 1], got {self.p!r}")
        object.__setattr__(self, "p", p)

    @classmethod
    def of(cls, p: "PExponent | float") -> "PExponent":
        return p if isinstance(p, PExponent) else cls(p)

    @property
    def p_sharp(self) -> float:
        if self.p == 1.0:
            return math.inf
        return self.p / (1.0 - self.p)

    @property
    def p_flat(self) -> float:
        return flat_exponent(self.p)

    @property
    def sharp_is_infinite(self) -> bool:
        return self.p == 1.0

    def __float__(self) -> float:
        return self.p


def flat_exponent(r: float) -> float:
    """``2r / (2 - r)``, defined for any ``0 < r < 2``."""
    if not 0.0 < r < 2.0:
        raise ValueError(f"flat exponent needs 0 < r < 2, got {r}")
    return 2.0 * r / (2.0 - r)


def lq_aggregate(values: Iterable[float], q: float) -> float:
    """``(sum v**q)**(1/q)`` over nonnegative values, ``max`` when ``q`` is infinite.

    Terms are summed in descending order to limit cancellation.
    """
    v = np.asarray(list(values), dtype=float)
    if v.size == 0:
        return 0.0
    if np.any(v < 0):
        raise ValueError("aggregated values must be nonnegative")
    if math.isinf(q):
        return float(v.max())
    v = np.sort(v)[::-1]
    if v[0] == 0.0:
        return 0.0
    # scale out the maximum so large exponents do not overflow
    top = v[0]
    return float(top * math.fsum((v / top) ** q) ** (1.0 / q))


def sharp_aggregate(values: Iterable[float], p: PExponent | float) -> float:
    """Aggregate block norms with exponent ``p#`` (max at ``p == 1``)."""
    return lq_aggregate(values, PExponent.of(p).p_sharp)


def as_matrix(A, name: str = "matrix") -> np.ndarray:
    """Validate and return ``A`` as a 2-D complex array with finite entries."""
    M = np.asarray(A)
    if M.ndim != 2 or M.shape[0] < 1 or M.shape[1] < 1:
        raise ValueError(f"{name} must be a nonempty 2-D array, got shape {M.shape}")
    M = M.astype(complex, copy=False)
    if not np.all(np.isfinite(M)):
        raise ValueError(f"{name} has non-finite entries")
    return M


def singular_values(A) -> np.ndarray:
    """All singular values of ``A`` in descending order."""
    M = as_matrix(A)
    try:
        return np.linalg.svd(M, compute_uv=False)
    except np.linalg.LinAlgError:
        pass
    try:
        return scipy.linalg.svd(M, compute_uv=False, lapack_driver="gesvd")
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericError(
            f"SVD did not converge for {M.shape} matrix "
            f"(max |a| = {np.abs(M).max():.3e}, fro = {np.linalg.norm(M):.3e})"
        ) from exc


def schatten_from_singular(s: np.ndarray, p: float, axis: int = -1) -> np.ndarray:
    """Schatten quasi-norm from precomputed singular values (works batched).

    Values below ``SV_FLOOR * s_max`` along ``axis`` are dropped before powering.
    """
    s = np.asarray(s, dtype=float)
    smax = s.max(axis=axis, keepdims=True) if s.size else s
    kept = np.where(s > SV_FLOOR * smax, s, 0.0)
    if math.isinf(p):
        return kept.max(axis=axis)
    safe = np.where(smax > 0, smax, 1.0)
    ratio = kept / safe
    # ratios are sorted descending by the SVD, so the sum runs largest first
    total = np.sum(ratio**p, axis=axis)
    return np.squeeze(safe, axis=axis) * total ** (1.0 / p)


@dataclass(frozen=True)
class SchattenValue:
    value: float
    p: float
    rank: int = 0
    floor: float = SV_FLOOR

    def __float__(self) -> float:
        return self.value


def schatten_norm(A, p: float) -> SchattenValue:
    """``(sum_j s_j**p)**(1/p)`` over the singular values of ``A``.

    ``p = math.inf`` gives the operator norm.
    """
    p = float(p)
    if not p > 0:
        raise ValueError(f"Schatten exponent must be positive, got {p}")
    s = singular_values(A)
    value = float(schatten_from_singular(s, p))
    rank = int(np.count_nonzero(s > SV_FLOOR * s[0])) if s[0] > 0 else 0
    return SchattenValue(value=value, p=p, rank=rank)


def schur_product(A, B) -> np.ndarray:
    """Entrywise product of two matrices of equal shape."""
    A = as_matrix(A, "A")
    B = as_matrix(B, "B")
    if A.shape != B.shape:
        raise ValueError(f"shape mismatch: {A.shape} vs {B.shape}")
    return A * B


def entrywise_lr_norm(A, r: float) -> float:
    """``(sum |a_jk|**r)**(1/r)``; dominates the S_r norm for ``0 < r <= 2``."""
    if not 0.0 < r <= 2.0:
        raise ValueError(f"entrywise bound needs 0 < r <= 2, got {r}")
    a = np.abs(as_matrix(A)).ravel()
    return lq_aggregate(a, r)


def entrywise_lq_norm(A, q: float) -> float:
    """Entrywise ``l^q`` norm for any ``q > 0`` including infinity."""
    return lq_aggregate(np.abs(as_matrix(A)).ravel(), q)


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR with phase correction."""
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R)
    return Q * (d / np.abs(d))
