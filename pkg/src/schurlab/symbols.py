"""Trigonometric and analytic polynomials, the kernels built from them, and
the Hankel/Toeplitz matrix builders.

A :class:`TrigPolynomial` stores a dense coefficient window ``c`` together
with the index ``lo`` of its first entry, so ``f(z) = sum_i c[i] z**(lo+i)``.
An :class:`AnalyticSymbol` is the special case ``lo == 0``.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from numbers import Number

import numpy as np

from .cutoffs import F_DEFAULT, V_PARTITION, SmoothCutoffSpec

MAX_PHI_SCALE = 12


@dataclass(frozen=True, eq=False)
class TrigPolynomial:
    """Finite Laurent polynomial on the unit circle."""

    coeffs: np.ndarray
    lo: int = 0

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).ravel()
        if c.size == 0:
            c = np.zeros(1, dtype=complex)
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "lo", int(self.lo))

    # -- construction helpers ------------------------------------------------
    @classmethod
    def symmetric(cls, coeffs) -> "TrigPolynomial":
        """From a window of odd length ``2d+1`` indexed by ``-d..d``."""
        c = np.asarray(coeffs, dtype=complex).ravel()
        if c.size % 2 != 1:
            raise ValueError("a symmetric window needs odd length")
        return cls(c, -(c.size // 2))

    @classmethod
    def from_dict(cls, mapping: dict) -> "TrigPolynomial":
        if not mapping:
            return cls(np.zeros(1), 0)
        lo, hi = min(mapping), max(mapping)
        c = np.zeros(hi - lo + 1, dtype=complex)
        for k, v in mapping.items():
            c[k - lo] += v
        return cls(c, lo)

    def _like(self, coeffs, lo) -> "TrigPolynomial":
        return TrigPolynomial(coeffs, lo)

    # -- basic queries ---------------------------------------------------------
    @property
    def hi(self) -> int:
        return self.lo + self.coeffs.size - 1

    @property
    def d(self) -> int:
        """Half-width of the smallest symmetric window holding the coefficients."""
        return max(abs(self.lo), abs(self.hi))

    @property
    def span(self) -> int:
        return self.coeffs.size

    @property
    def is_real(self) -> bool:
        """True when ``c_{-k} = conj(c_k)`` for all ``k``, i.e. real values on the circle."""
        d = self.d
        w = self.window(-d, d)
        return bool(np.allclose(w, np.conj(w[::-1]), rtol=0, atol=1e-14 * max(1.0, np.abs(w).max())))

    def coefficient(self, k):
        """Coefficient(s) at integer index ``k``; zero outside the stored window."""
        k = np.asarray(k)
        idx = k - self.lo
        inside = (idx >= 0) & (idx < self.coeffs.size)
        out = np.where(inside, self.coeffs[np.clip(idx, 0, self.coeffs.size - 1)], 0)
        return complex(out) if out.ndim == 0 else out.astype(complex)

    def window(self, a: int, b: int) -> np.ndarray:
        """Dense coefficients on the index range ``a..b`` inclusive."""
        if b < a:
            return np.zeros(0, dtype=complex)
        out = np.zeros(b - a + 1, dtype=complex)
        s, e = max(a, self.lo), min(b, self.hi)
        if s <= e:
            out[s - a : e - a + 1] = self.coeffs[s - self.lo : e - self.lo + 1]
        return out

    def support(self) -> np.ndarray:
        """Indices of nonzero coefficients."""
        return np.flatnonzero(self.coeffs) + self.lo

    def trimmed(self) -> "TrigPolynomial":
        nz = np.flatnonzero(self.coeffs)
        if nz.size == 0:
            return self._like(np.zeros(1), 0)
        return self._like(self.coeffs[nz[0] : nz[-1] + 1], self.lo + nz[0])

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def evaluate(self, theta):
        """Values at ``exp(i theta)``."""
        t = np.asarray(theta, dtype=float)
        k = np.arange(self.lo, self.hi + 1)
        return np.exp(1j * np.multiply.outer(t, k)) @ self.coeffs

    def sup_norm(self, oversample: int = 16) -> float:
        """Maximum modulus on a uniform grid (a lower estimate of the true sup)."""
        from .quadrature import sample_circle

        return float(np.abs(sample_circle(self, oversample * self.span)).max())

    # -- arithmetic -----------------------------------------------------------------
    def _combine(self, other, sign) -> "TrigPolynomial":
        if isinstance(other, Number):
            other = TrigPolynomial([other], 0)
        lo, hi = min(self.lo, other.lo), max(self.hi, other.hi)
        c = self.window(lo, hi) + sign * other.window(lo, hi)
        return _result(self, other, c, lo)

    def __add__(self, other):
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self._like(-self.coeffs, self.lo)

    def __mul__(self, other):
        if isinstance(other, Number):
            return self._like(self.coeffs * other, self.lo)
        if isinstance(other, TrigPolynomial):
            return _result(self, other, np.convolve(self.coeffs, other.coeffs), self.lo + other.lo)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self._like(self.coeffs / scalar, self.lo)

    def conj_reflect(self) -> "TrigPolynomial":
        """The function ``conj(f(z))`` on the circle: ``k -> conj(c_{-k})``."""
        return TrigPolynomial(np.conj(self.coeffs[::-1]), -self.hi)

    def allclose(self, other, atol: float = 1e-12) -> bool:
        lo, hi = min(self.lo, other.lo), max(self.hi, other.hi)
        return bool(np.allclose(self.window(lo, hi), other.window(lo, hi), rtol=0, atol=atol))

    def __repr__(self):
        return f"{type(self).__name__}(lo={self.lo}, hi={self.hi}, nnz={np.count_nonzero(self.coeffs)})"


@dataclass(frozen=True, eq=False)
class AnalyticSymbol(TrigPolynomial):
    """Polynomial ``sum_{k=0}^{d} c_k z^k`` (Taylor coefficients of a symbol)."""

    def __post_init__(self):
        super().__post_init__()
        if self.lo != 0:
            raise ValueError("analytic symbols start at index 0; use TrigPolynomial otherwise")

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def _like(self, coeffs, lo):
        return _analytic_or_trig(coeffs, lo)


def _analytic_or_trig(coeffs, lo):
    if lo >= 0:
        c = np.concatenate([np.zeros(lo, dtype=complex), np.asarray(coeffs, dtype=complex)])
        return AnalyticSymbol(c)
    return TrigPolynomial(coeffs, lo)


def _result(a, b, coeffs, lo):
    if isinstance(a, AnalyticSymbol) and (isinstance(b, AnalyticSymbol) or not isinstance(b, TrigPolynomial)):
        return _analytic_or_trig(coeffs, lo)
    return TrigPolynomial(coeffs, lo)


def as_symbol(obj) -> TrigPolynomial:
    """Coerce arrays (Taylor coefficients) or polynomials to a :class:`TrigPolynomial`."""
    if isinstance(obj, TrigPolynomial):
        return obj
    return AnalyticSymbol(np.atleast_1d(np.asarray(obj, dtype=complex)))


def as_analytic(obj) -> AnalyticSymbol:
    f = as_symbol(obj)
    if isinstance(f, AnalyticSymbol):
        return f
    if f.lo < 0 and np.any(f.coeffs[: min(-f.lo, f.span)]):
        raise ValueError("symbol has negative-frequency coefficients")
    return AnalyticSymbol(f.window(0, max(f.hi, 0)))


def monomial(k: int, coeff: complex = 1.0) -> TrigPolynomial:
    return _analytic_or_trig([coeff], k)


# -- matrices -------------------------------------------------------------------

def hankel_matrix(psi, rows: int, cols: int | None = None) -> np.ndarray:
    """``rows x cols`` matrix with entry ``(j, k) = psi^(j + k)``."""
    cols = rows if cols is None else cols
    if rows < 1 or cols < 1:
        raise ValueError("matrix dimensions must be positive")
    c = as_symbol(psi).window(0, rows + cols - 2)
    idx = np.add.outer(np.arange(rows), np.arange(cols))
    return c[idx]


def toeplitz_matrix(t, n: int, cols: int | None = None, shift: int = 0) -> np.ndarray:
    """Matrix with entry ``(j, k) = t_{j - k - shift}``, zero-extended beyond the window."""
    cols = n if cols is None else cols
    if n < 1 or cols < 1:
        raise ValueError("matrix dimensions must be positive")
    a, b = -(cols - 1) - shift, n - 1 - shift
    c = as_symbol(t).window(a, b)
    idx = np.subtract.outer(np.arange(n), np.arange(cols)) - shift - a
    return c[idx]


def split_hankel_lower(psi, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Split the ``n x n`` Hankel window into strictly-lower (``j > k``) and remaining parts."""
    G = hankel_matrix(psi, n, n)
    low = np.tril(G, -1)
    return low, G - low


# -- sampled polynomials and dyadic blocks ---------------------------------------------

def sampled_polynomial(F: SmoothCutoffSpec = F_DEFAULT, m: int = 1) -> TrigPolynomial:
    """``sum_k F(k/m) z^k`` over ``|k| <= radius(F) * m``."""
    if m < 1:
        raise ValueError("m must be a positive integer")
    R = F.radius
    if not math.isfinite(R):
        raise ValueError("sampled polynomials need a compactly supported cutoff")
    K = int(math.floor(R * m + 1e-9))
    k = np.arange(-K, K + 1)
    return TrigPolynomial(F(k / m), -K)


@functools.lru_cache(maxsize=None)
def _checked_partition(spec: SmoothCutoffSpec) -> bool:
    spec.validate_partition()
    return True


def dyadic_block(psi, n: int, v: SmoothCutoffSpec = V_PARTITION) -> TrigPolynomial:
    """Littlewood-Paley block ``psi * V_n``.

    For ``n >= 1`` coefficient ``k > 0`` is multiplied by ``v(k / 2**n)``; for
    ``n <= -1`` the same is done on negative frequencies with ``|k|``; block 0
    keeps the coefficients at ``|k| <= 1``. The blocks sum to ``psi``.
    """
    _checked_partition(v)
    f = as_symbol(psi)
    n = int(n)
    if n == 0:
        a, b = -1, 1
        return f._like(f.window(a, b), a).trimmed()
    L = 2 ** abs(n)
    # support of v(|k|/L) is L/2 < |k| < 2L
    a, b = L // 2 + 1, 2 * L - 1
    if n < 0:
        a, b = -b, -a
    c = f.window(a, b)
    if not np.any(c):
        return f._like(np.zeros(1), 0)
    k = np.arange(a, b + 1)
    return f._like(c * v(np.abs(k) / L), a).trimmed()


def dyadic_range(psi) -> list[int]:
    """Block indices that can be nonzero for ``psi``, in increasing order."""
    f = as_symbol(psi).trimmed()
    out = []
    if f.lo < -1:
        out += [-n for n in range(_top_block(-f.lo), 0, -1)]
    if f.lo <= 1 and f.hi >= -1:
        out.append(0)
    if f.hi > 1:
        out += list(range(1, _top_block(f.hi) + 1))
    return out


def _top_block(K: int) -> int:
    # largest n with K > 2**(n-1)
    return max(1, (K - 1).bit_length() + 1)


# -- kernels ---------------------------------------------------------------------

def dirichlet_kernel(n: int) -> TrigPolynomial:
    """``D_n = sum_{|k| <= n} z^k``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return TrigPolynomial(np.ones(2 * n + 1), -n)


def fejer_square(n: int) -> TrigPolynomial:
    """``Q_n = D_n**2 / (2n+1)``, coefficients ``(2n+1-|k|)/(2n+1)`` on ``|k| <= 2n``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    k = np.arange(-2 * n, 2 * n + 1)
    return TrigPolynomial((2 * n + 1 - np.abs(k)) / (2 * n + 1), -2 * n)


def fejer_square_values(n: int, t) -> np.ndarray:
    """``Q_n(e^{it})`` in closed form, ``sin((2n+1)t/2)**2 / ((2n+1) sin(t/2)**2)``."""
    t = np.asarray(t, dtype=float)
    L = 2 * n + 1
    s = np.sin(t / 2)
    small = np.abs(s) < 1e-12
    with np.errstate(divide="ignore", invalid="ignore"):
        val = np.sin(L * t / 2) ** 2 / (L * s**2)
    return np.where(small, float(L), val)


def _dirichlet_power_int(L: int, q: int) -> np.ndarray:
    """Exact integer coefficients of ``D_L**q`` (indices ``-qL..qL``) as an object array."""
    c = np.array([1], dtype=object)
    w = 2 * L + 1
    for _ in range(q):
        # convolution with a block of w ones == moving-window sum of width w
        padded = np.concatenate([np.zeros(w - 1, dtype=object), c, np.zeros(w - 1, dtype=object)])
        cs = np.concatenate([np.zeros(1, dtype=object), np.cumsum(padded)])
        c = cs[w:] - cs[:-w]
    return c


def phi_witness(n: int, N: int) -> AnalyticSymbol:
    """``z**(4**n) * D_{2**n}**(N+1) / (2**(n+1)+1)**N`` as an analytic symbol.

    Coefficients are formed from exact integers and rounded once.
    """
    if N < 1 or n < N:
        raise ValueError(f"need N >= 1 and n >= N, got n={n}, N={N}")
    if n > MAX_PHI_SCALE:
        raise ValueError(f"n={n} exceeds the supported coefficient window (n <= {MAX_PHI_SCALE})")
    L = 2**n
    num = _dirichlet_power_int(L, N + 1)
    den = (2 * L + 1) ** N
    c = np.array([x / den for x in num], dtype=float)
    lo = 4**n - (N + 1) * L
    return _analytic_or_trig(c, lo)


# -- symbol transforms ------------------------------------------------------------------

def backward_shift(psi, k: int = 1) -> AnalyticSymbol:
    """``(S*)**k``: drop the first ``k`` Taylor coefficients."""
    if k < 0:
        raise ValueError("shift must be nonnegative")
    f = as_analytic(psi)
    c = f.coeffs[k:]
    return AnalyticSymbol(c if c.size else np.zeros(1))


def arithmetic_restriction(psi, N: int, s: int) -> AnalyticSymbol:
    """``f`` with ``f^(j) = psi^(jN + s)``."""
    if N < 1 or not 0 <= s < N:
        raise ValueError("need N >= 1 and 0 <= s < N")
    c = as_analytic(psi).coeffs[s::N]
    return AnalyticSymbol(c if c.size else np.zeros(1))


def rotate(psi, theta: float) -> TrigPolynomial:
    """``z -> psi(e^{i theta} z)``: coefficient ``k`` picks up ``e^{ik theta}``."""
    f = as_symbol(psi)
    k = np.arange(f.lo, f.hi + 1)
    return f._like(f.coeffs * np.exp(1j * theta * k), f.lo)
