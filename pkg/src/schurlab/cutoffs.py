"""Smooth compactly supported cutoff functions.

One concrete C-infinity step is fixed so that every output is reproducible:

    sigma(t) = exp(-1/t) for t > 0, else 0
    B(t)     = sigma(t) / (sigma(t) + sigma(1 - t))

``B`` rises from 0 at t=0 to 1 at t=1 and satisfies ``B(t) + B(1-t) = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

KINDS = ("v-partition", "omega-plateau", "custom-samples")


def _sigma(t):
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    pos = t > 0
    out[pos] = np.exp(-1.0 / t[pos])
    return out


def smooth_step(t):
    """The step ``B``; equals 0 for t <= 0 and 1 for t >= 1."""
    t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
    a, b = _sigma(t), _sigma(1.0 - t)
    return a / (a + b)


def v_bump(x):
    """Dyadic partition bump: support [1/2, 2], peak ``v(1) = 1``.

    With ``x = 2**u`` it equals ``B(u+1)`` for u in [-1, 0] and ``B(1-u)`` on
    [0, 1], so ``sum_n v(x / 2**n) = 1`` for every ``x >= 1``.
    """
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    u = np.log2(x[pos])
    val = np.where(u <= 0, smooth_step(u + 1.0), smooth_step(1.0 - u))
    val[(u < -1) | (u > 1)] = 0.0
    out[pos] = val
    return out


def omega_plateau(s):
    """Even plateau: 1 on [-1, 1], ``B(2 - |s|)`` on 1 <= |s| <= 2, 0 beyond."""
    a = np.abs(np.asarray(s, dtype=float))
    return np.where(a <= 1.0, 1.0, smooth_step(2.0 - a))


@dataclass(frozen=True, eq=False)
class SmoothCutoffSpec:
    """A cutoff ``F(s) = base(s / scale)``.

    Parameters
    ----------
    kind : {"v-partition", "omega-plateau", "custom-samples"}
    scale : float
        Horizontal dilation; ``omega-plateau`` with ``scale=0.5`` is ``omega(2s)``.
    samples : (x, y) arrays, optional
        Only for ``custom-samples``: nodes with increasing ``x``; the function
        is the piecewise-linear interpolant, zero outside the nodes, and is
        extended evenly when all ``x >= 0``.
    """

    kind: str = "omega-plateau"
    scale: float = 1.0
    samples: tuple | None = field(default=None)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown cutoff kind {self.kind!r}; choose from {KINDS}")
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise ValueError("scale must be positive and finite")
        if self.kind == "custom-samples":
            if self.samples is None:
                raise ValueError("custom-samples needs (x, y) samples")
            x, y = (np.asarray(a, dtype=float) for a in self.samples)
            if x.ndim != 1 or x.shape != y.shape or x.size < 2:
                raise ValueError("samples must be two 1-D arrays of equal length >= 2")
            if np.any(np.diff(x) <= 0) or not np.all(np.isfinite(y)):
                raise ValueError("sample nodes must increase and values be finite")
            x.setflags(write=False)
            y.setflags(write=False)
            object.__setattr__(self, "samples", (x, y))

    def __call__(self, s):
        t = np.asarray(s, dtype=float) / self.scale
        if self.kind == "v-partition":
            return v_bump(t)
        if self.kind == "omega-plateau":
            return omega_plateau(t)
        x, y = self.samples
        if x[0] >= 0:
            t = np.abs(t)
        return np.interp(t, x, y, left=0.0, right=0.0)

    @property
    def support(self) -> tuple[float, float]:
        """Closed interval outside of which the cutoff vanishes."""
        if self.kind == "v-partition":
            return (0.5 * self.scale, 2.0 * self.scale)
        if self.kind == "omega-plateau":
            return (-2.0 * self.scale, 2.0 * self.scale)
        x = self.samples[0]
        lo = -x[-1] if x[0] >= 0 else x[0]
        return (lo * self.scale, x[-1] * self.scale)

    @property
    def radius(self) -> float:
        lo, hi = self.support
        return max(abs(lo), abs(hi))

    def validate_partition(self, grid: int = 20001, tol: float = 1e-10) -> None:
        """Raise unless this is a dyadic partition of unity on [1, inf)."""
        if self.kind != "v-partition" or self.scale != 1.0:
            raise ValueError("dyadic blocks need the unscaled v-partition cutoff")
        x = np.exp(np.linspace(0.0, math.log(64.0), grid))
        total = sum(self(x / 2.0**n) for n in range(0, 9))
        err = float(np.max(np.abs(total - 1.0)))
        if err > tol or np.any(self(x) < 0):
            raise ValueError(f"partition of unity fails (max error {err:.3e})")

    def validate_plateau(self, grid: int = 8001) -> None:
        """Raise unless the cutoff is even, in [0,1], 1 near 0 and compactly supported."""
        lo, hi = self.support
        s = np.linspace(-1.25 * self.radius, 1.25 * self.radius, grid)
        f = self(s)
        if np.any(f < -1e-15) or np.any(f > 1 + 1e-15):
            raise ValueError("cutoff leaves [0, 1]")
        if not np.allclose(f, f[::-1], atol=1e-15):
            raise ValueError("cutoff is not even")
        if abs(float(self(0.0)) - 1.0) > 1e-15:
            raise ValueError("cutoff must equal 1 at the origin")
        if np.any(f[(s < lo) | (s > hi)] != 0):
            raise ValueError("cutoff leaks outside its support")


V_PARTITION = SmoothCutoffSpec("v-partition")
OMEGA = SmoothCutoffSpec("omega-plateau")
#: default cutoff for sampled polynomials: omega(2s), support [-1, 1]
F_DEFAULT = SmoothCutoffSpec("omega-plateau", scale=0.5)
