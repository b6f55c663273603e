"""Brute-force reference values for multipliers of matrices up to 3x3."""

from __future__ import annotations

import math
import numpy as np

from ..linalg import SV_FLOOR, PExponent, as_matrix

RANDOM_SAMPLES = 1_000_000
CHUNK = 100_000


def _sphere_points(dim: int, angles: np.ndarray) -> np.ndarray:
    """Nonnegative unit vectors from angle tuples (shape (n, dim-1))."""
    n = angles.shape[0]
    if dim == 1:
        return np.ones((n, 1))
    if dim == 2:
        a = angles[:, 0]
        return np.stack([np.cos(a), np.sin(a)], axis=1)
    a, b = angles[:, 0], angles[:, 1]
    return np.stack([np.cos(a), np.sin(a) * np.cos(b), np.sin(a) * np.sin(b)], axis=1)


def _singular_squares(M: np.ndarray) -> np.ndarray:
    """Squared singular values of a stack of small matrices, descending."""
    if M.shape[1] > M.shape[2]:
        M = np.conj(np.swapaxes(M, 1, 2))
    k = M.shape[1]
    H = M @ np.conj(np.swapaxes(M, 1, 2))
    if k == 1:
        return H[:, :, 0].real
    if k == 2:
        a, d = H[:, 0, 0].real, H[:, 1, 1].real
        b2 = np.abs(H[:, 0, 1]) ** 2
        tr, det = a + d, np.maximum(a * d - b2, 0.0)
        if M.shape[2] == 2:
            det = np.abs(M[:, 0, 0] * M[:, 1, 1] - M[:, 0, 1] * M[:, 1, 0]) ** 2
        disc = np.sqrt(np.maximum((a - d) ** 2 / 4 + b2, 0.0))
        l1 = tr / 2 + disc
        l2 = np.where(l1 > 0, det / np.where(l1 > 0, l1, 1.0), 0.0)
        return np.stack([l1, l2], axis=1)
    lam = np.linalg.eigvalsh(H)[:, ::-1].clip(min=0.0)
    # the smallest eigenvalue loses relative accuracy; rebuild it from the determinant
    detM = np.abs(np.linalg.det(M)) ** 2
    # only where lam[1] is well above roundoff, and never above lam[1]
    prod = lam[:, 0] * lam[:, 1]
    good = lam[:, 1] > 1e-20 * lam[:, 0]
    rebuilt = detM / np.where(good, prod, 1.0)
    lam[:, 2] = np.where(good, np.minimum(rebuilt, lam[:, 1]), lam[:, 2])
    return lam


def _eval(A, X, Y, ps):
    M = Y[:, :, None] * A[None] * X[:, None, :]
    s = np.sqrt(_singular_squares(M))
    smax = s[:, :1]
    s = np.where(s > SV_FLOOR * smax, s, 0.0)
    safe = np.where(smax > 0, smax, 1.0)
    return np.stack([safe[:, 0] * np.sum((s / safe) ** p, axis=1) ** (1 / p) for p in ps], axis=1)


def _grid(dim, step):
    if dim == 1:
        return np.zeros((1, 0))
    g = np.arange(0.0, math.pi / 2 + 1e-12, step)
    if g[-1] < math.pi / 2:
        g = np.append(g, math.pi / 2)
    if dim == 2:
        return g[:, None]
    a, b = np.meshgrid(g, g, indexing="ij")
    return np.stack([a.ravel(), b.ravel()], axis=1)


def mult_oracle_small(A, p, resolution: float = 0.01, samples: int = RANDOM_SAMPLES, seed: int = 12345):
    """Best rank-one witness value by exhaustive search.

    A coarse grid over the angle parametrization of both nonnegative unit
    spheres is refined around its best points until the step reaches
    ``resolution``; in addition ``samples`` uniformly random pairs are
    evaluated. ``p`` may be a single exponent or a sequence, in which case
    an array of values is returned.
    """
    A = as_matrix(A)
    r, c = A.shape
    if r > 3 or c > 3:
        raise ValueError(f"oracle handles at most 3x3 matrices, got {A.shape}")
    scalar = np.ndim(p) == 0 and not isinstance(p, (list, tuple))
    ps = [PExponent.of(q).p for q in ([p] if scalar else p)]
    if not np.any(A):
        out = np.zeros(len(ps))
        return float(out[0]) if scalar else out

    dr, dc = r - 1, c - 1
    best = np.zeros(len(ps))
    # coarse exhaustive grid
    step = math.pi / 2 / (60 if dr + dc <= 2 else 24 if dr + dc <= 3 else 12)
    gr, gc = _grid(r, step), _grid(c, step)
    seeds = []
    for k0 in range(0, gr.shape[0], max(1, CHUNK // max(1, gc.shape[0]))):
        ar = gr[k0 : k0 + max(1, CHUNK // max(1, gc.shape[0]))]
        ia, ib = np.meshgrid(np.arange(ar.shape[0]), np.arange(gc.shape[0]), indexing="ij")
        ang_r, ang_c = ar[ia.ravel()], gc[ib.ravel()]
        v = _eval(A, _sphere_points(c, ang_c), _sphere_points(r, ang_r), ps)
        best = np.maximum(best, v.max(axis=0))
        for q in range(len(ps)):
            top = np.argsort(-v[:, q])[:8]
            seeds += [(ang_r[i], ang_c[i], q) for i in top]
    # pattern-search zoom around the best coarse points
    dim = dr + dc
    if dim > 0:
        offs = np.array(np.meshgrid(*[[-1.0, 0.0, 1.0]] * dim, indexing="ij")).reshape(dim, -1).T
        for ar0, ac0, q in seeds:
            cur = np.concatenate([ar0, ac0])
            h = step
            for _ in range(2000):
                if h < resolution / 4:
                    break
                pts = np.clip(cur[None] + h * offs, 0.0, math.pi / 2)
                v = _eval(A, _sphere_points(c, pts[:, dr:]), _sphere_points(r, pts[:, :dr]), ps)
                best = np.maximum(best, v.max(axis=0))
                k = int(np.argmax(v[:, q]))
                if np.allclose(pts[k], cur):
                    h /= 2
                cur = pts[k]
    # random samples on the positive orthant of each sphere
    rng = np.random.default_rng(seed)
    for k0 in range(0, samples, CHUNK):
        n = min(CHUNK, samples - k0)
        X = np.abs(rng.standard_normal((n, c)))
        Y = np.abs(rng.standard_normal((n, r)))
        X /= np.linalg.norm(X, axis=1, keepdims=True)
        Y /= np.linalg.norm(Y, axis=1, keepdims=True)
        best = np.maximum(best, _eval(A, X, Y, ps).max(axis=0))
    return float(best[0]) if scalar else best
