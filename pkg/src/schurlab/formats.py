"""Plain-text readers and writers for matrices, symbols and measures.

All floats are written with 17 significant digits so that a write/read cycle
reproduces the binary value exactly.
"""

from __future__ import annotations

import io
from pathlib import Path

import numpy as np

from .linalg import as_matrix


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _lines(src):
    """Yield non-blank, non-comment lines from a path, file or string."""
    if isinstance(src, Path) or (
        isinstance(src, str) and "\n" not in src and len(src) < 4096 and Path(src).is_file()
    ):
        text = Path(src).read_text()
    elif hasattr(src, "read"):
        text = src.read()
    else:
        text = str(src)
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line


# -- matrices ---------------------------------------------------------------

def dumps_matrix(A) -> str:
    M = as_matrix(A)
    out = io.StringIO()
    out.write(f"{M.shape[0]} {M.shape[1]}\n")
    for z in M.ravel():
        out.write(f"{_fmt(z.real)} {_fmt(z.imag)}\n")
    return out.getvalue()


def loads_matrix(src) -> np.ndarray:
    lines = list(_lines(src))
    if not lines:
        raise ValueError("empty matrix text")
    try:
        rows, cols = (int(t) for t in lines[0].split())
    except ValueError as exc:
        raise ValueError(f"bad matrix header {lines[0]!r}") from exc
    body = lines[1:]
    if len(body) != rows * cols:
        raise ValueError(f"expected {rows * cols} entries, found {len(body)}")
    vals = np.array([[float(t) for t in ln.split()[:2]] for ln in body])
    return as_matrix((vals[:, 0] + 1j * vals[:, 1]).reshape(rows, cols))


def write_matrix(path, A) -> None:
    Path(path).write_text(dumps_matrix(A))


def read_matrix(path) -> np.ndarray:
    return loads_matrix(Path(path).read_text())


# -- symbols ("k re im") ----------------------------------------------------

def dumps_symbol(coeffs, lo: int = 0) -> str:
    """Nonzero coefficients ``c[i]`` at index ``lo + i``, one per line."""
    out = io.StringIO()
    for i, c in enumerate(np.asarray(coeffs, dtype=complex)):
        if c != 0:
            out.write(f"{lo + i} {_fmt(c.real)} {_fmt(c.imag)}\n")
    return out.getvalue()


def loads_symbol(src) -> tuple[np.ndarray, int]:
    """Parse "k re im" lines; returns a dense coefficient array and its lowest index.

    Missing indices are zero. An empty text gives the zero symbol at index 0.
    """
    entries: dict[int, complex] = {}
    for line in _lines(src):
        parts = line.split()
        k = int(parts[0])
        re = float(parts[1]) if len(parts) > 1 else 0.0
        im = float(parts[2]) if len(parts) > 2 else 0.0
        entries[k] = entries.get(k, 0) + complex(re, im)
    if not entries:
        return np.zeros(1, dtype=complex), 0
    lo, hi = min(entries), max(entries)
    c = np.zeros(hi - lo + 1, dtype=complex)
    for k, v in entries.items():
        c[k - lo] = v
    return c, lo


# -- measures ("theta re im") ----------------------------------------------

def dumps_measure(thetas, weights) -> str:
    out = io.StringIO()
    for t, w in zip(thetas, np.asarray(weights, dtype=complex)):
        out.write(f"{_fmt(t)} {_fmt(w.real)} {_fmt(w.imag)}\n")
    return out.getvalue()


def loads_measure(src) -> tuple[np.ndarray, np.ndarray]:
    th, w = [], []
    for line in _lines(src):
        parts = line.split()
        th.append(float(parts[0]))
        re = float(parts[1]) if len(parts) > 1 else 0.0
        im = float(parts[2]) if len(parts) > 2 else 0.0
        w.append(complex(re, im))
    return np.array(th, dtype=float), np.array(w, dtype=complex)
