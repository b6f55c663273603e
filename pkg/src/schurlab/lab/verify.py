"""Seeded assertion suites over the structural invariants of each module.

``verify(suite)`` returns a :class:`VerifyReport`; the CLI prints one line per
check, a JSON summary, and exits nonzero when any check fails.
"""

from __future__ import annotations

import json
import math
import time
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np

from ..atomic import greedy_atomic_decompose
from ..besov import BesovParams, besov_norm
from ..linalg import PExponent, entrywise_lr_norm, random_unitary, schatten_norm, schur_product
from ..measures import hankel_window, measure_mp_norm, omega_kernel, random_measure, window_lower, window_sweep
from ..multiplier.bounds import block_diagonal_norm, mult_upper_hadamard, mult_upper_hankel_poly
from ..multiplier.estimate import BlockPartition, estimate_multiplier, mult_lower_rank1, upper_certificates, witness_value
from ..quadrature import QuadratureWarning, lp_norm
from ..symbols import AnalyticSymbol, TrigPolynomial, backward_shift, dyadic_block, dyadic_range, fejer_square_values, hankel_matrix

SUITES = ("core", "symbols", "besov", "multiplier", "measures")
TOL = 1e-9


@dataclass
class Check:
    suite: str
    name: str
    instances: int
    violations: int
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.violations == 0 and self.instances > 0


@dataclass
class VerifyReport:
    checks: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def lines(self) -> list[str]:
        return [f"{'PASS' if c.passed else 'FAIL'} {c.suite}/{c.name}: {c.violations}/{c.instances} violations"
                + (f" ({c.detail})" if c.detail else "") for c in self.checks]

    def to_json(self) -> str:
        return json.dumps({
            "passed": self.passed,
            "seconds": round(self.seconds, 3),
            "checks": [{**asdict(c), "passed": c.passed} for c in self.checks],
        }, indent=2, sort_keys=True)


def _cmat(rng, r, c):
    return rng.standard_normal((r, c)) + 1j * rng.standard_normal((r, c))


def _cpoly(rng, d, lo=0):
    c = rng.standard_normal(d + 1) + 1j * rng.standard_normal(d + 1)
    return AnalyticSymbol(c) if lo == 0 else TrigPolynomial(c, lo)


# -- core ------------------------------------------------------------------------------------------

def _core(rng) -> list[Check]:
    out = []
    bad = n = 0
    for _ in range(100):
        r, c = rng.integers(1, 12, 2)
        A, B = _cmat(rng, r, c), _cmat(rng, r, c)
        for p in (1 / 3, 0.5, 2 / 3, 1.0):
            n += 1
            lhs = schatten_norm(A + B, p).value ** p
            rhs = schatten_norm(A, p).value ** p + schatten_norm(B, p).value ** p
            bad += lhs > rhs * (1 + TOL)
    out.append(Check("core", "p-triangle", n, bad))

    bad = n = 0
    worst = 0.0
    for _ in range(100):
        k = int(rng.integers(1, 12))
        A = _cmat(rng, k, k)
        U, V = random_unitary(k, rng), random_unitary(k, rng)
        for p in (1 / 3, 0.5, 1.0, 2.0):
            n += 1
            a, b = schatten_norm(A, p).value, schatten_norm(U @ A @ V, p).value
            err = abs(a - b) / a
            worst = max(worst, err)
            bad += err > 1e-9
    out.append(Check("core", "unitary-invariance", n, bad, f"max rel err {worst:.2e}"))

    bad = n = 0
    for _ in range(100):
        r, c = rng.integers(1, 10, 2)
        A, B = _cmat(rng, r, c), _cmat(rng, r, c)
        pr, pc = rng.permutation(r), rng.permutation(c)
        n += 1
        bad += not np.array_equal(schur_product(A[pr][:, pc], B[pr][:, pc]), schur_product(A, B)[pr][:, pc])
    out.append(Check("core", "permutation-compatibility", n, bad))

    bad = n = 0
    for _ in range(100):
        r, c = rng.integers(1, 12, 2)
        A = _cmat(rng, r, c)
        for q in (1 / 3, 0.5, 1.0, 1.5, 2.0):
            n += 1
            bad += schatten_norm(A, q).value > entrywise_lr_norm(A, q) * (1 + TOL)
    out.append(Check("core", "schatten-entrywise", n, bad))
    return out


# -- symbols -----------------------------------------------------------------------------------

def _symbols(rng) -> list[Check]:
    out = []
    bad = n = 0
    for _ in range(100):
        d = int(rng.integers(0, 80))
        lo = int(rng.integers(-40, 1))
        psi = _cpoly(rng, d, lo)
        total = None
        for k in dyadic_range(psi):
            b = dyadic_block(psi, k)
            total = b if total is None else total + b
        n += 1
        diff = (total - psi).trimmed() if total is not None else psi
        bad += not (diff.is_zero() or np.abs(diff.coeffs).max() <= 1e-12 * np.abs(psi.coeffs).max())
    out.append(Check("symbols", "partition-reconstruction", n, bad))

    bad = n = 0
    for _ in range(100):
        psi = _cpoly(rng, int(rng.integers(0, 40)))
        vals = [lp_norm(psi, p) for p in (1 / 3, 0.5, 2 / 3, 1.0, 2.0)]
        n += 1
        bad += any(a > b * (1 + 1e-9) for a, b in zip(vals, vals[1:]))
    out.append(Check("symbols", "lp-monotone-in-p", n, bad))

    bad = n = 0
    worst = 0.0
    for _ in range(100):
        d = int(rng.integers(0, 40))
        psi = _cpoly(rng, d)
        sup = float(np.abs(np.fft.fft(psi.coeffs, 1 << 14)).max())
        for p in (1 / 3, 0.5, 1.0):
            n += 1
            rhs = math.e * (d + 1) ** (1 / p) * lp_norm(psi, p)
            worst = max(worst, sup / rhs)
            bad += sup > rhs * (1 + TOL)
    out.append(Check("symbols", "bernstein-sup-bound", n, bad, f"max ratio {worst:.3f}"))

    bad = n = 0
    worst = 0.0
    for _ in range(100):
        d = int(rng.integers(0, 40))
        psi = _cpoly(rng, d)
        for p in (1 / 3, 0.5, 2 / 3):
            n += 1
            pe = PExponent.of(p)
            rhs = math.e ** (1 - p) * (d + 1) ** (1 / pe.p_sharp) * lp_norm(psi, p)
            lhs = lp_norm(psi, 1.0)
            worst = max(worst, lhs / rhs)
            bad += lhs > rhs * (1 + TOL)
    out.append(Check("symbols", "l1-from-lp-bound", n, bad, f"max ratio {worst:.3f}"))

    G = 1 << 15
    t = 2 * math.pi * np.arange(G) / G
    acc = np.zeros(G)
    sups = []
    for m in range(0, 13):
        acc += fejer_square_values(2**m, t + m / 2.0**m) / (2 ** (m + 1) + 1)
        sups.append(float(acc.max()))
    # increments must die out: the last four steps add less than the first step
    late = sups[-1] - sups[-5]
    out.append(Check("symbols", "dirichlet-sum-bounded", len(sups), int(late > sups[0]),
                     f"sup {sups[-1]:.3f}, last four increments {late:.3f}"))
    return out


# -- besov -----------------------------------------------------------------------------------------

def _besov(rng) -> list[Check]:
    out = []
    bad = n = 0
    for _ in range(30):
        psi = _cpoly(rng, int(rng.integers(1, 64)))
        lam = complex(*rng.standard_normal(2))
        prm = BesovParams(float(rng.uniform(0, 3)), float(rng.choice([0.5, 1.0])), float(rng.choice([0.5, 1.0, 2.0])))
        n += 1
        a, b = besov_norm(psi * lam, prm), abs(lam) * besov_norm(psi, prm)
        bad += abs(a - b) > 1e-9 * b
    out.append(Check("besov", "homogeneity", n, bad))

    bad = n = 0
    for _ in range(30):
        f, g = _cpoly(rng, int(rng.integers(1, 64))), _cpoly(rng, int(rng.integers(1, 64)))
        for q in (0.5, 1.0):
            # blocks use the L^p quasi-norm, so the triangle exponent is min(p, q)
            prm = BesovParams(1.0, q, q)
            n += 1
            lhs = besov_norm(f + g, prm) ** q
            bad += lhs > (besov_norm(f, prm) ** q + besov_norm(g, prm) ** q) * (1 + 1e-6)
    out.append(Check("besov", "q-triangle", n, bad))

    bad = n = 0
    for _ in range(30):
        psi = _cpoly(rng, int(rng.integers(1, 128)))
        vals = [besov_norm(psi, BesovParams(1.5, 0.5, q)) for q in (0.25, 0.5, 1.0, 2.0, math.inf)]
        n += 1
        bad += any(b > a * (1 + 1e-9) for a, b in zip(vals, vals[1:]))
    out.append(Check("besov", "q-nesting", n, bad))

    bad = n = 0
    lo_r, hi_r = math.inf, 0.0
    for k in range(30):
        nn = 2 + k % 6
        c = np.zeros(2 ** (nn + 1), dtype=complex)
        c[2 ** (nn - 1) + 1:] = rng.standard_normal(c.size - 2 ** (nn - 1) - 1) + 1j * rng.standard_normal(c.size - 2 ** (nn - 1) - 1)
        psi = AnalyticSymbol(c)
        for p in (0.5, 2 / 3):
            r = besov_norm(psi, BesovParams(1 / p, p, p)) / (2 ** (nn / p) * lp_norm(psi, p))
            lo_r, hi_r = min(lo_r, r), max(hi_r, r)
            n += 1
            bad += not 0.05 <= r <= 20
    out.append(Check("besov", "single-block-scaffold", n, bad, f"ratio range [{lo_r:.3f}, {hi_r:.3f}]"))
    return out


# -- multiplier ----------------------------------------------------------------------------------

def _multiplier(rng) -> list[Check]:
    out = []
    bad = n = 0
    for i in range(200):
        r, c = rng.integers(1, 9, 2)
        A = _cmat(rng, r, c) if i % 3 else np.abs(_cmat(rng, r, c))
        p = float(rng.choice([1 / 3, 0.5, 2 / 3, 1.0]))
        est = estimate_multiplier(A, p, restarts=4, seed=i, max_sweeps=60, polish=False)
        n += 1
        bad += est.lower > min(est.certificates.values()) * (1 + TOL)
    out.append(Check("multiplier", "bracket-soundness", n, bad))

    bad = n = 0
    for i in range(100):
        A = _cmat(rng, *rng.integers(1, 6, 2))
        lam = float(rng.uniform(0.1, 10))
        p = float(rng.choice([0.5, 2 / 3]))
        e1 = estimate_multiplier(A, p, 2, i, max_sweeps=40, polish=False)
        e2 = estimate_multiplier(lam * A, p, 2, i, max_sweeps=40, polish=False)
        n += 1
        bad += abs(e2.upper - lam * e1.upper) > 1e-8 * lam * e1.upper
        bad += abs(e2.lower - lam * e1.lower) > 1e-6 * lam * e1.lower
    out.append(Check("multiplier", "homogeneity", n, bad))

    bad = n = 0
    worst = 0.0
    for i in range(100):
        r, c = rng.integers(2, 4, 2)
        A = _cmat(rng, r, c)
        pr, pc = rng.permutation(r), rng.permutation(c)
        a = mult_lower_rank1(A, 0.5, 16, i).lower
        b = mult_lower_rank1(A[pr][:, pc], 0.5, 16, i).lower
        n += 1
        err = abs(a - b) / a
        worst = max(worst, err)
        bad += err > 1e-4
    out.append(Check("multiplier", "permutation-invariance", n, bad, f"max rel diff {worst:.2e}"))

    bad = n = 0
    for i in range(100):
        sizes = rng.integers(1, 4, int(rng.integers(2, 4)))
        blocks = [_cmat(rng, s, s) for s in sizes]
        A = np.zeros((sizes.sum(), sizes.sum()), dtype=complex)
        cuts = np.concatenate([[0], np.cumsum(sizes)])
        for B, a, b in zip(blocks, cuts, cuts[1:]):
            A[a:b, a:b] = B
        p = float(rng.choice([0.5, 2 / 3]))
        part = BlockPartition(tuple(cuts), tuple(cuts))
        ests = [estimate_multiplier(B, p, 4, i, max_sweeps=60) for B in blocks]
        whole = estimate_multiplier(A, p, 4, i, partition=part, max_sweeps=60)
        n += 1
        bad += whole.lower < block_diagonal_norm([e.lower for e in ests], p) - 1e-6
        bad += whole.lower > block_diagonal_norm([e.upper for e in ests], p) * (1 + TOL)
    out.append(Check("multiplier", "block-diagonal-formula", n, bad))

    bad = n = bad5 = 0
    for i in range(100):
        sizes = rng.integers(1, 4, int(rng.integers(2, 4)))
        cuts = np.concatenate([[0], np.cumsum(sizes)])
        N = int(cuts[-1])
        O = np.triu(_cmat(rng, N, N))
        for a, b in zip(cuts, cuts[1:]):
            O[a:b, a:b] = _cmat(rng, b - a, b - a)
        O = np.where(np.add.outer(np.searchsorted(cuts, np.arange(N), "right"),
                                  -np.searchsorted(cuts, np.arange(N), "right")) <= 0, O, 0)
        p = float(rng.choice([1 / 3, 0.5, 2 / 3]))
        n += 1
        diag = [O[a:b, a:b] for a, b in zip(cuts, cuts[1:])]
        lhs = sum(schatten_norm(D, p).value ** p for D in diag)
        bad += lhs > schatten_norm(O, p).value ** p * (1 + 1e-9)
        pe = PExponent.of(p)
        lows = [mult_lower_rank1(D, p, 2, i, max_sweeps=40, polish=False).lower for D in diag]
        up = min(upper_certificates(O, p).values())
        bad5 += sum(v ** pe.p_sharp for v in lows) > up ** pe.p_sharp * (1 + 1e-9)
    out.append(Check("multiplier", "triangular-diagonal-schatten", n, bad))
    out.append(Check("multiplier", "triangular-diagonal-multiplier", n, bad5))

    bad = n = 0
    for _ in range(100):
        A1, A2 = _cmat(rng, 4, 5), _cmat(rng, 4, 5)
        p = float(rng.choice([1 / 3, 0.5, 2 / 3, 1.0]))
        n += 1
        lhs = mult_upper_hadamard(A1 + A2, p) ** p
        bad += lhs > (mult_upper_hadamard(A1, p) ** p + mult_upper_hadamard(A2, p) ** p) * (1 + TOL)
        psi1, psi2 = _cpoly(rng, 6), _cpoly(rng, 6)
        lhs = mult_upper_hankel_poly(psi1 + psi2, p) ** p
        bad += lhs > (mult_upper_hankel_poly(psi1, p) ** p + mult_upper_hankel_poly(psi2, p) ** p) * (1 + 1e-6)
    out.append(Check("multiplier", "certificate-p-triangle", n, bad))

    bad = n = 0
    for i in range(100):
        A = _cmat(rng, 6, 6)
        rows = np.sort(rng.choice(6, int(rng.integers(1, 6)), replace=False))
        cols = np.sort(rng.choice(6, int(rng.integers(1, 6)), replace=False))
        sub = mult_lower_rank1(A[np.ix_(rows, cols)], 0.5, 2, i, max_sweeps=40, polish=False)
        x, y = np.zeros(6), np.zeros(6)
        x[cols], y[rows] = sub.witness_x, sub.witness_y
        full = mult_lower_rank1(A, 0.5, 2, i, starts=[(x, y)], max_sweeps=40, polish=False)
        n += 1
        bad += full.lower < sub.lower * (1 - 1e-12) or abs(witness_value(A, x, y, 0.5) - sub.lower) > 1e-9 * sub.lower
    out.append(Check("multiplier", "submatrix-monotonicity", n, bad))

    bad = n = 0
    for i in range(100):
        d = int(rng.integers(2, 10))
        psi = _cpoly(rng, d)
        p = float(rng.choice([0.5, 2 / 3]))
        up = min(upper_certificates(hankel_matrix(psi, d + 1, d + 1), p).values())
        g = backward_shift(psi, 1)
        low = mult_lower_rank1(hankel_matrix(g, d, d), p, 2, i, max_sweeps=40, polish=False).lower
        n += 1
        bad += low > up * (1 + TOL)
    out.append(Check("multiplier", "shift-monotonicity", n, bad))
    return out


# -- measures ------------------------------------------------------------------------------------

def _measures(rng) -> list[Check]:
    out = []
    bad = bad_mono = n = 0
    for i in range(20):
        mu = random_measure(rng, 3)
        for p in (1 / 3, 0.5, 2 / 3):
            exact = measure_mp_norm(mu, p)
            rows = window_sweep(mu, p, [8, 16, 32, 64], sweeps=6)
            n += 1
            bad += any(r.lower > exact * (1 + TOL) for r in rows)
            bad_mono += any(b.lower < a.lower for a, b in zip(rows, rows[1:]))
    out.append(Check("measures", "toeplitz-dominance", n, bad))
    out.append(Check("measures", "window-monotone", n, bad_mono))

    bad = n = 0
    for i in range(34):
        mu = random_measure(rng, int(rng.integers(1, 4)))
        for p in (1 / 3, 0.5, 2 / 3):
            exact = measure_mp_norm(mu, p)
            low, _, _ = window_lower(mu, 32, p, kind="hankel", sweeps=6)
            up = min(upper_certificates(hankel_window(mu, 32), p).values())
            n += 1
            bad += low > exact * (1 + TOL) or low > up * (1 + TOL)
    out.append(Check("measures", "hankel-dominance", n, bad))

    bad = n = 0
    worst = 0.0
    for i in range(20):
        mu = random_measure(rng, int(rng.integers(1, 3)))
        base, _, _ = window_lower(mu, 128, 0.5, sweeps=10)
        for m in range(-4, 5):
            v, _, _ = window_lower(mu, 128, 0.5, shift=m, sweeps=10)
            n += 1
            err = abs(v - base) / base
            worst = max(worst, err)
            bad += err > 0.05
    out.append(Check("measures", "shift-invariance", n, bad, f"max rel diff {worst:.3g}"))

    bad = n = 0
    for i in range(3):
        s = rng.uniform(0, 2 * math.pi, 2)
        f = omega_kernel(3, shift=s[0]) + omega_kernel(5, shift=s[1]) * 0.7j
        dec = greedy_atomic_decompose(f, 0.5, 6, 1e-6)
        e = [dec.initial_energy] + dec.energies
        n += len(dec.energies)
        bad += sum(b >= a for a, b in zip(e, e[1:]))
    out.append(Check("measures", "greedy-strict-decrease", n, bad))
    return out


_SUITE_FNS = {"core": _core, "symbols": _symbols, "besov": _besov, "multiplier": _multiplier, "measures": _measures}


def verify(suite: str = "all", seed: int = 0) -> VerifyReport:
    """Run one suite (or ``"all"``) with fixed seeds."""
    names = SUITES if suite == "all" else (suite,)
    for s in names:
        if s not in _SUITE_FNS:
            raise ValueError(f"unknown suite {s!r}; choose from {', '.join(SUITES)} or all")
    t0 = time.perf_counter()
    report = VerifyReport()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", QuadratureWarning)
        for k, s in enumerate(names):
            report.checks.extend(_SUITE_FNS[s](np.random.default_rng([seed, k, SUITES.index(s)])))
    report.seconds = time.perf_counter() - t0
    return report
