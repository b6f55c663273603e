"""Registered finite-scale experiments and their CSV output.

Each experiment maps an :class:`ExperimentConfig` to a list of
:class:`RatioRecord` rows plus a summary dict. Output is deterministic for a
fixed configuration: every random draw is seeded from the configuration, and
grid points are emitted in canonical order.
"""

from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..atomic import greedy_atomic_decompose
from ..besov import BesovParams, LacunarySymbolSpec, besov_norm, gap_necessary_score, lacunary_score
from ..cutoffs import OMEGA, V_PARTITION, SmoothCutoffSpec
from ..lacunary import GapProfile
from ..linalg import PExponent, flat_exponent, schatten_norm
from ..measures import (
    DiscreteMeasure,
    omega_convolution_decay,
    omega_kernel,
    random_measure,
    wiener_mean,
    window_sweep,
)
from ..multiplier.bounds import mult_upper_hankel_poly
from ..multiplier.estimate import BracketError, estimate_multiplier, refine_witness, upper_certificates
from ..multiplier.hankel import coefficient_bound_check, mollifier_convergence
from ..quadrature import lp_norm
from ..symbols import (
    AnalyticSymbol,
    backward_shift,
    dyadic_block,
    fejer_square_values,
    hankel_matrix,
    phi_witness,
    rotate,
    sampled_polynomial,
)
from .config import ExperimentConfig
from .fitting import fit_loglog

DEFAULT_CEILING = 1e3
FULL_SEARCH_DIM = 96


@dataclass
class RatioRecord:
    experiment: str
    parameters: dict
    measured_low: float
    measured_high: float
    reference_scale: float
    ratio_low: float = math.nan
    ratio_high: float = math.nan
    runtime_ms: float = 0.0

    def __post_init__(self):
        if not self.reference_scale > 0:
            raise ValueError(f"{self.experiment}: reference scale must be positive, got {self.reference_scale}")
        if math.isnan(self.ratio_low):
            self.ratio_low = self.measured_low / self.reference_scale
        if math.isnan(self.ratio_high):
            self.ratio_high = self.measured_high / self.reference_scale
        if not (math.isfinite(self.ratio_low) and math.isfinite(self.ratio_high)):
            raise ValueError(f"{self.experiment}: non-finite ratio at {self.parameters}")


@dataclass
class ExperimentResult:
    name: str
    anchor: str
    records: list
    summary: dict = field(default_factory=dict)

    def rows(self, **where) -> list:
        return [r for r in self.records if all(_same(r.parameters.get(k), v) for k, v in where.items())]

    def to_csv(self, timing: bool = False) -> str:
        keys: list[str] = []
        for r in self.records:
            for k in r.parameters:
                if k not in keys:
                    keys.append(k)
        cols = ["experiment", *keys, "measured_low", "measured_high", "reference_scale", "ratio_low", "ratio_high"]
        if timing:
            cols.append("runtime_ms")
        buf = io.StringIO()
        buf.write(f"# anchor: {self.anchor}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in self.records:
            row = [r.experiment, *(_fmt(r.parameters.get(k, "")) for k in keys),
                   _fmt(r.measured_low), _fmt(r.measured_high), _fmt(r.reference_scale),
                   _fmt(r.ratio_low), _fmt(r.ratio_high)]
            if timing:
                row.append(f"{r.runtime_ms:.1f}")
            w.writerow(row)
        return buf.getvalue()


def _fmt(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.12g}"
    return str(v)


def _same(a, b) -> bool:
    if isinstance(a, (int, float)) and isinstance(b, (int, float)):
        return math.isclose(a, b, rel_tol=1e-12, abs_tol=1e-15)
    return a == b


@dataclass(frozen=True)
class _Entry:
    fn: Callable
    anchor: str
    defaults: dict


REGISTRY: dict[str, _Entry] = {}


def register(name: str, anchor: str, **defaults):
    def deco(fn):
        REGISTRY[name] = _Entry(fn, anchor, defaults)
        return fn
    return deco


def registered() -> list[str]:
    return sorted(REGISTRY)


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Run a registered experiment; unknown names list the registry."""
    if config.experiment not in REGISTRY:
        raise KeyError(f"unknown experiment {config.experiment!r}; registered: {', '.join(registered())}")
    entry = REGISTRY[config.experiment]
    unknown = set(config.params) - set(entry.defaults)
    if unknown:
        raise ValueError(f"unknown keys for {config.experiment}: {sorted(unknown)}; "
                         f"accepted: {sorted(entry.defaults)}")
    params = {**entry.defaults, **config.params}
    cfg = ExperimentConfig(config.experiment, params, config.output)
    records, summary = entry.fn(cfg)
    return ExperimentResult(config.experiment, entry.anchor, records, summary)


def experiment(name: str, **params) -> ExperimentResult:
    """Convenience wrapper: ``experiment("fm-scaling", p=[0.5])``."""
    return run_experiment(ExperimentConfig(name, params))


# -- shared helpers --------------------------------------------------------------------------

class _Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.ms = 1e3 * (time.perf_counter() - self.t0)


def _rng(*key) -> np.random.Generator:
    return np.random.default_rng([int(abs(hash_key(k))) for k in key])


def hash_key(k) -> int:
    """Stable integer for seeding from ints, floats and short strings."""
    if isinstance(k, (int, np.integer)):
        return int(k)
    if isinstance(k, float):
        return int(round(k * 1e6))
    return sum((i + 1) * ord(c) for i, c in enumerate(str(k)))


def _cgauss(rng, n) -> np.ndarray:
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


def block_symbol(n: int, seed: int) -> AnalyticSymbol:
    """Random complex coefficients on ``2**(n-1) < k < 2**(n+1)``."""
    rng = _rng(seed, n, "block")
    c = np.zeros(2 ** (n + 1), dtype=complex)
    c[2 ** (n - 1) + 1:] = _cgauss(rng, 2 ** (n + 1) - 2 ** (n - 1) - 1)
    return AnalyticSymbol(c)


def random_symbol(degree: int, seed: int, decay: float = 1.0) -> AnalyticSymbol:
    """Complex Gaussian coefficients damped by ``(1 + k)**-decay``."""
    rng = _rng(seed, degree, "poly")
    k = np.arange(degree + 1)
    return AnalyticSymbol(_cgauss(rng, degree + 1) * (1.0 + k) ** -decay)


def hankel_window_of(psi) -> np.ndarray:
    f = AnalyticSymbol(np.asarray(psi.coeffs)) if not isinstance(psi, AnalyticSymbol) else psi
    n = f.degree + 1
    return hankel_matrix(f, n, n)


def bracket(A, p, *, restarts: int = 8, seed: int = 0, sweeps: int = 4, full_sweeps: int = 60,
            extra_upper: dict | None = None) -> tuple[float, float, str, str]:
    """``(lower, upper, lower_method, upper_method)`` for ``||A||_{M_p}``.

    Small matrices get a full multistart search; larger ones ascend from the
    uniform witness for ``sweeps`` steps.
    """
    A = np.asarray(A, dtype=complex)
    if max(A.shape) <= FULL_SEARCH_DIM:
        est = estimate_multiplier(A, p, restarts, seed, max_sweeps=full_sweeps, extra_upper=extra_upper)
        return est.lower, est.upper, est.lower_method, est.upper_method
    r, c = A.shape
    est = refine_witness(A, np.ones(c), np.ones(r), p, sweeps)
    certs = upper_certificates(A, p)
    if extra_upper:
        certs.update(extra_upper)
    name = min(certs, key=lambda k: (certs[k], k))
    if est.lower > certs[name] * (1 + 1e-9):
        raise BracketError(f"lower {est.lower} exceeds {name}={certs[name]}")
    return est.lower, certs[name], est.lower_method, name


def _variation(values) -> float:
    v = np.asarray([x for x in values if x > 0], dtype=float)
    return float(v.max() / v.min()) if v.size else math.nan


def _params(**kw) -> dict:
    return {k: (float(v) if isinstance(v, np.floating) else v) for k, v in kw.items()}


# -- experiments ---------------------------------------------------------------------------------

@register("fm-scaling", "||F_(m)||_p is comparable to m^(1-1/p) for a compactly supported smooth F",
          p=[1 / 3, 0.5, 1.0], m=[16, 32, 64, 128, 256, 512], cutoff_scale=2.0, oversample=16)
def _fm_scaling(cfg):
    F = SmoothCutoffSpec("omega-plateau", scale=float(cfg.scalar("cutoff_scale", 2.0)))
    ovs = int(cfg.scalar("oversample", 16))
    recs, summary = [], {}
    for p in cfg.grid("p", None):
        ms, vals = [], []
        for m in cfg.grid("m", None):
            with _Timer() as t:
                v = lp_norm(sampled_polynomial(F, int(m)), p, ovs)
            ref = float(m) ** (1 - 1 / p)
            recs.append(RatioRecord("fm-scaling", _params(p=p, m=int(m)), v, v, ref, runtime_ms=t.ms))
            ms.append(m)
            vals.append(v)
        if len(ms) >= 4:
            fit = fit_loglog(ms, vals)
            summary[f"slope[p={p:.6g}]"] = fit.slope
            summary[f"target[p={p:.6g}]"] = 1 - 1 / p
    return recs, summary


@register("hankel-sp-block", "||Gamma_psi||_{S_p} is comparable to 2^(n/p) ||psi||_p for spectrum in (2^(n-1), 2^(n+1))",
          p=[0.5, 2 / 3], n=[4, 5, 6, 7, 8, 9], seed=[0], symbol="random")
def _hankel_sp_block(cfg):
    kind = str(cfg.scalar("symbol", "random"))
    recs, summary = [], {}
    for p in cfg.grid("p", None):
        for seed in cfg.grid("seed", None):
            ratios = []
            for n in cfg.grid("n", None):
                n = int(n)
                with _Timer() as t:
                    if kind == "monomial":
                        c = np.zeros(3 * 2 ** (n - 1) + 1, dtype=complex)
                        c[-1] = 1.0
                        psi = AnalyticSymbol(c)
                    else:
                        psi = block_symbol(n, int(seed))
                    S = schatten_norm(hankel_window_of(psi), p).value
                    ref = 2.0 ** (n / p) * lp_norm(psi, p)
                recs.append(RatioRecord("hankel-sp-block", _params(p=p, seed=int(seed), n=n), S, S, ref,
                                        runtime_ms=t.ms))
                ratios.append(S / ref)
            summary[f"variation[p={p:.6g},seed={seed}]"] = _variation(ratios)
    return recs, summary


@register("hankel-mp-block", "||Gamma_psi||_{M_p} is comparable to 2^(n/p#) ||psi||_p for spectrum in (2^(n-1), 2^(n+1))",
          p=[0.5, 2 / 3], n=[4, 5, 6, 7, 8, 9], seed=[0], restarts=8, sweeps=4)
def _hankel_mp_block(cfg):
    recs, summary = [], {}
    for p in cfg.grid("p", None):
        pe = PExponent.of(p)
        for seed in cfg.grid("seed", None):
            lo_r, hi_r = [], []
            for n in cfg.grid("n", None):
                n = int(n)
                with _Timer() as t:
                    psi = block_symbol(n, int(seed))
                    lo, hi, lm, um = bracket(hankel_window_of(psi), pe, restarts=int(cfg.scalar("restarts", 8)),
                                             seed=int(seed), sweeps=int(cfg.scalar("sweeps", 4)))
                    ref = 2.0 ** (n / pe.p_sharp) * lp_norm(psi, p)
                recs.append(RatioRecord("hankel-mp-block", _params(p=p, seed=int(seed), n=n), lo, hi, ref,
                                        runtime_ms=t.ms))
                lo_r.append(lo / ref)
                hi_r.append(hi / ref)
            summary[f"variation_low[p={p:.6g},seed={seed}]"] = _variation(lo_r)
            summary[f"variation_high[p={p:.6g},seed={seed}]"] = _variation(hi_r)
    return recs, summary


def _besov_refs(psi, pe):
    s = 1.0 / pe.p_sharp if not pe.sharp_is_infinite else 0.0
    sup = besov_norm(psi, BesovParams(s, pe.p, math.inf))
    tot = besov_norm(psi, BesovParams(s, pe.p, pe.p))
    return sup, tot


@register("global-bounds", "sup_n 2^(n/p#)||psi*V_n||_p <~ ||Gamma_psi||_{M_p} <~ (sum_n 2^(n(1-p))||psi*V_n||_p^p)^(1/p)",
          p=[0.5, 2 / 3], d=[4, 5, 6, 7], seed=[0, 1], decay=1.0, restarts=8, sweeps=4)
def _global_bounds(cfg):
    recs, summary = [], {}
    worst_low, worst_high = math.inf, 0.0
    for p in cfg.grid("p", None):
        pe = PExponent.of(p)
        for seed in cfg.grid("seed", None):
            for d in cfg.grid("d", None):
                with _Timer() as t:
                    psi = random_symbol(2 ** int(d) - 1, int(seed), float(cfg.scalar("decay", 1.0)))
                    lo, hi, _, _ = bracket(hankel_window_of(psi), pe, restarts=int(cfg.scalar("restarts", 8)),
                                           seed=int(seed), sweeps=int(cfg.scalar("sweeps", 4)))
                    sup, tot = _besov_refs(psi, pe)
                base = _params(p=p, seed=int(seed), d=int(d))
                recs.append(RatioRecord("global-bounds", {**base, "reference": "sup"}, lo, hi, sup, runtime_ms=t.ms))
                recs.append(RatioRecord("global-bounds", {**base, "reference": "sum"}, lo, hi, tot, runtime_ms=t.ms))
                worst_low = min(worst_low, lo / sup)
                worst_high = max(worst_high, hi / tot)
    summary["min lower/sup_ref"] = worst_low
    summary["max upper/sum_ref"] = worst_high
    summary["ceiling"] = DEFAULT_CEILING
    return recs, summary


def lacunary_amplitudes(family: str, K: int, p) -> tuple[list, list]:
    """Frequencies ``2**j`` (``j = 1..K``) with summable or non-summable weighted scores."""
    pe = PExponent.of(p)
    n = [2**j for j in range(1, K + 1)]
    if pe.sharp_is_infinite:
        lam = [1.0 / j**2 if family == "convergent" else 1.0 for j in range(1, K + 1)]
    elif family == "convergent":
        lam = [2.0 ** (-j / pe.p_sharp) * j ** (-2.0 / pe.p_sharp) for j in range(1, K + 1)]
    elif family == "divergent":
        lam = [2.0 ** (-j / pe.p_sharp) for j in range(1, K + 1)]
    else:
        raise ValueError(f"unknown lacunary family {family!r}")
    return n, lam


@register("lacunary", "for lacunary psi, Gamma_psi in M_p iff {n_j^(1/p#)|lambda_j|} is in l^(p#)",
          p=[0.5], K=[2, 3, 4, 5, 6, 7, 8, 9], family=["convergent", "divergent"], restarts=8, sweeps=4)
def _lacunary(cfg):
    recs, summary = [], {}
    for p in cfg.grid("p", None):
        pe = PExponent.of(p)
        for fam in cfg.grid("family", None):
            Ks, lows, scores = [], [], []
            for K in cfg.grid("K", None):
                K = int(K)
                with _Timer() as t:
                    n, lam = lacunary_amplitudes(str(fam), K, pe)
                    spec = LacunarySymbolSpec(n, lam)
                    psi = spec.symbol()
                    lo, hi, _, _ = bracket(hankel_window_of(psi), pe, restarts=int(cfg.scalar("restarts", 8)),
                                           sweeps=int(cfg.scalar("sweeps", 4)))
                    score = lacunary_score(spec, pe)
                recs.append(RatioRecord("lacunary", _params(p=p, family=str(fam), K=K), lo, hi, score,
                                        runtime_ms=t.ms))
                Ks.append(K)
                lows.append(lo)
                scores.append(score)
            if len(Ks) >= 4:
                summary[f"slope_lower[p={p:.6g},{fam}]"] = fit_loglog(Ks, lows).slope
                summary[f"slope_score[p={p:.6g},{fam}]"] = fit_loglog(Ks, scores).slope
    return recs, summary


def gap_profile(K: int) -> GapProfile:
    """Intervals ``[2*4**k, 3*4**k)``: length ratio 1.5, gap ratio 8/3."""
    return GapProfile([2 * 4**k for k in range(K)], [3 * 4**k for k in range(K)], 2.0, 2.0)


def gapped_symbol(profile: GapProfile, seed: int) -> AnalyticSymbol:
    rng = _rng(seed, len(profile.xi), "gap")
    c = np.zeros(profile.eta[-1], dtype=complex)
    for a, b in zip(profile.xi, profile.eta):
        c[a:b] = _cgauss(rng, b - a)
    return AnalyticSymbol(c)


@register("gap-necessary", "for spectrum in separated intervals, ||psi||_{B^(1/p#)_{p,p#}} <~ ||Gamma_psi||_{M_p}",
          p=[0.5, 2 / 3], K=[1, 2, 3, 4], seed=[0, 1], restarts=8, sweeps=4)
def _gap_necessary(cfg):
    recs, summary = [], {}
    worst = math.inf
    for p in cfg.grid("p", None):
        for seed in cfg.grid("seed", None):
            for K in cfg.grid("K", None):
                with _Timer() as t:
                    prof = gap_profile(int(K))
                    psi = gapped_symbol(prof, int(seed))
                    lo, hi, _, _ = bracket(hankel_window_of(psi), p, restarts=int(cfg.scalar("restarts", 8)),
                                           seed=int(seed), sweeps=int(cfg.scalar("sweeps", 4)))
                    score = gap_necessary_score(psi, prof, p)
                recs.append(RatioRecord("gap-necessary", _params(p=p, seed=int(seed), K=int(K)), lo, hi, score,
                                        runtime_ms=t.ms))
                worst = min(worst, lo / score)
    summary["min lower/score"] = worst
    summary["ceiling"] = DEFAULT_CEILING
    return recs, summary


def sparse_gap_profile(K: int) -> tuple[list, list]:
    """``xi_k = 2**((k+1)(k+2)/2)`` and ``eta_k = xi_k + 2**k``: short, increasingly separated intervals."""
    xi = [2 ** ((k + 1) * (k + 2) // 2) for k in range(K)]
    eta = [x + 2**k for k, x in enumerate(xi)]
    return xi, eta


def sparse_gap_condition(xi, eta, p) -> float:
    """``sum_{k>=1} ((eta_k - xi_k + eta_{k-1}) / eta_k)**(2/p#)``."""
    pe = PExponent.of(p)
    e = 0.0 if pe.sharp_is_infinite else 2.0 / pe.p_sharp
    return float(sum(((eta[k] - xi[k] + eta[k - 1]) / eta[k]) ** e for k in range(1, len(xi))))


@register("gap-sufficient", "for sparse interval spectra, ||Gamma_psi||_{M_p} <~ ||psi||_{B^(1/p#)_{p,p#}}",
          p=[0.5, 2 / 3], K=[1, 2, 3], seed=[0, 1], restarts=8, sweeps=4)
def _gap_sufficient(cfg):
    recs, summary = [], {}
    worst = 0.0
    for p in cfg.grid("p", None):
        pe = PExponent.of(p)
        for seed in cfg.grid("seed", None):
            for K in cfg.grid("K", None):
                with _Timer() as t:
                    xi, eta = sparse_gap_profile(int(K))
                    rng = _rng(seed, K, "sparse")
                    c = np.zeros(eta[-1], dtype=complex)
                    for a, b in zip(xi, eta):
                        c[a:b] = _cgauss(rng, b - a)
                    psi = AnalyticSymbol(c)
                    lo, hi, _, _ = bracket(hankel_window_of(psi), pe, restarts=int(cfg.scalar("restarts", 8)),
                                           seed=int(seed), sweeps=int(cfg.scalar("sweeps", 4)))
                    score = besov_norm(psi, BesovParams(1 / pe.p_sharp, pe.p, pe.p_sharp))
                recs.append(RatioRecord("gap-sufficient", _params(p=p, seed=int(seed), K=int(K)), lo, hi, score,
                                        runtime_ms=t.ms))
                worst = max(worst, hi / score)
                summary[f"condition[p={p:.6g},K={K}]"] = sparse_gap_condition(xi, eta, pe)
    summary["max upper/score"] = worst
    summary["ceiling"] = DEFAULT_CEILING
    return recs, summary


@register("strip-sufficient", "||Gamma_psi||_{M_p} <~ ||psi||_{B^(1/p#)_{r,r_flat}} for p <= r <= min(1, p_flat)",
          p=[0.5, 2 / 3], r=["p"], d=[4, 5, 6, 7], seed=[0], decay=1.0, restarts=8, sweeps=4)
def _strip_sufficient(cfg):
    recs, summary = [], {}
    worst = 0.0
    for p in cfg.grid("p", None):
        pe = PExponent.of(p)
        for rr in cfg.grid("r", None):
            r = pe.p if rr == "p" else (min(1.0, pe.p_flat) if rr == "max" else float(rr))
            if not pe.p - 1e-12 <= r <= min(1.0, pe.p_flat) + 1e-12:
                raise ValueError(f"r={r} outside [p, min(1, p_flat)] for p={p}")
            for seed in cfg.grid("seed", None):
                for d in cfg.grid("d", None):
                    with _Timer() as t:
                        psi = random_symbol(2 ** int(d) - 1, int(seed), float(cfg.scalar("decay", 1.0)))
                        lo, hi, _, _ = bracket(hankel_window_of(psi), pe, restarts=int(cfg.scalar("restarts", 8)),
                                               seed=int(seed), sweeps=int(cfg.scalar("sweeps", 4)))
                        score = besov_norm(psi, BesovParams(1 / pe.p_sharp, r, flat_exponent(r)))
                    recs.append(RatioRecord("strip-sufficient", _params(p=p, r=r, seed=int(seed), d=int(d)),
                                            lo, hi, score, runtime_ms=t.ms))
                    worst = max(worst, hi / score)
    summary["max upper/score"] = worst
    summary["ceiling"] = DEFAULT_CEILING
    return recs, summary


@register("bozejko-score", "||Gamma_psi||_{M_p} <~ ||psi||_{B^(1/p#)_{2,p#}}",
          p=[0.5, 2 / 3, 1.0], d=[4, 5, 6, 7], seed=[0], decay=1.0, restarts=8, sweeps=4)
def _l2_besov_score(cfg):
    recs, summary = [], {}
    worst = 0.0
    for p in cfg.grid("p", None):
        pe = PExponent.of(p)
        s = 0.0 if pe.sharp_is_infinite else 1 / pe.p_sharp
        q = math.inf if pe.sharp_is_infinite else pe.p_sharp
        for seed in cfg.grid("seed", None):
            for d in cfg.grid("d", None):
                with _Timer() as t:
                    psi = random_symbol(2 ** int(d) - 1, int(seed), float(cfg.scalar("decay", 1.0)))
                    lo, hi, _, _ = bracket(hankel_window_of(psi), pe, restarts=int(cfg.scalar("restarts", 8)),
                                           seed=int(seed), sweeps=int(cfg.scalar("sweeps", 4)))
                    score = besov_norm(psi, BesovParams(s, 2.0, q))
                recs.append(RatioRecord("bozejko-score", _params(p=p, seed=int(seed), d=int(d)), lo, hi, score,
                                        runtime_ms=t.ms))
                worst = max(worst, hi / score)
    summary["max upper/score"] = worst
    summary["ceiling"] = DEFAULT_CEILING
    return recs, summary


@register("rn-lower", "||Gamma_psi||_{M_p} >~ 2^(n/p#) ||psi*R_n||_p for every dyadic block",
          p=[0.5, 2 / 3], d=[6], seed=[0, 1], decay=0.5, restarts=8, sweeps=4)
def _rn_lower(cfg):
    recs, summary = [], {}
    worst = math.inf
    for p in cfg.grid("p", None):
        pe = PExponent.of(p)
        for seed in cfg.grid("seed", None):
            for d in cfg.grid("d", None):
                psi = random_symbol(2 ** int(d) - 1, int(seed), float(cfg.scalar("decay", 0.5)))
                with _Timer() as t:
                    lo, hi, _, _ = bracket(hankel_window_of(psi), pe, restarts=int(cfg.scalar("restarts", 8)),
                                           seed=int(seed), sweeps=int(cfg.scalar("sweeps", 4)))
                for n in range(1, int(d) + 2):
                    b = dyadic_block(psi, n, V_PARTITION)
                    if b.is_zero():
                        continue
                    ref = 2.0 ** (n / pe.p_sharp) * lp_norm(b, p)
                    recs.append(RatioRecord("rn-lower", _params(p=p, seed=int(seed), d=int(d), n=n), lo, hi, ref,
                                            runtime_ms=t.ms))
                    worst = min(worst, lo / ref)
    summary["min lower/block_ref"] = worst
    summary["floor"] = 1 / DEFAULT_CEILING
    return recs, summary


@register("toeplitz-measure", "||{mu^(j-k)}||_{M_p} = (sum |w|^p)^(1/p) for discrete mu",
          p=[1 / 3, 0.5, 2 / 3], N=[16, 32, 64, 128, 256], measures=20, max_atoms=4, min_sep=0.3, seed=0,
          sweeps=10)
def _toeplitz_measure(cfg):
    recs, summary = [], {}
    worst, over = math.inf, -math.inf
    seed = int(cfg.scalar("seed", 0))
    for i in range(int(cfg.scalar("measures", 20))):
        atoms = 1 + i % int(cfg.scalar("max_atoms", 4))
        mu = random_measure(_rng(seed, i, "measure"), atoms, float(cfg.scalar("min_sep", 0.3)))
        for p in cfg.grid("p", None):
            with _Timer() as t:
                rows = window_sweep(mu, p, [int(n) for n in cfg.grid("N", None)], sweeps=int(cfg.scalar("sweeps", 10)))
            for r in rows:
                recs.append(RatioRecord("toeplitz-measure", _params(measure=i, atoms=atoms, p=p, N=r.N),
                                        r.lower, r.upper, r.upper, runtime_ms=t.ms / len(rows)))
            worst = min(worst, rows[-1].ratio)
            over = max(over, max(r.ratio for r in rows) - 1)
    summary["min final ratio"] = worst
    summary["max excess"] = over
    return recs, summary


@register("omega-decay", "||mu*Omega_n||_p <~ 2^(n(1-1/p)) for mu in M_p",
          p=[0.5, 2 / 3], n=[4, 5, 6, 7, 8, 9], atoms=[1, 2], seed=0)
def _omega_decay(cfg):
    recs, summary = [], {}
    seed = int(cfg.scalar("seed", 0))
    for atoms in cfg.grid("atoms", None):
        mu = random_measure(_rng(seed, atoms, "omega"), int(atoms))
        for p in cfg.grid("p", None):
            with _Timer() as t:
                rows = omega_convolution_decay(mu, OMEGA, p, [int(n) for n in cfg.grid("n", None)])
            for r in rows:
                recs.append(RatioRecord("omega-decay", _params(atoms=int(atoms), p=p, n=r.n), r.lp, r.lp, r.scale,
                                        runtime_ms=t.ms / len(rows)))
            summary[f"variation[atoms={atoms},p={p:.6g}]"] = _variation([r.ratio for r in rows])
    return recs, summary


def three_atom_target(seed: int = 0):
    """``Omega_4 - 0.6 Omega_5 + (0.4+0.3i) Omega_6`` at seeded shifts."""
    rng = _rng(seed, "atoms")
    s = rng.uniform(0, 2 * math.pi, 3)
    return (omega_kernel(4, shift=s[0]) + omega_kernel(5, shift=s[1]) * (-0.6)
            + omega_kernel(6, shift=s[2]) * (0.4 + 0.3j))


@register("atomic-greedy", "every f in L^p is a sum of shifted Omega_n with sum |a_j|^p 2^(n_j(p-1)) <~ ||f||_p^p",
          p=[0.5], seed=[0, 1, 2], max_terms=12, tol=1e-3)
def _atomic(cfg):
    recs, summary = [], {}
    for p in cfg.grid("p", None):
        for seed in cfg.grid("seed", None):
            f = three_atom_target(int(seed))
            with _Timer() as t:
                dec = greedy_atomic_decompose(f, p, int(cfg.scalar("max_terms", 12)), float(cfg.scalar("tol", 1e-3)))
            for k, e in enumerate(dec.energies, 1):
                recs.append(RatioRecord("atomic-greedy", _params(p=p, seed=int(seed), terms=k), e / dec.initial_energy,
                                        e / dec.initial_energy, 1.0, runtime_ms=t.ms / len(dec.energies)))
            summary[f"terms[p={p:.6g},seed={seed}]"] = len(dec.terms)
            summary[f"relative_energy[p={p:.6g},seed={seed}]"] = dec.relative_energy
            summary[f"decay_factor[p={p:.6g},seed={seed}]"] = dec.decay_factor
            summary[f"weighted_p_sum/||f||_p^p[p={p:.6g},seed={seed}]"] = dec.weighted_p_sum / dec.initial_energy
    return recs, summary


def minimal_phi_order(p: float) -> int:
    """Smallest ``N >= 1`` with ``p (N + 1) > 1``."""
    N = 1
    while p * (N + 1) <= 1:
        N += 1
    return N


def harmonic_witness_partial_sums(p: float, count: int = 9):
    """Yield ``(m, f_m)`` with ``f_m = sum_{n=N}^{m} Phi_n^(N)(e^{i n / 2**n} z) / n``."""
    N = minimal_phi_order(p)
    f = None
    for m in range(N, N + count):
        term = rotate(phi_witness(m, N), m / 2.0**m) * (1.0 / m)
        f = term if f is None else f + term
        yield m, f


@register("witness-besh1", "with a_n = 1/n the Besov B^(1/p#)_{p,p_flat} norms stay bounded while ||f_m||_1 grows like sum 1/n",
          p=[0.9], count=9, oversample=4)
def _harmonic_witness(cfg):
    recs, summary = [], {}
    for p in cfg.grid("p", None):
        pe = PExponent.of(p)
        params = BesovParams(1 / pe.p_sharp, pe.p, pe.p_flat) if not pe.sharp_is_infinite else BesovParams(0, 1, math.inf)
        N = minimal_phi_order(p)
        H, besov, l1, logs = 0.0, [], [], []
        for m, f in harmonic_witness_partial_sums(p, int(cfg.scalar("count", 9))):
            H += 1.0 / m
            with _Timer() as t:
                b = besov_norm(f, params)
                l = lp_norm(f, 1.0, int(cfg.scalar("oversample", 4)))
            recs.append(RatioRecord("witness-besh1", _params(p=p, N=N, m=m), b, l, H, runtime_ms=t.ms))
            besov.append(b)
            l1.append(l)
            logs.append(math.log(m))
        summary[f"besov_variation[p={p:.6g}]"] = _variation(besov)
        summary[f"l1_growth[p={p:.6g}]"] = l1[-1] - l1[0]
        summary[f"log_growth[p={p:.6g}]"] = logs[-1] - logs[0]
        summary[f"harmonic_growth[p={p:.6g}]"] = H - 1.0 / N
    return recs, summary


@register("dirichlet-sum", "sup over the circle of sum_{n<=m} |Q_{2^n}(e^{in/2^n} z)|/(2^(n+1)+1) is bounded in m",
          m=[2, 4, 6, 8, 10, 12, 14], grid=65536)
def _dirichlet_sum(cfg):
    recs, summary = [], {}
    G = int(cfg.scalar("grid", 65536))
    t = 2 * math.pi * np.arange(G) / G
    ms = sorted(int(m) for m in cfg.grid("m", None))
    acc = np.zeros(G)
    n0 = 0
    for m in ms:
        with _Timer() as tm:
            for n in range(n0, m + 1):
                acc += fejer_square_values(2**n, t + n / 2.0**n) / (2 ** (n + 1) + 1)
            n0 = m + 1
        v = float(acc.max())
        recs.append(RatioRecord("dirichlet-sum", _params(m=m, grid=G), v, v, 1.0, runtime_ms=tm.ms))
    summary["max partial sum"] = max(r.measured_high for r in recs)
    return recs, summary


@register("wiener-mean", "(1/(N+1)) sum_{k<=N} |mu^(k)|^2 tends to sum |w|^2 for discrete mu",
          N=[16, 64, 256, 1024, 4096], thetas=[0.7, 2.9], weights=[1.0, 1.0])
def _wiener(cfg):
    recs, summary = [], {}
    mu = DiscreteMeasure(cfg.grid("thetas", None), cfg.grid("weights", None))
    exact = float(np.sum(np.abs(mu.weights) ** 2))
    for N in cfg.grid("N", None):
        with _Timer() as t:
            v = wiener_mean(mu, int(N))
        recs.append(RatioRecord("wiener-mean", _params(N=int(N)), v, v, exact, runtime_ms=t.ms))
    summary["final relative error"] = abs(recs[-1].ratio_low - 1)
    return recs, summary


@register("coefficient-bound", "|psi^(n)| <= (Fejer-weighted local energy)^((1-p)/(2-p)) ||Gamma_psi||_{M_p}^(p/(2-p))",
          p=[0.5, 2 / 3], polys=100, max_degree=32, seed=0)
def _coeff_bound(cfg):
    recs, summary = [], {}
    seed = int(cfg.scalar("seed", 0))
    D = int(cfg.scalar("max_degree", 32))
    violations = 0
    for p in cfg.grid("p", None):
        for i in range(int(cfg.scalar("polys", 100))):
            rng = _rng(seed, i, "coef")
            deg = int(rng.integers(1, D + 1))
            psi = AnalyticSymbol(_cgauss(rng, deg + 1))
            with _Timer() as t:
                U = mult_upper_hankel_poly(psi, p)
                worst = 0.0
                for n in range(D + 1):
                    for m in range(n + 1):
                        chk = coefficient_bound_check(psi, n, m, U, p)
                        violations += not chk.ok
                        if chk.rhs > 0:
                            worst = max(worst, chk.lhs / chk.rhs)
            recs.append(RatioRecord("coefficient-bound", _params(p=p, poly=i, degree=deg), worst, worst, 1.0,
                                    runtime_ms=t.ms))
    summary["violations"] = violations
    summary["max lhs/rhs"] = max(r.measured_high for r in recs)
    return recs, summary


@register("mollifier", "A * Gamma_{F_(m)} -> A in M_p for A with finitely many entries",
          p=[0.5], degree=8, m=[1, 2, 4, 8, 16, 32, 64], seed=0, restarts=8)
def _mollifier(cfg):
    recs, summary = [], {}
    seed = int(cfg.scalar("seed", 0))
    psi = random_symbol(int(cfg.scalar("degree", 8)), seed, 0.0)
    A = hankel_window_of(psi)
    for p in cfg.grid("p", None):
        base = estimate_multiplier(A, p, int(cfg.scalar("restarts", 8)), seed)
        with _Timer() as t:
            rows = mollifier_convergence(A, m_list=[int(m) for m in cfg.grid("m", None)], p=p,
                                         restarts=int(cfg.scalar("restarts", 8)), seed=seed)
        for r in rows:
            recs.append(RatioRecord("mollifier", _params(p=p, m=r.m), r.lower, r.upper, base.upper,
                                    runtime_ms=t.ms / len(rows)))
        summary[f"final upper[p={p:.6g}]"] = rows[-1].upper
    return recs, summary


@register("shift-monotone", "||Gamma_{S*^k psi}||_{M_p} <= ||Gamma_psi||_{M_p}",
          p=[0.5, 2 / 3], degree=12, k=[1, 2, 3, 4], seed=[0, 1, 2], restarts=16)
def _shift(cfg):
    recs, summary = [], {}
    worst = 0.0
    for p in cfg.grid("p", None):
        for seed in cfg.grid("seed", None):
            psi = random_symbol(int(cfg.scalar("degree", 12)), int(seed), 0.0)
            base = estimate_multiplier(hankel_window_of(psi), p, int(cfg.scalar("restarts", 16)), int(seed))
            for k in cfg.grid("k", None):
                with _Timer() as t:
                    g = backward_shift(psi, int(k))
                    est = estimate_multiplier(hankel_window_of(g), p, int(cfg.scalar("restarts", 16)), int(seed))
                recs.append(RatioRecord("shift-monotone", _params(p=p, seed=int(seed), k=int(k)), est.lower,
                                        est.upper, base.upper, runtime_ms=t.ms))
                worst = max(worst, est.lower / base.upper)
    summary["max shifted lower / original upper"] = worst
    return recs, summary
