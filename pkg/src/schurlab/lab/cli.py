"""Command line entry point ``slab``."""

from __future__ import annotations

import argparse
import csv
import math
import sys
import warnings
from fractions import Fraction
from pathlib import Path

import numpy as np

from ..besov import BesovParams, besov_blocks, besov_norm
from ..cutoffs import F_DEFAULT, V_PARTITION, SmoothCutoffSpec
from ..formats import dumps_matrix, dumps_symbol, loads_measure, loads_symbol, read_matrix
from ..linalg import schatten_norm
from ..measures import DiscreteMeasure, measure_mp_norm, omega_kernel, window_lower
from ..multiplier.estimate import UPPER_FAMILIES, BlockPartition, estimate_multiplier
from ..quadrature import QuadratureWarning
from ..symbols import AnalyticSymbol, TrigPolynomial, dirichlet_kernel, fejer_square, hankel_matrix, phi_witness, sampled_polynomial
from .config import ExperimentConfig, parse_scalar
from .experiments import registered, run_experiment
from .verify import SUITES, verify


def _real(text: str) -> float:
    """Accept decimals and fractions such as ``1/3``."""
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        v = parse_scalar(text)
        if isinstance(v, str):
            raise argparse.ArgumentTypeError(f"not a number: {text!r}")
        return float(v)


def _exponent(text: str) -> float:
    v = _real(text)
    if v == math.inf:
        return v
    if not v > 0:
        raise argparse.ArgumentTypeError(f"exponent must be positive, got {text}")
    return v


def _fmt(x) -> str:
    return f"{float(x):.12g}"


def _write(rows, out) -> None:
    w = csv.writer(out, lineterminator="\n")
    for r in rows:
        w.writerow(r)


def _read_symbol(path) -> TrigPolynomial:
    c, lo = loads_symbol(Path(path).read_text())
    if lo < 0:
        return TrigPolynomial(c, lo)
    return AnalyticSymbol(np.concatenate([np.zeros(lo, dtype=complex), c]))


def _read_blocks(path) -> BlockPartition:
    """Two lines of integers: row cuts, then column cuts (``#`` comments allowed)."""
    lines = [ln.split("#", 1)[0].strip() for ln in Path(path).read_text().splitlines()]
    lines = [ln for ln in lines if ln]
    if len(lines) != 2:
        raise ValueError("blocks file needs exactly two lines: row cuts and column cuts")
    rows, cols = ([int(t) for t in ln.replace(",", " ").split()] for ln in lines)
    return BlockPartition(tuple(rows), tuple(cols))


# -- subcommands ---------------------------------------------------------------------------------

def cmd_schatten(a, out) -> int:
    A = read_matrix(a.matrix)
    v = schatten_norm(A, a.p)
    _write([["p", "norm", "rank"], [_fmt(a.p), _fmt(v.value), v.rank]], out)
    return 0


def cmd_multnorm(a, out) -> int:
    A = read_matrix(a.matrix)
    families = UPPER_FAMILIES if a.upper == "all" else (a.upper,)
    part = _read_blocks(a.blocks) if a.blocks else None
    est = estimate_multiplier(A, a.p, a.restarts, a.seed, families=families, partition=part)
    _write([["lower", "upper", "lower_method", "upper_method", "restarts", "seed"],
            [_fmt(est.lower), _fmt(est.upper), est.lower_method, est.upper_method, est.restarts_used, est.seed]], out)
    if a.witness:
        Path(a.witness).write_text(dumps_matrix(est.witness_x.reshape(-1, 1)) + dumps_matrix(est.witness_y.reshape(-1, 1)))
    return 0


def cmd_hankel(a, out) -> int:
    psi = _read_symbol(a.symbol)
    if psi.lo < 0:
        print("error: Hankel symbols must be analytic (k >= 0)", file=sys.stderr)
        return 2
    n = a.size or psi.hi + 1
    A = hankel_matrix(psi, n, n)
    if a.dump:
        out.write(dumps_matrix(A))
        return 0
    est = estimate_multiplier(A, a.p, a.restarts, a.seed)
    sp = schatten_norm(A, a.p).value
    _write([["size", "schatten_p", "lower", "upper", "upper_method"],
            [n, _fmt(sp), _fmt(est.lower), _fmt(est.upper), est.upper_method]], out)
    return 0


def cmd_toeplitz_measure(a, out) -> int:
    th, w = loads_measure(Path(a.measure).read_text())
    mu = DiscreteMeasure(th, w)
    exact = measure_mp_norm(mu, a.p)
    low, method, _ = window_lower(mu, a.window, a.p, a.witness_arc, sweeps=a.sweeps, restarts=a.restarts, seed=a.seed)
    _write([["N", "lower", "upper", "ratio"], [a.window, _fmt(low), _fmt(exact), _fmt(low / exact if exact else math.nan)]],
           out)
    return 0


def cmd_besov(a, out) -> int:
    psi = _read_symbol(a.symbol)
    if a.cutoff != "default":
        print(f"error: unknown cutoff {a.cutoff!r}", file=sys.stderr)
        return 2
    prm = BesovParams(a.s, a.p, a.q)
    out.write(f"# norm = {_fmt(besov_norm(psi, prm, V_PARTITION))}\n")
    _write([["n", "block_lp", "weighted"]] + [[r.n, _fmt(r.block_lp), _fmt(r.weighted)]
                                                for r in besov_blocks(psi, a.s, a.p, V_PARTITION)], out)
    return 0


def cmd_verify(a, out) -> int:
    rep = verify(a.suite, a.seed)
    for line in rep.lines():
        out.write(line + "\n")
    if a.json:
        Path(a.json).write_text(rep.to_json() + "\n")
    else:
        out.write(rep.to_json() + "\n")
    return 0 if rep.passed else 1


def cmd_sweep(a, out) -> int:
    if a.list:
        out.write("\n".join(registered()) + "\n")
        return 0
    if not a.config:
        print("error: a config file is required (or --list)", file=sys.stderr)
        return 2
    cfg = ExperimentConfig.from_file(a.config)
    res = run_experiment(cfg)
    text = res.to_csv(timing=a.timing)
    target = a.output or cfg.output
    if target:
        Path(target).write_text(text)
    else:
        out.write(text)
    for k, v in res.summary.items():
        print(f"# {k} = {_fmt(v) if isinstance(v, (int, float)) else v}", file=sys.stderr)
    return 0


def cmd_kernel(a, out) -> int:
    if a.kind == "dirichlet":
        f = dirichlet_kernel(a.n)
    elif a.kind == "fejer":
        f = fejer_square(a.n)
    elif a.kind == "phi":
        f = phi_witness(a.n, a.order)
    elif a.kind == "omega":
        f = omega_kernel(a.n)
    else:
        spec = F_DEFAULT if a.cutoff_scale is None else SmoothCutoffSpec("omega-plateau", scale=a.cutoff_scale)
        f = sampled_polynomial(spec, a.n)
    out.write(dumps_symbol(f.coeffs, f.lo))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="slab", description="Schur multiplier quasi-norm laboratory.")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("schatten", help="Schatten S_p quasi-norm of a matrix file")
    s.add_argument("--matrix", required=True)
    s.add_argument("--p", type=_exponent, required=True)
    s.set_defaults(fn=cmd_schatten)

    s = sub.add_parser("multnorm", help="bracket the M_p quasi-norm of a matrix")
    s.add_argument("--matrix", required=True)
    s.add_argument("--p", type=_real, required=True)
    s.add_argument("--restarts", type=int, default=32)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--upper", choices=("all", "hadamard", "hankel-poly", "strips"), default="all")
    s.add_argument("--blocks", help="file with row cuts and column cuts")
    s.add_argument("--witness", help="write the witness vectors to this file")
    s.set_defaults(fn=cmd_multnorm)

    s = sub.add_parser("hankel", help="Hankel window of a symbol: S_p and M_p bracket, or --dump")
    s.add_argument("--symbol", required=True)
    s.add_argument("--p", type=_real, default=0.5)
    s.add_argument("--size", type=int, help="window size (default: degree + 1)")
    s.add_argument("--restarts", type=int, default=16)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--dump", action="store_true", help="print the window in matrix format instead")
    s.set_defaults(fn=cmd_hankel)

    s = sub.add_parser("toeplitz-measure", help="window lower bound against the exact M_p norm of a discrete measure")
    s.add_argument("--measure", required=True)
    s.add_argument("--p", type=_real, required=True)
    s.add_argument("--window", type=int, required=True)
    s.add_argument("--witness-arc", type=float, default=None)
    s.add_argument("--sweeps", type=int, default=10)
    s.add_argument("--restarts", type=int, default=0)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(fn=cmd_toeplitz_measure)

    s = sub.add_parser("besov", help="Besov quasi-norm and per-block table")
    s.add_argument("--symbol", required=True)
    s.add_argument("--s", type=_real, required=True)
    s.add_argument("--p", type=_exponent, required=True)
    s.add_argument("--q", type=_exponent, required=True)
    s.add_argument("--cutoff", default="default")
    s.set_defaults(fn=cmd_besov)

    s = sub.add_parser("verify", help="run invariant suites; nonzero exit on failure")
    s.add_argument("suite", nargs="?", default="all", choices=(*SUITES, "all"))
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--json", help="write the JSON summary here instead of stdout")
    s.set_defaults(fn=cmd_verify)

    s = sub.add_parser("sweep", help="run a registered experiment from a config file")
    s.add_argument("config", nargs="?")
    s.add_argument("--output", "-o")
    s.add_argument("--timing", action="store_true", help="add a runtime_ms column (not deterministic)")
    s.add_argument("--list", action="store_true", help="list registered experiments")
    s.set_defaults(fn=cmd_sweep)

    s = sub.add_parser("kernel", help="print a kernel polynomial in symbol format")
    s.add_argument("kind", choices=("dirichlet", "fejer", "phi", "omega", "sampled"))
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--order", type=int, default=1, help="N for the phi witness")
    s.add_argument("--cutoff-scale", type=float, default=None, help="scale for the sampled cutoff")
    s.set_defaults(fn=cmd_kernel)
    return ap


def main(argv=None, out=None) -> int:
    ap = build_parser()
    a = ap.parse_args(argv)
    out = out or sys.stdout
    warnings.simplefilter("ignore", QuadratureWarning)
    try:
        return a.fn(a, out)
    except (ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
