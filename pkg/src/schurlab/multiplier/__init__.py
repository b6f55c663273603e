"""Schur multiplier quasi-norms: witness lower bounds, certificates and exact formulas."""

from .bounds import (
    block_diagonal_norm,
    corner_cut,
    hankel_symbol_of,
    mult_exact_row,
    mult_upper_hadamard,
    mult_upper_hankel_poly,
    mult_upper_strips,
    mult_upper_window,
    q_corner,
    strip_aggregate,
    strip_upper_bound,
    toeplitz_symbol_of,
)
from .estimate import (
    BlockPartition,
    BracketError,
    MultiplierEstimate,
    estimate_multiplier,
    mult_lower_rank1,
    refine_witness,
    upper_certificates,
    witness_value,
)
from .hankel import (
    coefficient_bound_check,
    gamma_minus_upper,
    hankel_split_decompose,
    mollified_difference,
    mollifier_convergence,
)
from .oracle import mult_oracle_small

__all__ = [
    "block_diagonal_norm",
    "BlockPartition",
    "BracketError",
    "coefficient_bound_check",
    "corner_cut",
    "estimate_multiplier",
    "gamma_minus_upper",
    "hankel_split_decompose",
    "hankel_symbol_of",
    "mollified_difference",
    "mollifier_convergence",
    "mult_exact_row",
    "mult_lower_rank1",
    "mult_oracle_small",
    "mult_upper_hadamard",
    "mult_upper_hankel_poly",
    "mult_upper_strips",
    "mult_upper_window",
    "MultiplierEstimate",
    "q_corner",
    "refine_witness",
    "strip_aggregate",
    "strip_upper_bound",
    "toeplitz_symbol_of",
    "upper_certificates",
    "witness_value",
]
