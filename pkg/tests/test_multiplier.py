import math

import numpy as np
import pytest

from schurlab.linalg import PExponent
from schurlab.multiplier import (
    BlockPartition,
    BracketError,
    block_diagonal_norm,
    corner_cut,
    estimate_multiplier,
    gamma_minus_upper,
    hankel_split_decompose,
    hankel_symbol_of,
    mollified_difference,
    mollifier_convergence,
    mult_exact_row,
    mult_lower_rank1,
    mult_oracle_small,
    mult_upper_hadamard,
    mult_upper_hankel_poly,
    mult_upper_strips,
    mult_upper_window,
    q_corner,
    refine_witness,
    strip_aggregate,
    strip_upper_bound,
    toeplitz_symbol_of,
    upper_certificates,
    witness_value,
)
from schurlab.multiplier.hankel import coefficient_bound_check
from schurlab.cutoffs import F_DEFAULT
from schurlab.symbols import AnalyticSymbol, TrigPolynomial, hankel_matrix, monomial, toeplitz_matrix


def cmat(rng, r, c):
    return rng.standard_normal((r, c)) + 1j * rng.standard_normal((r, c))


class TestClosedForms:
    @pytest.mark.parametrize("p", [1 / 3, 0.5, 2 / 3, 1.0])
    def test_identity(self, p):
        pe = PExponent.of(p)
        for n in (1, 3, 5):
            est = estimate_multiplier(np.eye(n), p, 8, 0)
            target = 1.0 if pe.sharp_is_infinite else n ** (1 / pe.p_sharp)
            assert est.lower == pytest.approx(target, rel=1e-6)
            assert est.upper == pytest.approx(target, rel=1e-9)

    def test_all_ones(self):
        est = estimate_multiplier(q_corner(3), 0.5, 8, 0)
        assert est.lower == pytest.approx(1.0, rel=1e-9)

    def test_single_row_exact(self):
        A = np.array([[1.0, -3.0, 2j]])
        assert mult_exact_row(A) == 3.0
        assert mult_exact_row(np.ones((2, 2))) is None
        est = estimate_multiplier(A, 0.5, 4, 0)
        assert est.upper == 3.0 and est.lower == pytest.approx(3.0)

    def test_block_diagonal_norm(self):
        assert block_diagonal_norm([1.0, 1.0, 1.0, 1.0], 0.5) == pytest.approx(4.0)
        assert block_diagonal_norm([1.0, 2.0], 1.0) == 2.0
        assert strip_aggregate([1.0, 1.0], 2 / 3) == pytest.approx(2 ** (1 / PExponent.of(2 / 3).p_flat))


class TestEstimator:
    def test_oracle_small(self):
        rng = np.random.default_rng(11)
        A = cmat(rng, 2, 3)
        ref = mult_oracle_small(A, [0.5, 2 / 3], samples=100_000)
        for q, p in enumerate((0.5, 2 / 3)):
            assert mult_lower_rank1(A, p, 64, 0).lower == pytest.approx(ref[q], rel=1e-3)
        with pytest.raises(ValueError):
            mult_oracle_small(np.ones((4, 4)), 0.5)

    def test_witness_value_consistency(self):
        rng = np.random.default_rng(12)
        A = cmat(rng, 4, 5)
        est = mult_lower_rank1(A, 0.5, 8, 3)
        assert witness_value(A, est.witness_x, est.witness_y, 0.5) == pytest.approx(est.lower, rel=1e-12)
        assert np.linalg.norm(est.witness_x) == pytest.approx(1.0)
        assert est.restarts_used >= 8 and est.seed == 3

    def test_determinism(self):
        A = cmat(np.random.default_rng(13), 5, 5)
        a = estimate_multiplier(A, 1 / 3, 8, 7)
        b = estimate_multiplier(A, 1 / 3, 8, 7)
        assert a.lower == b.lower and a.upper == b.upper and np.array_equal(a.witness_x, b.witness_x)

    def test_refine_never_decreases(self):
        A = cmat(np.random.default_rng(14), 30, 30)
        x = np.ones(30)
        start = witness_value(A, x / np.linalg.norm(x), x / np.linalg.norm(x), 0.5)
        assert refine_witness(A, x, x, 0.5, 3).lower >= start

    def test_bracket_error(self):
        with pytest.raises(BracketError):
            estimate_multiplier(np.eye(3), 0.5, 4, 0, extra_upper={"bogus": 1.0})

    def test_partition_starts(self):
        A = np.zeros((4, 4), dtype=complex)
        A[:2, :2] = [[1, 2], [3, 4]]
        A[2:, 2:] = [[5, 0], [1, 1]]
        part = BlockPartition((0, 2, 4), (0, 2, 4))
        whole = estimate_multiplier(A, 0.5, 8, 0, partition=part)
        per = [estimate_multiplier(A[:2, :2], 0.5, 8, 0).lower, estimate_multiplier(A[2:, 2:], 0.5, 8, 0).lower]
        assert whole.lower >= block_diagonal_norm(per, 0.5) - 1e-9
        with pytest.raises(ValueError):
            BlockPartition((1, 2), (0, 2))

    def test_zero_matrix(self):
        est = estimate_multiplier(np.zeros((3, 3)), 0.5, 4, 0)
        assert est.lower == 0.0 and est.upper == 0.0


class TestCertificates:
    def test_hadamard_p_one_is_operator_norm(self):
        A = cmat(np.random.default_rng(15), 4, 4)
        assert mult_upper_hadamard(A, 1.0) == pytest.approx(np.linalg.norm(A, 2))

    def test_hankel_poly_bound(self):
        psi = AnalyticSymbol([1.0, 1.0])
        # (2m)**(1/p - 1) ||1 + z||_p with m = 2
        assert mult_upper_hankel_poly(psi, 1.0) == pytest.approx(4 / math.pi, rel=1e-5)
        assert mult_upper_hankel_poly(TrigPolynomial([1.0, 1.0], -1), 0.5) > 0

    def test_symbol_recovery(self):
        psi = AnalyticSymbol([1, 2, 3, 4, 5.0])
        assert np.allclose(hankel_symbol_of(hankel_matrix(psi, 3, 3)).coeffs, psi.coeffs)
        assert hankel_symbol_of(np.array([[1, 2], [3, 4.0]])) is None
        t = TrigPolynomial([1, 2, 3.0], -1)
        assert np.allclose(toeplitz_symbol_of(toeplitz_matrix(t, 3, 3)).window(-1, 1), t.coeffs)
        assert mult_upper_window(np.array([[1, 2], [3, 4.0]]), 0.5) is None

    def test_strips(self):
        A = cmat(np.random.default_rng(16), 4, 4)
        v = mult_upper_strips(A, 0.5)
        assert v >= mult_lower_rank1(A, 0.5, 8, 0).lower
        assert strip_upper_bound(A, (0, 1, 2, 3, 4), None, 0.5) >= mult_lower_rank1(A, 0.5, 8, 0).lower

    def test_corner_cut(self):
        A = np.arange(9.0).reshape(3, 3)
        C = corner_cut(A, 1, 2)
        assert C[0].tolist() == [0, 0, 0] and C[1].tolist() == [0, 0, 5]

    def test_certificates_listed(self):
        certs = upper_certificates(hankel_matrix(AnalyticSymbol([1, 2, 3.0]), 2, 2), 0.5)
        assert {"hadamard", "window-interpolation", "strips"} <= set(certs)


class TestHankelTools:
    def test_split_decompose(self):
        rng = np.random.default_rng(17)
        psi = AnalyticSymbol(cmat(rng, 1, 6)[0])
        a, b = cmat(rng, 1, 6)[0], cmat(rng, 1, 6)[0]
        parts = hankel_split_decompose(psi, a, b)
        assert len(parts) == 12
        assert all(np.linalg.matrix_rank(P) <= 1 for P in parts)
        assert np.allclose(np.mean(parts, axis=0), hankel_matrix(psi, 6, 6) * np.outer(a, b), atol=1e-12)
        with pytest.raises(ValueError):
            hankel_split_decompose(psi, a, b, 3)

    def test_coefficient_bound_equality(self):
        for n in (0, 3, 7):
            psi = monomial(n)
            U = (n + 1) ** (1 / PExponent.of(0.5).p_sharp)
            c = coefficient_bound_check(psi, n, n, U, 0.5)
            assert c.ok and c.lhs == pytest.approx(c.rhs, abs=1e-12)
        assert coefficient_bound_check(AnalyticSymbol([0.0]), 2, 1, 0.0, 0.5).ok
        with pytest.raises(ValueError):
            coefficient_bound_check(monomial(1), 1, 2, 1.0, 0.5)

    def test_gamma_minus(self):
        psi = AnalyticSymbol(np.eye(1, 9, 8)[0] + np.eye(1, 9, 2)[0])
        assert gamma_minus_upper(psi, 1.0) == 1.0
        # one entry below the diagonal on j + k = 2, four on j + k = 8
        assert gamma_minus_upper(psi, 0.5) == pytest.approx(1 + 4)
        assert gamma_minus_upper(AnalyticSymbol([0.0]), 0.5) == 0.0

    def test_mollifier(self):
        A = hankel_matrix(AnalyticSymbol([1, -1, 2.0, 0.5]), 4, 4)
        assert np.all(mollified_difference(A, F_DEFAULT, 1)[0, 0] == 0)
        rows = mollifier_convergence(A, m_list=(1, 2, 8, 64), p=0.5, restarts=4)
        assert rows[-1].upper == 0.0
        assert rows[0].upper >= rows[0].lower > 0


def test_oracle_singular_values_match_svd():
    from schurlab.multiplier.oracle import _singular_squares

    rng = np.random.default_rng(18)
    for shape in [(2, 2), (3, 3), (2, 3), (3, 1)]:
        M = rng.standard_normal((500, *shape)) + 1j * rng.standard_normal((500, *shape))
        # scale rows and columns over many orders of magnitude to stress the small values
        M *= 10.0 ** rng.uniform(-6, 0, (500, shape[0], 1)) * 10.0 ** rng.uniform(-6, 0, (500, 1, shape[1]))
        ref = np.linalg.svd(M, compute_uv=False)
        got = np.sqrt(_singular_squares(M))
        assert np.all(np.abs(got - ref) <= 1e-6 * ref[:, :1])
