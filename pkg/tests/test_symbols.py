import math

import numpy as np
import pytest
from scipy.special import gamma

from schurlab.cutoffs import F_DEFAULT, OMEGA, V_PARTITION, SmoothCutoffSpec, omega_plateau, smooth_step, v_bump
from schurlab.formats import dumps_matrix, dumps_measure, dumps_symbol, loads_matrix, loads_measure, loads_symbol
from schurlab.quadrature import QuadratureWarning, lp_norm, lp_norm_batch, lp_quadrature
from schurlab.symbols import (
    AnalyticSymbol,
    TrigPolynomial,
    arithmetic_restriction,
    backward_shift,
    dirichlet_kernel,
    dyadic_block,
    dyadic_range,
    fejer_square,
    fejer_square_values,
    hankel_matrix,
    monomial,
    phi_witness,
    rotate,
    sampled_polynomial,
    split_hankel_lower,
    toeplitz_matrix,
)


class TestCutoffs:
    def test_smooth_step(self):
        t = np.linspace(-0.5, 1.5, 401)
        b = smooth_step(t)
        assert np.all(b[t <= 0] == 0) and np.all(b[t >= 1] == 1)
        assert np.allclose(b + smooth_step(1 - t), 1.0, atol=1e-15)
        assert np.all(np.diff(b) >= 0)

    def test_partition_of_unity(self):
        V_PARTITION.validate_partition()
        x = np.exp(np.linspace(0, math.log(1000), 5000))
        total = sum(v_bump(x / 2.0**n) for n in range(12))
        assert np.max(np.abs(total - 1)) < 1e-12

    def test_plateau(self):
        OMEGA.validate_plateau()
        F_DEFAULT.validate_plateau()
        assert omega_plateau(np.array([0.0, 1.0, -1.0]))[...].tolist() == [1.0, 1.0, 1.0]
        assert float(omega_plateau(2.0)) == 0.0
        assert OMEGA.support == (-2.0, 2.0) and F_DEFAULT.radius == 1.0

    def test_custom_samples(self):
        F = SmoothCutoffSpec("custom-samples", samples=([0.0, 1.0], [1.0, 0.0]))
        assert float(F(-0.5)) == pytest.approx(0.5)
        assert F.support == (-1.0, 1.0)
        with pytest.raises(ValueError):
            SmoothCutoffSpec("custom-samples")
        with pytest.raises(ValueError):
            SmoothCutoffSpec("nope")
        with pytest.raises(ValueError):
            SmoothCutoffSpec(scale=0)


class TestPolynomials:
    def test_arithmetic(self):
        f = TrigPolynomial([1, 2], -1)
        g = AnalyticSymbol([0, 0, 3])
        h = f + g
        assert h.lo == -1 and h.coefficient(np.array([-1, 0, 2])).tolist() == [1, 2, 3]
        assert isinstance(g * 2, AnalyticSymbol)
        assert (f - f).trimmed().is_zero()

    def test_monomial_and_shift(self):
        m = monomial(3, 2.0)
        assert isinstance(m, AnalyticSymbol) and m.degree == 3
        assert backward_shift(m, 2).coefficient(1) == 2.0
        assert backward_shift(m, 5).is_zero()

    def test_rotate(self):
        f = AnalyticSymbol([1.0, 1.0, 1.0])
        g = rotate(f, 0.3)
        assert np.allclose(g.coeffs, np.exp(1j * 0.3 * np.arange(3)))

    def test_arithmetic_restriction(self):
        f = AnalyticSymbol(np.arange(10.0))
        assert arithmetic_restriction(f, 3, 1).coeffs.real.tolist() == [1.0, 4.0, 7.0]

    def test_hankel_toeplitz(self):
        psi = AnalyticSymbol([1, 2, 3, 4])
        H = hankel_matrix(psi, 3, 2)
        assert H.real.tolist() == [[1, 2], [2, 3], [3, 4]]
        t = TrigPolynomial([5, 6, 7], -1)
        T = toeplitz_matrix(t, 2, 3)
        assert T.real.tolist() == [[6, 5, 0], [7, 6, 5]]
        lower, rest = split_hankel_lower(psi, 3)
        assert np.array_equal(lower + rest, hankel_matrix(psi, 3, 3))
        assert np.all(np.triu(lower) == 0)

    def test_dirichlet_fejer(self):
        assert dirichlet_kernel(2).coeffs.tolist() == [1] * 5
        q = fejer_square(3)
        t = np.linspace(0, 2 * np.pi, 17)
        direct = np.real(np.exp(1j * np.outer(t, np.arange(q.lo, q.hi + 1))) @ q.coeffs)
        assert np.allclose(fejer_square_values(3, t), direct, atol=1e-12)
        assert fejer_square_values(3, 0.0) == pytest.approx(7.0)

    def test_phi_witness(self):
        # N = 1: z**(4**n) D**2 / (2**(n+1) + 1); L1 norm exactly 1
        f = phi_witness(2, 1)
        assert f.lo == 0 and f.hi == 16 + 8
        assert lp_norm(f, 1.0) == pytest.approx(1.0, rel=1e-6)
        assert f.coefficient(16) == pytest.approx(9 / 9)
        with pytest.raises(ValueError):
            phi_witness(1, 2)

    def test_sampled_polynomial(self):
        f = sampled_polynomial(F_DEFAULT, 4)
        assert f.lo == -4 and f.hi == 4 and f.coefficient(0) == 1.0

    def test_dyadic_blocks(self):
        for n in range(6):
            b = dyadic_block(monomial(2**n), n)
            assert b.coefficient(2**n) == pytest.approx(1.0)
        psi = TrigPolynomial(np.arange(1.0, 40.0), -13)
        total = sum((dyadic_block(psi, n) for n in dyadic_range(psi)), TrigPolynomial([0.0]))
        assert np.allclose((total - psi).coeffs, 0, atol=1e-13)


class TestQuadrature:
    @pytest.mark.parametrize("p, rel", [(1 / 3, 5e-4), (0.5, 1e-4), (1.0, 1e-6), (2.0, 1e-12)])
    def test_one_plus_z(self, p, rel):
        # int |1 + z|^p dm = Gamma(p + 1) / Gamma(p/2 + 1)^2; the zero at z = -1 slows small p
        exact = (gamma(p + 1) / gamma(p / 2 + 1) ** 2) ** (1 / p)
        assert lp_norm(AnalyticSymbol([1.0, 1.0]), p, 64) == pytest.approx(exact, rel=rel)

    def test_monomials_and_batch(self):
        assert lp_norm(monomial(7, 3.0), 0.5) == pytest.approx(3.0)
        c = np.array([[1.0, 0, 0], [0, 0, 2.0]])
        assert np.allclose(lp_norm_batch(c, 0.5), [1.0, 2.0])

    def test_result_and_warning(self):
        r = lp_quadrature(AnalyticSymbol([1.0, 1.0]), 0.5)
        assert r.points >= 8 and r.value > 0
        with pytest.warns(QuadratureWarning):
            lp_quadrature(AnalyticSymbol([1.0, 1.0]), 0.05, 4)
        with pytest.raises(ValueError):
            lp_quadrature(AnalyticSymbol([1.0]), 0.5, 1)


class TestFormats:
    def test_matrix_roundtrip(self):
        A = np.array([[1 + 2j, 1 / 3], [np.pi, -1e-300]])
        assert np.array_equal(loads_matrix(dumps_matrix(A)), A)
        with pytest.raises(ValueError):
            loads_matrix("2 2\n1 0\n")

    def test_symbol_roundtrip(self):
        c, lo = loads_symbol(dumps_symbol([0, 1 / 7, 0, 2j], lo=-2))
        assert lo == -1 and c.tolist() == [1 / 7, 0, 2j]
        c, lo = loads_symbol("# comment\n3 1\n")
        assert lo == 3 and c.tolist() == [1]

    def test_measure_roundtrip(self):
        th, w = loads_measure(dumps_measure([0.1, 2.0], [1, -1j]))
        assert th.tolist() == [0.1, 2.0] and w.tolist() == [1, -1j]
