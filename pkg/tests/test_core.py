import math

import numpy as np
import pytest

from schurlab.linalg import (
    NumericError,
    PExponent,
    entrywise_lq_norm,
    entrywise_lr_norm,
    flat_exponent,
    lq_aggregate,
    random_unitary,
    schatten_norm,
    schur_product,
    sharp_aggregate,
)


def cmat(rng, r, c):
    return rng.standard_normal((r, c)) + 1j * rng.standard_normal((r, c))


class TestPExponent:
    @pytest.mark.parametrize("p, sharp, flat", [(0.5, 1.0, 2 / 3), (2 / 3, 2.0, 1.0), (1 / 3, 0.5, 0.4)])
    def test_companions(self, p, sharp, flat):
        pe = PExponent.of(p)
        assert pe.p_sharp == pytest.approx(sharp, rel=1e-15)
        assert pe.p_flat == pytest.approx(flat, rel=1e-15)

    def test_p_one(self):
        pe = PExponent.of(1.0)
        assert pe.sharp_is_infinite and pe.p_sharp == math.inf and pe.p_flat == 2.0

    @pytest.mark.parametrize("bad", [0.0, -0.5, 1.5, math.nan, math.inf])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            PExponent.of(bad)

    def test_flat_exponent_outside_unit(self):
        assert flat_exponent(1.5) == pytest.approx(6.0)


def test_aggregates():
    assert lq_aggregate([3.0, 4.0], 2) == pytest.approx(5.0)
    assert lq_aggregate([3.0, 4.0], math.inf) == 4.0
    assert lq_aggregate([], 0.5) == 0.0
    # p = 1/2: p# = 1, a plain sum; p = 1: max
    assert sharp_aggregate([1.0, 2.0, 3.0], 0.5) == pytest.approx(6.0)
    assert sharp_aggregate([1.0, 2.0, 3.0], 1.0) == 3.0


class TestSchatten:
    def test_diagonal(self):
        A = np.diag([3.0, 4.0])
        assert schatten_norm(A, 2).value == pytest.approx(5.0)
        assert schatten_norm(A, 1).value == pytest.approx(7.0)
        assert schatten_norm(A, 0.5).value == pytest.approx((math.sqrt(3) + 2) ** 2)

    def test_rank_and_floor(self):
        u = np.arange(1, 5.0)
        A = np.outer(u, u) + 1e-17 * np.eye(4)
        v = schatten_norm(A, 1 / 3)
        assert v.rank == 1
        assert v.value == pytest.approx(float(u @ u), rel=1e-12)

    def test_zero_and_empty(self):
        assert schatten_norm(np.zeros((3, 2)), 0.5).value == 0.0
        with pytest.raises(ValueError):
            schatten_norm(np.zeros((0, 3)), 0.5)

    def test_nonfinite(self):
        with pytest.raises((ValueError, NumericError)):
            schatten_norm(np.array([[np.nan, 1.0]]), 1.0)

    def test_unitary_invariance(self):
        rng = np.random.default_rng(3)
        A = cmat(rng, 6, 6)
        U, V = random_unitary(6, rng), random_unitary(6, rng)
        assert np.allclose(U.conj().T @ U, np.eye(6), atol=1e-12)
        for p in (1 / 3, 1.0, 2.0):
            assert schatten_norm(U @ A @ V, p).value == pytest.approx(schatten_norm(A, p).value, rel=1e-12)

    def test_p_triangle(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            A, B = cmat(rng, 5, 3), cmat(rng, 5, 3)
            for p in (0.25, 0.5, 1.0):
                assert schatten_norm(A + B, p).value ** p <= (schatten_norm(A, p).value ** p
                                                              + schatten_norm(B, p).value ** p) * (1 + 1e-12)


def test_schur_product_shape_check():
    with pytest.raises(ValueError):
        schur_product(np.ones((2, 3)), np.ones((3, 2)))
    assert np.array_equal(schur_product([[1, 2]], [[3, 4]]), np.array([[3, 8]]))


def test_entrywise_norms():
    A = np.array([[3.0, -4.0]])
    assert entrywise_lr_norm(A, 2) == pytest.approx(5.0)
    assert entrywise_lq_norm(A, math.inf) == 4.0
    with pytest.raises(ValueError):
        entrywise_lr_norm(A, 3.0)
    rng = np.random.default_rng(5)
    for r in (1 / 3, 0.5, 1.0, 1.5, 2.0):
        M = cmat(rng, 4, 7)
        assert schatten_norm(M, r).value <= entrywise_lr_norm(M, r) * (1 + 1e-12)
