import math

import numpy as np
import pytest

from schurlab.atomic import StagnationError, greedy_atomic_decompose
from schurlab.measures import (
    DiscreteMeasure,
    arc_profile,
    arc_witness,
    fourier_coefficient,
    hankel_window,
    measure_mp_norm,
    omega_convolution_decay,
    omega_kernel,
    random_measure,
    toeplitz_window,
    wiener_mean,
    window_lower,
    window_sweep,
)
from schurlab.quadrature import lp_norm
from schurlab.symbols import AnalyticSymbol


class TestDiscreteMeasure:
    def test_basic(self):
        mu = DiscreteMeasure([0.5, 0.5 + 2 * math.pi + 1.0], [1.0, -2.0])
        assert mu.size == 2 and mu.thetas[1] == pytest.approx(1.5)
        assert mu.min_separation() == pytest.approx(1.0)
        assert measure_mp_norm(mu, 0.5) == pytest.approx((1 + math.sqrt(2)) ** 2)
        assert measure_mp_norm(mu, 1.0) == pytest.approx(3.0)

    def test_rejects_coincident_atoms(self):
        with pytest.raises(ValueError):
            DiscreteMeasure([0.1, 0.1], [1.0, 1.0])

    def test_merge_and_sum(self):
        a = DiscreteMeasure.delta()
        b = DiscreteMeasure([0.0 + 1e-14, 1.0], [1.0, 1.0])
        with pytest.raises(ValueError):
            a + b
        c = a + DiscreteMeasure([1.0, 2.0], [1.0, 1.0])
        assert DiscreteMeasure([0.0, 0.01], [1.0, 2.0]).merged(0.1).weights.tolist() == [3.0]
        assert measure_mp_norm(c, 1.0) == pytest.approx(3.0)
        assert (c * 2).weights.sum() == pytest.approx(6.0)
        assert DiscreteMeasure.empty().size == 0

    def test_fourier(self):
        mu = DiscreteMeasure([1.0, 2.0], [1.0, 1j])
        k = np.arange(-3, 4)
        assert np.allclose(fourier_coefficient(mu, k), np.exp(-1j * k) + 1j * np.exp(-2j * k))

    def test_windows(self):
        mu = DiscreteMeasure([0.3], [2.0])
        T = toeplitz_window(mu, 4)
        assert np.linalg.matrix_rank(T) == 1
        j = np.arange(4)
        assert np.allclose(T, 2 * np.exp(-0.3j * np.subtract.outer(j, j)))
        H = hankel_window(mu, 4, shift=1)
        assert np.allclose(H, 2 * np.exp(-0.3j * (np.add.outer(j, j) - 1)))

    def test_random_measure(self):
        mu = random_measure(np.random.default_rng(0), 4, min_sep=0.5)
        assert mu.size == 4 and mu.min_separation() >= 0.5


class TestWindows:
    def test_single_atom_exact(self):
        mu = DiscreteMeasure([1.0], [1.5])
        low, _, _ = window_lower(mu, 16, 0.5)
        assert low == pytest.approx(1.5, rel=1e-9)

    def test_sweep_monotone_and_bounded(self):
        mu = DiscreteMeasure([0.4, 2.4, 4.0], [1.0, 0.5j, -0.7])
        for p in (1 / 3, 0.5, 2 / 3):
            rows = window_sweep(mu, p, [8, 16, 32, 64, 128])
            exact = measure_mp_norm(mu, p)
            assert all(b.lower >= a.lower for a, b in zip(rows, rows[1:]))
            assert all(r.lower <= exact * (1 + 1e-12) for r in rows)
            assert rows[-1].ratio > 0.9

    def test_hankel_window(self):
        mu = DiscreteMeasure([0.4, 2.4], [1.0, 1.0])
        low, _, _ = window_lower(mu, 128, 0.5, kind="hankel")
        assert 0.9 * measure_mp_norm(mu, 0.5) < low <= measure_mp_norm(mu, 0.5) * (1 + 1e-12)

    def test_arc_witness(self):
        mu = DiscreteMeasure([0.0, math.pi], [1.0, 1.0])
        w = arc_witness(mu, samples=128)
        assert np.linalg.norm(w.x) == pytest.approx(1.0)
        assert w.gram_offdiag < 0.01 and 0 < w.captured <= 1.2
        with pytest.raises(ValueError):
            arc_witness(mu, arc_width=4.0)
        with pytest.raises(ValueError):
            arc_witness(DiscreteMeasure([0.0, 0.2], [1.0, 1.0]), arc_width=0.19, samples=16)
        assert arc_profile(64, 0.5).shape == (64,)


class TestConvolutionAndMeans:
    def test_omega_kernel(self):
        f = omega_kernel(3)
        assert f.lo == -16 and f.hi == 16 and f.coefficient(0) == 1.0
        g = omega_kernel(3, shift=0.4)
        assert lp_norm(g, 0.5) == pytest.approx(lp_norm(f, 0.5), rel=1e-4)

    def test_decay_rows(self):
        mu = DiscreteMeasure([0.0, 2.0], [1.0, 1.0])
        rows = omega_convolution_decay(mu, p=0.5, n_range=range(3, 8))
        ratios = [r.ratio for r in rows]
        assert max(ratios) / min(ratios) < 1.5
        for r in rows:
            assert r.scale == pytest.approx(2.0 ** (r.n * (1 - 1 / 0.5)))

    def test_wiener_mean(self):
        mu = DiscreteMeasure([0.7, 2.9], [1.0, 1.0])
        assert wiener_mean(mu, 4096) == pytest.approx(2.0, rel=0.01)
        assert wiener_mean(DiscreteMeasure([1.0], [3.0]), 10) == pytest.approx(9.0)


class TestAtomic:
    def test_single_atom(self):
        dec = greedy_atomic_decompose(omega_kernel(4, shift=1.0) * 2.0, 0.5, 4, 1e-6)
        assert len(dec.terms) == 1
        t = dec.terms[0]
        assert t.n == 4 and abs(t.alpha - 2.0) < 1e-6 and t.s == pytest.approx(1.0, abs=1e-6)

    def test_strict_decrease(self):
        f = omega_kernel(3) + omega_kernel(5, shift=2.0) * 0.5j
        dec = greedy_atomic_decompose(f, 0.5, 6, 1e-8)
        e = [dec.initial_energy] + dec.energies
        assert all(b < a for a, b in zip(e, e[1:]))
        assert dec.weighted_p_sum > 0 and dec.l1_sum > 0 and 0 <= dec.decay_factor < 1

    def test_validation(self):
        with pytest.raises(ValueError):
            greedy_atomic_decompose(omega_kernel(2), 1.0)
        with pytest.raises(ValueError):
            greedy_atomic_decompose(omega_kernel(2), 0.5, 0)
        assert greedy_atomic_decompose(AnalyticSymbol([0.0]), 0.5).terms == []

    def test_stagnation_error(self):
        # no atom from a single coarse scale fits a far-away frequency
        with pytest.raises(StagnationError) as info:
            greedy_atomic_decompose(AnalyticSymbol(np.eye(1, 200, 199)[0]), 0.5, 3, 1e-12, scales=[0])
        assert info.value.decomposition.terms == []
