import math

import numpy as np
import pytest

from schurlab.besov import (
    BesovParams,
    LacunarySymbolSpec,
    besov_blocks,
    besov_norm,
    finite_difference_besov,
    gap_necessary_score,
    lacunary_membership,
    lacunary_score,
)
from schurlab.lacunary import ClassificationError, GapProfile, auto_cover, lacunary_cover
from schurlab.symbols import AnalyticSymbol, monomial


def test_monomial_at_block_centre():
    # z**(2**n) sits where v = 1, so only block n contributes
    for n in range(1, 7):
        for s, p, q in [(0.5, 0.5, 1.0), (2.0, 1.0, math.inf)]:
            assert besov_norm(monomial(2**n), BesovParams(s, p, q)) == pytest.approx(2.0 ** (n * s), rel=1e-9)


def test_blocks_table():
    psi = AnalyticSymbol(np.ones(8))
    rows = besov_blocks(psi, 1.0, 0.5)
    assert [r.n for r in rows] == sorted(r.n for r in rows)
    for r in rows:
        assert r.weighted == pytest.approx(2.0**r.n * r.block_lp)


def test_params_validation():
    with pytest.raises(ValueError):
        BesovParams(1.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        BesovParams(1.0, 0.5, -1.0)


def test_q_nesting_and_zero():
    rng = np.random.default_rng(0)
    psi = AnalyticSymbol(rng.standard_normal(60))
    vals = [besov_norm(psi, BesovParams(1.0, 0.5, q)) for q in (0.5, 1.0, 2.0, math.inf)]
    assert all(b <= a * (1 + 1e-12) for a, b in zip(vals, vals[1:]))
    assert besov_norm(AnalyticSymbol([0.0]), BesovParams(1.0, 0.5, 1.0)) == 0.0


class TestLacunary:
    def test_score(self):
        spec = LacunarySymbolSpec([2, 4, 8], [1.0, 0.5, 0.25])
        # p = 1/2: p# = 1, terms n_j |lam_j| = 2 each
        assert lacunary_score(spec, 0.5) == pytest.approx(6.0)
        assert lacunary_score(spec, 1.0) == 1.0
        assert spec.symbol().coefficient(4) == 0.5

    def test_membership_tail(self):
        spec = LacunarySymbolSpec([2, 4, 8, 16], [2.0**-j for j in range(1, 5)])
        assert lacunary_membership(spec, 0.5).in_Mp
        assert not lacunary_membership(spec, 0.5, tail_decay=0.5).in_Mp
        assert lacunary_membership(spec, 0.5, tail_decay=2.0).in_Mp

    def test_cover(self):
        prof = lacunary_cover([1, 2, 4, 8, 16], 1.5, 1)
        assert len(prof.xi) >= 1 and prof.xi[0] == 1
        prof, rho, N = auto_cover([3, 4, 12, 16, 48, 64])
        assert N >= 1 and rho > 1
        with pytest.raises(ClassificationError):
            lacunary_cover([1, 2, 3, 4, 5, 6, 7, 8], 2.0, 1)

    def test_gap_profile_invariants(self):
        GapProfile((2, 8), (3, 12), 2.0, 2.0)
        with pytest.raises(ValueError):
            GapProfile((2, 4), (3, 6), 2.0, 2.0)
        with pytest.raises(ValueError):
            GapProfile((2,), (8,), 2.0, 2.0)

    def test_gap_score_matches_besov(self):
        prof = GapProfile((2, 8, 32), (3, 12, 48), 2.0, 2.0)
        c = np.zeros(48, dtype=complex)
        for a, b in zip(prof.xi, prof.eta):
            c[a:b] = 1.0
        psi = AnalyticSymbol(c)
        assert gap_necessary_score(psi, prof, 0.5) == pytest.approx(besov_norm(psi, BesovParams(1.0, 0.5, 1.0)))


def test_finite_difference_seminorm():
    d = finite_difference_besov(monomial(4), 0.5, 1.0, grid=512)
    assert d.value >= max(d.rotation_sup, d.radial_sup) - 1e-12
    assert d.value > 0
    assert finite_difference_besov(AnalyticSymbol([1.0]), 0.5, 1.0, grid=64).value == pytest.approx(0.0, abs=1e-12)
