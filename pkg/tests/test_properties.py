import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from schurlab.besov import BesovParams, besov_norm
from schurlab.linalg import random_unitary, schatten_norm
from schurlab.multiplier import mult_lower_rank1, upper_certificates
from schurlab.symbols import AnalyticSymbol, TrigPolynomial, dyadic_block, dyadic_range

exponents = st.sampled_from([1 / 3, 0.5, 2 / 3, 1.0])
seeds = st.integers(0, 2**32 - 1)


def cmat(seed, r, c):
    rng = np.random.default_rng(seed)
    return rng.standard_normal((r, c)) + 1j * rng.standard_normal((r, c))


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(1, 6), st.integers(1, 6), exponents)
def test_schatten_p_triangle(seed, r, c, p):
    A, B = cmat(seed, r, c), cmat(seed + 1, r, c)
    lhs = schatten_norm(A + B, p).value ** p
    assert lhs <= (schatten_norm(A, p).value ** p + schatten_norm(B, p).value ** p) * (1 + 1e-10)


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 6), exponents)
def test_unitary_invariance(seed, n, p):
    rng = np.random.default_rng(seed)
    A = cmat(seed, n, n)
    U, V = random_unitary(n, rng), random_unitary(n, rng)
    a, b = schatten_norm(A, p).value, schatten_norm(U @ A @ V, p).value
    assert abs(a - b) <= 1e-9 * a


@settings(max_examples=30, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
                min_size=1, max_size=40), st.integers(-20, 5))
def test_partition_reconstruction(coeffs, lo):
    f = TrigPolynomial(coeffs, lo)
    total = sum((dyadic_block(f, n) for n in dyadic_range(f)), TrigPolynomial([0.0]))
    assert np.allclose((total - f).coeffs, 0, atol=1e-10 * (1 + np.abs(f.coeffs).max()))


@settings(max_examples=25, deadline=None)
@given(seeds, st.integers(1, 5), st.integers(1, 5), exponents)
def test_bracket_soundness(seed, r, c, p):
    A = cmat(seed, r, c)
    low = mult_lower_rank1(A, p, 4, seed % 1000, polish=False).lower
    assert low <= min(upper_certificates(A, p).values()) * (1 + 1e-9)


@settings(max_examples=25, deadline=None)
@given(seeds, st.integers(1, 5), exponents, st.floats(0.1, 10.0))
def test_estimator_homogeneity(seed, n, p, t):
    A = cmat(seed, n, n)
    a = mult_lower_rank1(A, p, 4, 0, polish=False).lower
    b = mult_lower_rank1(t * A, p, 4, 0, polish=False).lower
    assert abs(b - t * a) <= 1e-8 * t * a


@settings(max_examples=20, deadline=None)
@given(seeds, st.integers(1, 40), st.floats(0.25, 2.0), exponents, st.sampled_from([0.5, 1.0, 2.0, np.inf]))
def test_besov_homogeneity(seed, degree, s, p, q):
    psi = AnalyticSymbol(cmat(seed, 1, degree + 1)[0])
    prm = BesovParams(s, p, q)
    assert abs(besov_norm(psi * 3.0, prm) - 3.0 * besov_norm(psi, prm)) <= 1e-9 * besov_norm(psi, prm)
