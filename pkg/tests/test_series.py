import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paritymzi.series import (
    BivariateJet,
    DualScalar,
    QuadraticForm,
    cos,
    exp,
    jet_exp_quadratic,
    jet_mixed_derivative,
    legendre_imag_realified,
    legendre_p,
    sin,
    sqrt,
)

# power-basis coefficients of P_0 .. P_12, lowest degree first
_LEGENDRE_COEFFS = [np.polynomial.legendre.leg2poly([0] * n + [1]) for n in range(13)]


def test_legendre_low_orders():
    assert legendre_p(0, 0.7) == 1.0
    assert legendre_p(1, 0.5) == 0.5
    x = math.cosh(0.3)
    assert legendre_p(2, x) == pytest.approx((3 * x * x - 1) / 2, rel=1e-15)


def test_legendre_rejects_bad_input():
    with pytest.raises(ValueError):
        legendre_p(2, math.inf)
    with pytest.raises(ValueError):
        legendre_p(-1, 0.3)


@pytest.mark.parametrize("n", range(13))
def test_legendre_matches_explicit_polynomial(n):
    for x in np.linspace(-2, 2, 41):
        expected = np.polynomial.polynomial.polyval(x, _LEGENDRE_COEFFS[n])
        assert legendre_p(n, x) == pytest.approx(expected, rel=1e-12, abs=1e-12)


def test_imag_legendre_examples():
    assert legendre_imag_realified(0, 2.3) == 1.0
    assert legendre_imag_realified(1, 0.7) == 0.7
    s = 0.304520
    assert legendre_imag_realified(2, s) == pytest.approx((1 + 3 * s * s) / 2, rel=1e-15)
    assert legendre_imag_realified(2, s) == pytest.approx(0.63910, abs=1e-5)


@pytest.mark.parametrize("l", range(13))
def test_imag_legendre_against_complex_evaluation(l):
    for s in np.linspace(0.0, 3.0, 31):
        p = np.polynomial.polynomial.polyval(1j * s, _LEGENDRE_COEFFS[l])
        via_complex = math.factorial(l) * (-1j * s) ** l * p
        got = math.factorial(l) * s**l * legendre_imag_realified(l, s)
        assert abs(via_complex.imag) <= 1e-12 * max(1.0, abs(via_complex))
        assert got == pytest.approx(via_complex.real, rel=1e-12, abs=1e-300)
        if s > 0:
            assert got > 0


# ---------------------------------------------------------------------------
# jets
# ---------------------------------------------------------------------------


def _random_jet(rng, oh, og):
    return BivariateJet(rng.normal(size=(oh + 1, og + 1)))


def test_jet_grid_shape():
    j = BivariateJet.constant(2.0, 3, 1)
    assert j.coeffs.shape == (4, 2)
    assert (j.order_h, j.order_g) == (3, 1)
    assert np.all(np.isfinite(j.coeffs))


@given(st.integers(0, 4), st.integers(0, 4), st.integers(0, 2**31 - 1))
@settings(max_examples=40, deadline=None)
def test_jet_product_matches_polynomial_product(oh, og, seed):
    rng = np.random.default_rng(seed)
    a, b = _random_jet(rng, oh, og), _random_jet(rng, oh, og)
    full = np.zeros((2 * oh + 1, 2 * og + 1))
    for i in range(oh + 1):
        for j in range(og + 1):
            full[i : i + oh + 1, j : j + og + 1] += a.coeffs[i, j] * b.coeffs
    np.testing.assert_allclose((a * b).coeffs, full[: oh + 1, : og + 1], rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose((a * b).coeffs, (b * a).coeffs, rtol=1e-12, atol=1e-12)
    np.testing.assert_array_equal((a + b).coeffs, (b + a).coeffs)


@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 2**31 - 1))
@settings(max_examples=30, deadline=None)
def test_jet_ring_axioms(oh, og, seed):
    rng = np.random.default_rng(seed)
    a, b, c = (_random_jet(rng, oh, og) for _ in range(3))
    np.testing.assert_allclose(((a * b) * c).coeffs, (a * (b * c)).coeffs, rtol=1e-10, atol=1e-10)
    np.testing.assert_allclose((a * (b + c)).coeffs, (a * b + a * c).coeffs, rtol=1e-10, atol=1e-10)
    one = BivariateJet.constant(1.0, oh, og)
    np.testing.assert_array_equal((a * one).coeffs, a.coeffs)


def test_jet_shape_mismatch_rejected():
    with pytest.raises(ValueError):
        BivariateJet.constant(1.0, 2, 2) + BivariateJet.constant(1.0, 2, 1)


def test_exp_of_zero_is_one():
    j = jet_exp_quadratic(QuadraticForm(), 3, 2)
    expected = np.zeros((4, 3))
    expected[0, 0] = 1.0
    np.testing.assert_array_equal(j.coeffs, expected)


def test_exp_of_cross_term():
    j = jet_exp_quadratic(QuadraticForm(cross=1.0), 2, 2)
    expected = np.diag([1.0, 1.0, 0.5])
    np.testing.assert_allclose(j.coeffs, expected, rtol=0, atol=1e-15)
    assert jet_mixed_derivative(j, 2, 2) == pytest.approx(2.0, rel=1e-15)


@given(
    st.floats(-3, 3, allow_nan=False),
    st.floats(-3, 3, allow_nan=False),
    st.floats(-3, 3, allow_nan=False),
)
@settings(max_examples=50, deadline=None)
def test_exp_mixed_coefficient(a, b, c):
    j = jet_exp_quadratic(QuadraticForm(lin_h=a, lin_g=b, cross=c), 1, 1)
    assert jet_mixed_derivative(j, 1, 1) == pytest.approx(a * b + c, rel=1e-12, abs=1e-12)


def test_exp_matches_direct_taylor_coefficients():
    # g-free slice: a truncated Taylor polynomial of exp(a h + s h^2)
    a, s = 0.7, -0.4
    j = jet_exp_quadratic(QuadraticForm(lin_h=a, sq_h=s), 6, 0)
    hs = np.linspace(-1e-2, 1e-2, 7)
    approx = [sum(j.coeffs[n, 0] * h**n for n in range(7)) for h in hs]
    exact = [math.exp(a * h + s * h * h) for h in hs]
    np.testing.assert_allclose(approx, exact, rtol=1e-14)


def test_exp_rejects_non_finite():
    with pytest.raises(ValueError):
        jet_exp_quadratic(QuadraticForm(cross=math.nan), 1, 1)


def test_mixed_derivative_out_of_range():
    j = jet_exp_quadratic(QuadraticForm(cross=1.0), 2, 1)
    assert jet_mixed_derivative(BivariateJet.constant(1.0, 0, 0), 0, 0) == 1.0
    with pytest.raises(IndexError):
        jet_mixed_derivative(j, 2, 2)
    with pytest.raises(IndexError):
        jet_mixed_derivative(j, 3, 0)


@pytest.mark.parametrize("r", [0.1, 0.3, 0.9, 1.5])
@pytest.mark.parametrize("k", range(9))
def test_generating_function_reproduces_legendre_norms(r, k):
    sq = -math.sinh(2 * r) / 4
    ch, sh = math.cosh(r), math.sinh(r)
    added = jet_mixed_derivative(jet_exp_quadratic(QuadraticForm(cross=ch * ch, sq_h=sq, sq_g=sq), k, k), k, k)
    subtracted = jet_mixed_derivative(jet_exp_quadratic(QuadraticForm(cross=sh * sh, sq_h=sq, sq_g=sq), k, k), k, k)
    n_k = math.factorial(k) * ch**k * legendre_p(k, ch)
    c_k = math.factorial(k) * sh**k * legendre_imag_realified(k, sh)
    assert added == pytest.approx(n_k, rel=1e-10)
    assert subtracted == pytest.approx(c_k, rel=1e-10)


def test_generating_function_second_norm_example():
    r = 0.3
    sq = -math.sinh(2 * r) / 4
    j = jet_exp_quadratic(QuadraticForm(cross=math.cosh(r) ** 2, sq_h=sq, sq_g=sq), 2, 2)
    assert jet_mixed_derivative(j, 2, 2) == pytest.approx(2 * math.cosh(r) ** 2 * legendre_p(2, math.cosh(r)), rel=1e-12)


# ---------------------------------------------------------------------------
# dual numbers
# ---------------------------------------------------------------------------


def _richardson(f, x, h=1e-3):
    d1 = (f(x + h) - f(x - h)) / (2 * h)
    d2 = (f(x + h / 2) - f(x - h / 2)) / h
    return (4 * d2 - d1) / 3


def _composite(x):
    return exp(sin(x) * x) / sqrt(2.0 + cos(x)) - 3.0 * x * x + 1.0 / (1.5 + x * x)


@given(st.floats(-2.0, 2.0, allow_nan=False))
@settings(max_examples=60, deadline=None)
def test_dual_chain_rule_matches_finite_differences(x):
    d = _composite(DualScalar.variable(x))
    fd = _richardson(lambda t: float(_composite(t)), x)
    assert d.value == pytest.approx(float(_composite(x)), rel=1e-14)
    assert d.deriv == pytest.approx(fd, rel=1e-6, abs=1e-8)


def test_nested_dual_gives_second_derivative():
    x0 = 0.4
    x = DualScalar(DualScalar(x0, 1.0), DualScalar(1.0, 0.0))
    out = sin(x) * exp(x)
    # (sin x e^x)'' = 2 cos x e^x
    assert out.deriv.deriv == pytest.approx(2 * math.cos(x0) * math.exp(x0), rel=1e-14)
    assert out.value.value == pytest.approx(math.sin(x0) * math.exp(x0), rel=1e-15)


def test_dual_complex_and_conjugate():
    z = DualScalar(1.0 + 2.0j, 0.5 - 1.0j)
    w = z * z.conjugate()
    assert w.value == pytest.approx(5.0)
    # d|z|^2 = 2 Re(z* dz)
    assert w.deriv == pytest.approx(2 * ((1 - 2j) * (0.5 - 1j)).real)
