import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st
from scipy import special

from sbhermite.polynomials import (
    BiPolynomial,
    FactorialOverflowError,
    check_nu,
    factorial,
    hermite_eval,
    landau_apply,
    laguerre,
    laguerre_eval,
    monomial_norm_sq,
    real_hermite,
    real_hermite_norm_sq,
    rodrigues_uchp,
    uchp,
    uchp_norm_sq,
    uchp_rescaling_check,
    uchp_table,
    wirtinger_dz,
    wirtinger_dzbar,
)

finite = st.floats(-2.0, 2.0, allow_nan=False)
points = st.builds(complex, finite, finite)
nus = st.sampled_from([0.25, 0.5, 1.0, 2.0, 3.0])
orders = st.integers(0, 7)


def sympy_uchp(m, n, nu):
    """Coefficient array from symbolic differentiation, z and zbar independent."""
    z, zb = sp.symbols("z zb")
    g = sp.exp(-nu * z * zb)
    expr = sp.expand(sp.simplify((-1) ** (m + n) * sp.exp(nu * z * zb) * sp.diff(g, zb, m, z, n)))
    poly = sp.Poly(expr, z, zb)
    out = np.zeros((m + 1, n + 1), dtype=complex)
    for (j, k), c in poly.terms():
        out[j, k] = complex(c)
    return out


@pytest.mark.parametrize("nu", [sp.Rational(1, 2), sp.Integer(1), sp.Integer(2)])
@pytest.mark.parametrize("m,n", [(0, 0), (1, 0), (0, 1), (1, 1), (2, 3), (4, 2), (4, 4)])
def test_uchp_matches_symbolic_differentiation(m, n, nu):
    expected = sympy_uchp(m, n, nu)
    got = uchp(m, n, float(nu)).coeffs
    assert got.shape == expected.shape
    np.testing.assert_allclose(got, expected, rtol=1e-13, atol=1e-13)


@pytest.mark.parametrize("m,n", [(0, 0), (3, 1), (5, 5), (10, 3), (8, 9)])
@pytest.mark.parametrize("nu", [0.5, 1.0, 2.0])
def test_uchp_matches_explicit_sum(m, n, nu):
    z = 0.6 - 1.1j
    total = sum((-1) ** k * math.factorial(k) * math.comb(m, k) * math.comb(n, k) * nu ** (m + n - k)
                * z ** (m - k) * np.conj(z) ** (n - k) for k in range(min(m, n) + 1))
    assert uchp(m, n, nu)(z) == pytest.approx(total, rel=1e-12, abs=1e-12)


def test_uchp_small_cases():
    assert uchp(1, 1, 1.0)(1 + 0j) == 0
    assert uchp(0, 0, 2.0)(3j) == 1
    assert uchp(1, 0, 2.0)(3j) == pytest.approx(6j)
    assert uchp(0, 1, 2.0)(3j) == pytest.approx(-6j)


@given(orders, orders, nus, points)
def test_conjugation_swaps_indices(m, n, nu, z):
    a = np.conj(uchp(m, n, nu)(z))
    b = uchp(n, m, nu)(z)
    assert abs(a - b) <= 1e-10 * max(1.0, abs(b))


@pytest.mark.parametrize("variant", ["mixed", "zbar"])
@pytest.mark.parametrize("nu", [0.5, 2.0])
def test_rodrigues_construction_agrees_with_recurrence(variant, nu):
    for m in range(6):
        for n in range(6):
            assert rodrigues_uchp(m, n, nu, variant).allclose(uchp(m, n, nu), atol=1e-10, rtol=1e-12)


@given(orders, orders, nus)
def test_rescaling_relation(m, n, nu):
    z = np.array([0.3 + 0.4j, -1.2 + 0.1j, 1.9j])
    assert uchp_rescaling_check(m, n, nu, z) < 1e-12


@pytest.mark.parametrize("m", range(7))
@pytest.mark.parametrize("nu", [0.5, 1.0, 2.0])
def test_diagonal_uchp_is_laguerre(m, nu):
    z = np.array([0.2 + 0.9j, -1.3 + 0.4j])
    lhs = uchp(m, m, nu)(z)
    rhs = (-nu) ** m * math.factorial(m) * laguerre(m)(nu * np.abs(z) ** 2)
    np.testing.assert_allclose(lhs, rhs, rtol=1e-12, atol=1e-12)


@given(st.integers(0, 12), nus, st.floats(-3, 3))
def test_real_hermite_is_rescaled_physicists_hermite(n, nu, x):
    expected = nu ** (n / 2) * special.eval_hermite(n, math.sqrt(nu) * x)
    got = real_hermite(n, nu)(x)
    assert got == pytest.approx(expected, rel=1e-10, abs=1e-10 * max(1.0, abs(expected)))
    assert hermite_eval(n, nu, x) == pytest.approx(expected, rel=1e-10, abs=1e-10 * max(1.0, abs(expected)))


@given(st.integers(0, 15), st.floats(0, 10))
def test_laguerre_matches_scipy(m, x):
    expected = special.eval_laguerre(m, x)
    assert laguerre(m)(x) == pytest.approx(expected, rel=1e-9, abs=1e-9)
    assert laguerre_eval(m, x) == pytest.approx(expected, rel=1e-9, abs=1e-9)


def test_point_table_matches_polynomials():
    z = np.array([0.5 - 0.5j, 1.7 + 0.2j])
    table = uchp_table(6, 5, 1.5, z)
    for m in range(6):
        for n in range(5):
            np.testing.assert_allclose(table[m, n], uchp(m, n, 1.5)(z), rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("nu", [0.5, 1.0, 2.0])
def test_landau_eigenvalue_is_nu_times_level(nu):
    for m in range(9):
        for n in range(9):
            H = uchp(m, n, nu)
            assert landau_apply(H, nu).allclose(H * (nu * n), atol=1e-9, rtol=1e-12)


def test_landau_eigenvalue_equals_level_at_unit_field():
    for m in range(9):
        for n in range(9):
            H = uchp(m, n, 1.0)
            assert landau_apply(H, 1.0).allclose(H * n, atol=1e-12, rtol=1e-12)


def test_wirtinger_derivatives():
    p = BiPolynomial.monomial(2, 1, 3.0)  # 3 z^2 zbar
    assert wirtinger_dz(p).allclose(BiPolynomial.monomial(1, 1, 6.0))
    assert wirtinger_dzbar(p).allclose(BiPolynomial.monomial(2, 0, 3.0))
    assert wirtinger_dz(BiPolynomial.constant(5.0)).allclose(BiPolynomial.constant(0.0))


@given(st.lists(st.builds(complex, finite, finite), min_size=4, max_size=4),
       st.lists(st.builds(complex, finite, finite), min_size=6, max_size=6), points)
def test_product_evaluates_pointwise(a, b, z):
    p = BiPolynomial(np.array(a).reshape(2, 2))
    q = BiPolynomial(np.array(b).reshape(3, 2))
    lhs = (p * q)(z)
    rhs = p(z) * q(z)
    assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(rhs))
    assert abs((p + q)(z) - (p(z) + q(z))) <= 1e-12 * max(1.0, abs(p(z) + q(z)))


def test_norm_formulas():
    assert uchp_norm_sq(1, 1, 1.0) == pytest.approx(math.pi)
    assert uchp_norm_sq(2, 3, 0.5) == pytest.approx(2 * math.pi * 2 * 6 * 0.5**5)
    assert real_hermite_norm_sq(2, 4.0) == pytest.approx(64 * math.sqrt(math.pi))
    assert real_hermite_norm_sq(0, 1.0) == pytest.approx(math.sqrt(math.pi))
    assert monomial_norm_sq(1, 2, 2.0) == pytest.approx((math.pi / 2) ** 2 * 2 / 8)


def test_norms_overflow_rather_than_return_inf():
    with pytest.raises(FactorialOverflowError):
        uchp_norm_sq(100, 100, 1.0)
    with pytest.raises(FactorialOverflowError):
        factorial(171)
    assert factorial(170) == float(math.factorial(170))


@pytest.mark.parametrize("bad", [0.0, -1.0, float("nan"), float("inf")])
def test_nu_must_be_finite_positive(bad):
    with pytest.raises(ValueError):
        check_nu(bad)
    with pytest.raises(ValueError):
        uchp(1, 1, bad)


def test_negative_orders_rejected():
    with pytest.raises(ValueError):
        uchp(-1, 2, 1.0)
    with pytest.raises(ValueError):
        real_hermite(-2, 1.0)


def test_polynomials_are_immutable():
    H = uchp(2, 2, 1.0)
    with pytest.raises(ValueError):
        H.coeffs[0, 0] = 7.0
