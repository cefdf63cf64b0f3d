import math
import warnings

import numpy as np
import pytest

from sbhermite import transforms as tr
from sbhermite.polynomials import real_hermite, uchp, uchp_norm_sq

Z = np.array([0.3 + 0.4j, -1.1 + 0.2j, 0.7 - 1.3j, 1.5j, -0.4 - 0.4j])
W = np.array([0.9 - 0.1j, 0.2 + 0.6j, -1.2 + 0.5j, -0.3j, 1.1 + 1.0j])


def close(a, b, tol):
    a, b = np.asarray(a, complex), np.asarray(b, complex)
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1.0))) <= tol


# ------------------------------------------------------------- one-dimensional


@pytest.mark.parametrize("nu", [0.5, 1.0, 2.0])
def test_bargmann1_of_constant_at_origin(nu):
    one = tr.hermite_function(0, nu)
    assert tr.bargmann1(one, nu)(0.0) == pytest.approx((nu / math.pi) ** 0.75 * math.sqrt(math.pi / nu), rel=1e-13)


def test_bargmann1_of_first_hermite():
    out = tr.bargmann1(tr.hermite_function(1, 1.0), 1.0)(Z)
    assert close(out, math.sqrt(2) * math.pi**-0.25 * Z, 1e-12)


def test_zero_maps_to_zero():
    assert np.all(tr.bargmann1(tr.zero("R"), 1.0)(Z) == 0)
    assert np.all(tr.t_forward(tr.zero("C"), 1.0, 20)(Z, W) == 0)
    assert np.all(tr.wigner(tr.zero("R2"), 1.0)(np.array([0.1, 1.0]), np.array([0.0, -2.0])) == 0)
    assert np.all(tr.g_composite(tr.zero("R"), 1.0)(Z, W) == 0)


@pytest.mark.parametrize("nu", [0.5, 2.0])
def test_level_transform_maps_hermite_to_uchp(nu):
    for m in range(7):
        phi = tr.hermite_function(m, nu)
        for n in range(7):
            out = tr.bargmann1_level(phi, nu, n)(Z)
            expected = (nu / math.pi) ** 0.25 * math.sqrt(2.0**m / (math.factorial(n) * nu**n)) * uchp(m, n, nu)(Z)
            assert close(out, expected, 1e-8), (m, n)


def test_level_one_of_constant_at_one():
    assert tr.bargmann1_level(tr.hermite_function(0, 1.0), 1.0, 1)(1.0) == pytest.approx(math.pi**-0.25, rel=1e-13)


# ------------------------------------------------------------- two-dimensional


@pytest.mark.parametrize("nu", [0.5, 1.0, 2.0])
def test_bargmann2_of_constant(nu):
    one = tr.FunctionHandle("R2", lambda x, y: np.ones(np.broadcast(x, y).shape, complex))
    assert tr.bargmann2(one, nu)(0.0, 0.0) == pytest.approx(math.sqrt(nu / math.pi), rel=1e-13)


def test_bargmann2_factorizes():
    nu = 1.5
    j, k = 2, 3
    prod = tr.hermite_gauss_product(j, k, nu)
    fj = tr.FunctionHandle("R", lambda x: real_hermite(j, nu)(x) * np.exp(-nu * np.asarray(x) ** 2 / 2))
    fk = tr.FunctionHandle("R", lambda x: real_hermite(k, nu)(x) * np.exp(-nu * np.asarray(x) ** 2 / 2))
    lhs = tr.bargmann2(prod, nu)(Z, W)
    rhs = tr.bargmann1(fj, nu)(Z) * tr.bargmann1(fk, nu)(W)
    assert close(lhs, rhs, 1e-12)


@pytest.mark.parametrize("nu", [0.5, 1.0, 2.0])
def test_bargmann2_is_rotated_t_with_normalized_matrix(nu):
    # holds with g_i / sqrt 2; the unnormalized g_i does not reproduce it
    half = tr.G_I.scaled(1 / math.sqrt(2))
    for j, k in [(0, 0), (1, 2), (3, 1)]:
        psi = tr.hermite_gauss_product(j, k, nu)
        lhs = tr.bargmann2(psi, nu)(Z, W)
        T = tr.t_forward(psi, nu)
        assert close(lhs, tr.gamma_action(half, T)(Z, W), 1e-7)
        assert not close(lhs, tr.gamma_action(tr.G_I, T)(Z, W), 1e-3)


# ------------------------------------------------------------------- T


@pytest.mark.parametrize("nu", [0.5, 1.0, 2.0])
def test_t_of_constant(nu):
    out = tr.t_forward(tr.uchp_function(0, 0, nu), nu)(Z, W)
    assert close(out, np.full(Z.shape, math.sqrt(nu / math.pi)), 1e-12)


def test_t_of_h11_at_one():
    assert tr.t_forward(tr.uchp_function(1, 1, 1.0), 1.0)(1.0, 1.0) == pytest.approx(math.pi**-0.5, rel=1e-13)


@pytest.mark.parametrize("nu", [0.5, 2.0])
def test_t_quadrature_agrees_with_exact_representation(nu):
    rng = np.random.default_rng(3)
    psi = tr.random_uchp_combination(rng, 4, nu)
    T = tr.t_forward(psi, nu)
    pts = rng.normal(size=(2, 10)) + 1j * rng.normal(size=(2, 10))
    assert close(T(pts[0], pts[1]), T.exact(pts[0], pts[1]), 1e-10)
    assert close(psi(Z), psi.exact(Z), 1e-10)


def test_t_outer_product_path_matches_pointwise_path():
    nu = 1.0
    T = tr.t_forward(tr.uchp_function(2, 1, nu), nu, 30)
    grid = T(Z[:, None], W[None, :])
    pairs = T(np.repeat(Z, W.size).reshape(Z.size, W.size), np.tile(W, (Z.size, 1)))
    np.testing.assert_allclose(grid, pairs, rtol=1e-12)


def test_t_is_holomorphic():
    T = tr.t_forward(tr.uchp_function(2, 2, 1.0), 1.0)
    dz, _ = tr.partial_derivatives(T, Z, W)
    assert close(dz, 2 * math.pi**-0.5 * Z * W**2, 1e-10)


def test_inverse_of_constant():
    c = math.sqrt(1.0 / math.pi)
    const = tr.FunctionHandle("C2", lambda z, w: np.full(np.broadcast(z, w).shape, c, complex))
    assert close(tr.t_inverse(const, 1.0)(Z), np.ones(Z.shape), 1e-10)
    assert np.all(tr.t_inverse(tr.zero("C2"), 1.0)(Z) == 0)


@pytest.mark.parametrize("nu", [0.5, 2.0])
def test_inverse_of_monomial_recovers_uchp(nu):
    m, n = 2, 1
    phi = tr.monomial_combination({(m, n): 1.0}, nu)
    back = tr.t_inverse(phi, nu)
    scale = math.sqrt(nu / math.pi) * nu ** (m + n)
    assert close(back(Z), uchp(m, n, nu)(Z) / scale, 1e-8)
    assert close(back.exact(Z), uchp(m, n, nu)(Z) / scale, 1e-12)


def test_round_trip_and_norm():
    nu = 1.0
    rng = np.random.default_rng(11)
    psi = tr.random_uchp_combination(rng, 3, nu, terms=3)
    T = tr.t_forward(psi, nu)
    S = tr.sample_bicomplex(T, nu, 30)
    exact = sum(abs(c) ** 2 * uchp_norm_sq(m, n, nu) for (m, n), c in psi.representation.terms)
    assert tr.norm_sq_bicomplex(T, nu, 30, samples=S) == pytest.approx(exact, rel=1e-9)
    assert close(tr.t_inverse(T, nu, 30, samples=S)(Z), psi.exact(Z), 1e-6)


# ------------------------------------------------------------- level pairs


@pytest.mark.parametrize("n,npr", [(0, 0), (0, 2), (2, 0), (1, 3), (3, 3)])
def test_level_pair_scaling(n, npr):
    nu = 1.5
    for m in range(4):
        out = tr.t_pair(tr.uchp_function(m, n, nu), nu, n, npr)(Z)
        scale = math.sqrt(math.factorial(n) * nu**n / (math.factorial(npr) * nu**npr))
        assert close(out, scale * uchp(m, npr, nu)(Z), 1e-9)


def test_level_pair_inverse():
    nu = 1.0
    psi = tr.uchp_function(2, 1, nu)
    back = tr.t_pair(tr.t_pair(psi, nu, 1, 2), nu, 2, 1, 30)
    assert close(back(Z[:2]), psi(Z[:2]), 1e-8)


# ------------------------------------------------------------------ Fourier


def test_shifted_fourier_fixes_constant():
    assert close(tr.shifted_fourier(tr.uchp_function(0, 0, 1.0), 1.0)(Z), np.ones(Z.shape), 1e-12)


@pytest.mark.parametrize("nu", [0.5, 1.0, 2.0])
def test_shifted_fourier_eigenvalues_are_powers_of_minus_i(nu):
    for m in range(5):
        for n in range(5 - m):
            out = tr.shifted_fourier(tr.uchp_function(m, n, nu), nu)(Z)
            assert close(out, (-1j) ** (m + n) * uchp(m, n, nu)(Z), 1e-9), (m, n)


def test_shifted_fourier_of_z_is_minus_i_z():
    out = tr.shifted_fourier(tr.uchp_function(1, 0, 1.0), 1.0)(1.0)
    assert out == pytest.approx(-1j, abs=1e-12)


@pytest.mark.parametrize("nu", [0.5, 1.0, 2.0])
def test_conjugating_rotation_by_t_is_shifted_fourier(nu):
    psi = tr.uchp_combination({(1, 0): 1.0, (0, 2): 0.5j, (2, 1): -0.3}, nu)
    T = tr.t_forward(psi, nu)
    rotated = tr.FunctionHandle("C2", lambda a, b: T.exact(-1j * np.asarray(a), -1j * np.asarray(b)))
    lhs = tr.t_inverse(rotated, nu, 30)(Z)
    assert close(lhs, tr.shifted_fourier(psi, nu)(Z), 1e-8)


@pytest.mark.parametrize("nu", [0.5, 1.0, 2.0])
def test_shifted_fourier_is_ground_state_conjugate_of_fourier(nu):
    phi = tr.gaussian("C", nu)
    target = tr.shifted_fourier(phi, nu)(Z)
    inner = tr.ground_state(nu / 2, phi)
    out = np.exp(nu / 2 * np.abs(Z) ** 2) * tr.fourier(inner, nu, 1.5 * nu)(Z)
    assert close(out, target, 1e-10)
    # the opposite order gives a different function
    other = np.exp(-nu / 2 * np.abs(Z) ** 2) * tr.fourier(tr.ground_state(-nu / 2, phi), nu, nu / 2)(Z)
    assert not close(other, target, 1e-3)


@pytest.mark.parametrize("nu", [0.5, 1.0, 2.0])
def test_anti_diagonal_restriction_of_t_is_scaled_fourier(nu):
    rng = np.random.default_rng(5)
    psi = tr.random_uchp_combination(rng, 3, nu)
    T = tr.t_forward(psi, nu)
    lhs = T(-1j * Z, -1j * np.conj(Z))
    rhs = math.sqrt(nu / math.pi) * tr.shifted_fourier(psi, 2 * nu)(Z)
    assert close(lhs, rhs, 1e-9)


# ------------------------------------------------------------------ Wigner


def test_wigner_of_gaussian():
    f = tr.gaussian("R2", 0.5)
    x = np.array([0.0, 0.3, -1.0, 2.0])
    y = np.array([0.0, -0.5, 0.7, 0.1])
    out = tr.wigner(f, 1.0)(x, y)
    assert close(out, math.sqrt(2) * np.exp(-(x**2) - y**2), 1e-13)
    assert tr.wigner(f, 1.0)(0.0, 0.0) == pytest.approx(math.sqrt(2), rel=1e-14)


def test_wigner_warns_when_integrand_has_not_decayed():
    f = tr.gaussian("R2", 0.01)
    with pytest.warns(tr.DecayWarning):
        tr.wigner(f, 1.0, L=5.0, N=256)(0.0, 0.0)
    with pytest.raises(ValueError):
        tr.wigner(f, 1.0)(0.5j, 0.0)


@pytest.mark.parametrize("nu", [0.5, 1.0, 2.0])
def test_t_of_wigner_intertwines_with_rotated_half_field_t(nu):
    z, w = Z * 0.5, W * 0.5
    f = tr.gaussian("R2", nu / 2)
    lhs = tr.t_forward(tr.wigner(f, nu), nu)(z, w)
    g = tr.GroupElement(-1j, -1, -1j, 1)
    rhs = 2 / math.sqrt(nu) * np.exp(-nu / 4 * (z + w) ** 2) * tr.gamma_action(g, tr.t_forward(f, nu / 2))(z, w)
    assert close(lhs, rhs, 1e-9)


# ------------------------------------------------------------- group action


def test_group_action_basics():
    f = tr.FunctionHandle("C2", lambda z, w: np.asarray(z, complex) + 0 * np.asarray(w))
    assert close(tr.gamma_action(tr.IDENTITY, f)(Z, W), Z, 0)
    assert close(tr.gamma_action(tr.G_I, f)(Z, W), Z + 1j * W, 1e-15)
    F = tr.monomial_combination({(2, 1): 1.0, (0, 3): 2j}, 1.0)
    assert close(tr.rotation(-1j, F)(Z, W), F(-1j * Z, -1j * W), 0)


def test_group_action_composes_in_reverse_order():
    rng = np.random.default_rng(0)
    g = tr.GroupElement.from_matrix(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    h = tr.GroupElement.from_matrix(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    F = tr.monomial_combination({(2, 1): 1.0, (1, 3): -0.5, (0, 1): 2j}, 1.0)
    lhs = tr.gamma_action(g, tr.gamma_action(h, F))(Z, W)
    rhs = tr.gamma_action(h @ g, F)(Z, W)
    assert close(lhs, rhs, 1e-12)


def test_normalized_gi_is_unitary():
    assert tr.G_I.scaled(1 / math.sqrt(2)).is_unitary()
    assert not tr.G_I.is_unitary()


def test_diagonal_restrictions():
    F = tr.FunctionHandle("C2", lambda z, w: np.asarray(z) * np.asarray(w))
    assert close(tr.restrict_diag("+", F)(Z), Z**2, 0)
    assert close(tr.restrict_diag("-", F)(Z), np.abs(Z) ** 2, 1e-15)
    with pytest.raises(ValueError):
        tr.restrict_diag("0", F)


# -------------------------------------------------------------- composite


@pytest.mark.parametrize("m", [0, 1, 3])
def test_composite_image_is_annihilated(m):
    G = tr.g_composite(tr.hermite_function(m, 1.0), 1.0)
    dz, dw = tr.partial_derivatives(G, Z, W)
    assert float(np.max(np.abs(dz + 1j * dw))) <= 1e-8 * max(1.0, float(np.max(np.abs(dz))))


def test_composite_is_b1_along_the_slice():
    phi = tr.hermite_function(1, 1.0)
    G = tr.g_composite(phi, 1.0)
    b1 = tr.bargmann1(phi, 1.0)
    assert close(G(Z, W), math.sqrt(1 / math.pi) * b1((Z + 1j * W) / math.sqrt(2)), 1e-14)


# ------------------------------------------------------------------ kernels


def test_single_term_kernel_is_constant():
    basis = tr.Basis(lambda k, x: np.ones_like(np.asarray(x, complex)), lambda k: 1.0, lambda N: range(N))
    K = tr.cst_kernel(basis, basis, 1)
    assert K(0.3, 1.7) == 1


def test_kernel_rejects_zero_norm():
    bad = tr.Basis(lambda k, x: x, lambda k: 0.0, lambda N: range(N))
    with pytest.raises(ValueError, match="positive"):
        tr.cst_kernel(bad, bad, 2)
    with pytest.raises(ValueError):
        tr.cst_kernel(bad, bad, 0)


@pytest.mark.parametrize("n", [0, 1, 2])
def test_hermite_to_level_kernel(n):
    K = tr.cst_kernel(tr.hermite_basis(1.0), tr.uchp_level_basis(n, 1.0), 40)
    x, z = 0.3, 0.5 + 0.2j
    assert close(K(x, z), tr.level_kernel_closed_form(x, z, n, 1.0), 1e-8)


@pytest.mark.parametrize("nu", [0.5, 1.0])
def test_uchp_to_monomial_kernel_is_t_kernel(nu):
    K = tr.cst_kernel(tr.uchp_basis(nu), tr.monomial_basis(nu), 40)
    xi, u, v = 0.3 + 0.2j, 0.5 - 0.1j, 0.2 + 0.4j
    assert close(K(xi, u, v), tr.t_kernel(xi, u, v, nu), 1e-8)


# ---------------------------------------------------- integral representation


def test_integral_representation_cases():
    assert tr.integral_rep_uchp(0, 0, 1.0, 1.0, 1.0, 0.7 - 0.2j) == pytest.approx(1.0, rel=1e-12)
    assert tr.integral_rep_uchp(1, 1, 1.0, 1.0, 1.0, 0.5) == pytest.approx(-0.75, rel=1e-12)
    z = np.array([0.4 + 0.1j, -0.9j])
    assert close(tr.integral_rep_uchp(2, 3, 1j, -1j, 1.0, z), uchp(2, 3, 1.0)(z), 1e-7)
    assert close(tr.integral_rep_uchp(3, 1, 2.0, 0.5, 2.0, z), uchp(3, 1, 0.5)(z), 1e-7)


def test_gaussian_representation():
    z = np.array([0.2 + 0.3j, 1.0 - 0.5j])
    for alpha, beta, gauss in [(1j, -1j, 1.0), (1.0, 2.0, 1.5)]:
        out = tr.gaussian_integral_rep(alpha, beta, gauss, z)
        assert close(out, math.pi / gauss * np.exp(-alpha * beta * np.abs(z) ** 2 / gauss), 1e-12)


@pytest.mark.parametrize("alpha,beta", [(1.0, -1.0), (1.0, 1j), (0.0, 1.0)])
def test_integral_representation_rejects_bad_parameters(alpha, beta):
    with pytest.raises(ValueError, match="alpha\\*beta"):
        tr.integral_rep_uchp(1, 1, alpha, beta, 1.0, 0.5)


# ------------------------------------------------------------------ specs


def test_transform_spec_validation():
    tr.TransformSpec("T_pair", 1.0, (1, 2))
    with pytest.raises(ValueError):
        tr.TransformSpec("T_pair", 1.0, (1,))
    with pytest.raises(ValueError):
        tr.TransformSpec("T", 1.0, (1,))
    with pytest.raises(ValueError):
        tr.TransformSpec("B1", -1.0)
    with pytest.raises(ValueError):
        tr.TransformSpec("Hall", 1.0)


def test_transform_spec_dispatch():
    spec = tr.TransformSpec("B1_level", 1.0, (1,))
    out = spec.apply(tr.hermite_function(0, 1.0))(1.0)
    assert out == pytest.approx(math.pi**-0.25, rel=1e-13)
    assert tr.TransformSpec("wigner", 1.0).apply(tr.gaussian("R2"))(0.0, 0.0) == pytest.approx(math.sqrt(2))


def test_handle_domain_checks():
    with pytest.raises(ValueError):
        tr.FunctionHandle("R3", lambda x: x)
    with pytest.raises(TypeError):
        tr.uchp_function(1, 1, 1.0)(1.0, 2.0)
    with pytest.raises(ValueError):
        tr.bargmann1(tr.uchp_function(1, 1, 1.0), 1.0)
    with pytest.raises(ValueError):
        tr.gaussian("C", 0.5).exact(1.0)
