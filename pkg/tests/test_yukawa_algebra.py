import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from vanhove_ibc.errors import InvalidArgumentError, InvalidParamsError, PreconditionError, UnknownSourceError
from vanhove_ibc.identities import random_ibc_pair, random_params, random_sources, random_yukawa
from vanhove_ibc.yukawa_algebra import (
    IbcParams,
    YukawaFunction,
    apply_laplacian_star,
    apply_minus_laplacian_star,
    eval_A,
    eval_B,
    eval_X,
    eval_Y,
    inner_product,
    norm2,
    symmetry_defect,
    two_sector_ibc_symmetry,
    yukawa,
    yukawa_overlap,
)

seeds = st.integers(0, 2**32 - 1)
ORIGIN = np.zeros((1, 3))


# -- parameters ---------------------------------------------------------------------


def test_params_determinant_enforced():
    with pytest.raises(InvalidParamsError):
        IbcParams(alpha=2.0, beta=0.0, gamma=0.0, delta=1.0)
    IbcParams(alpha=2.0, beta=1.0, gamma=1.0, delta=1.0)


@given(st.floats(-5, 5), st.floats(0, 2 * np.pi))
def test_inverse_scattering_length_parameterisation(a, theta):
    p = IbcParams.from_inverse_scattering_length(a, theta)
    assert p.inverse_scattering_length == pytest.approx(a)
    assert p.alpha * p.delta - p.beta * p.gamma == pytest.approx(1.0)


def test_single_source_params():
    p = IbcParams.single_source(2.0)
    assert (p.alpha, p.beta, p.gamma, p.delta) == (0.5, 0.0, 0.0, 2.0)
    assert p.inverse_scattering_length == np.inf
    with pytest.raises(InvalidParamsError):
        IbcParams.single_source(0.0)


# -- functions -------------------------------------------------------------------------


def test_yukawa_function_validation():
    with pytest.raises(UnknownSourceError):
        YukawaFunction(ORIGIN, [1], [1.0], [1.0])
    with pytest.raises(InvalidArgumentError):
        YukawaFunction(ORIGIN, [0], [1.0], [-1.0])
    with pytest.raises(InvalidArgumentError):
        YukawaFunction(ORIGIN, [0, 0], [1.0], [1.0])
    with pytest.raises(InvalidArgumentError):
        YukawaFunction(ORIGIN) + YukawaFunction(np.ones((1, 3)))


def test_pointwise_values_and_arithmetic():
    f = YukawaFunction.single(ORIGIN, 0, 2.0, coeff=3.0)
    x = np.array([0.0, 0.0, 0.5])
    assert np.isclose(f(x), 3.0 * yukawa(2.0, 0.5))
    assert np.isclose((f - f)(x), 0.0)
    assert np.isclose((2 * f + f)(x), 9.0 * yukawa(2.0, 0.5))
    assert np.isclose(yukawa(2.0, 0.5), -np.exp(-1.0) / (2 * np.pi))


# -- overlaps ----------------------------------------------------------------------------


def test_overlap_special_values():
    assert np.isclose(yukawa_overlap(1.0, 1.0, 0.0), 1 / (8 * np.pi))
    assert np.isclose(yukawa_overlap(1.0, 2.0, 1.0), (np.exp(-1) - np.exp(-2)) / (12 * np.pi))
    # the norm of f_gamma
    assert np.isclose(norm2(YukawaFunction.single(ORIGIN, 0, 0.7)), 1 / (8 * np.pi * 0.7))


def test_overlap_against_frozen_quadrature(oracles):
    for row in oracles["overlap"]:
        got = yukawa_overlap(row["gamma1"], row["gamma2"], row["d"])
        assert abs(got.imag) == 0
        assert abs(got.real - row["value"]) <= 1e-8 * abs(row["value"])


@given(st.floats(0.2, 3.0), st.floats(0.05, 3.0), st.floats(1e-14, 1e-7))
def test_overlap_continuous_through_equal_decays(a, d, eps):
    exact = np.exp(-a * d) / (8 * np.pi * a)
    assert np.isclose(yukawa_overlap(a, a + eps, d), exact, rtol=1e-6)
    assert np.isclose(yukawa_overlap(a, a, d), exact, rtol=1e-14)


@given(st.floats(0.2, 3.0), st.floats(0.2, 3.0), st.floats(0.0, 1e-9))
def test_overlap_continuous_at_zero_distance(a, b, d):
    assert np.isclose(yukawa_overlap(a, b, d), 1 / (4 * np.pi * (a + b)), rtol=1e-8)


def test_complex_decay_overlap_by_radial_quadrature():
    # same centre: <f_g1, f_g2> = int_0^inf exp(-(conj g1 + g2) r) / (4 pi) dr
    g1, g2 = 1.0 + 0.5j, 0.7 - 0.3j
    re = quad(lambda r: (np.exp(-(np.conj(g1) + g2) * r)).real, 0, np.inf)[0] / (4 * np.pi)
    im = quad(lambda r: (np.exp(-(np.conj(g1) + g2) * r)).imag, 0, np.inf)[0] / (4 * np.pi)
    assert np.isclose(yukawa_overlap(g1, g2, 0.0), re + 1j * im, rtol=1e-10)


@given(seeds)
def test_inner_product_hermitian_and_positive(seed):
    rng = np.random.default_rng(seed)
    src = random_sources(rng, 3)
    f, g = random_yukawa(rng, src, complex_decays=True), random_yukawa(rng, src, complex_decays=True)
    assert np.isclose(inner_product(f, g), np.conj(inner_product(g, f)))
    assert norm2(f) > 0


# -- boundary functionals ------------------------------------------------------------


def test_boundary_values_of_single_term():
    f = YukawaFunction.single(ORIGIN, 0, 1.5, coeff=2.0)
    assert eval_B(f, 0) == 2.0
    assert np.isclose(eval_A(f, 0), 2.0 * 1.5 / (4 * np.pi))
    with pytest.raises(UnknownSourceError):
        eval_B(f, 1)
    with pytest.raises(UnknownSourceError):
        eval_A(f, -1)


@given(seeds)
def test_boundary_functionals_match_pointwise_limits(seed):
    # B = -4 pi lim r f, A = lim d/dr (r f): read off by fitting r f(x) near the source
    rng = np.random.default_rng(seed)
    src = random_sources(rng, 2)
    f = random_yukawa(rng, src, n_terms=4)
    direction = rng.standard_normal(3)
    direction /= np.linalg.norm(direction)
    rs = np.array([1e-4, 2e-4, 3e-4])
    rf = rs * f(src[0] + rs[:, None] * direction)
    c2, c1, c0 = np.polyfit(rs, rf, 2)
    assert np.isclose(-4 * np.pi * c0, eval_B(f, 0), rtol=1e-6, atol=1e-8)
    assert np.isclose(c1, eval_A(f, 0), rtol=1e-4, atol=1e-6)


def test_x_and_y_are_phased_combinations():
    f = YukawaFunction.single(ORIGIN, 0, 1.0, coeff=1.0 + 1j)
    p = IbcParams.from_inverse_scattering_length(0.3, theta=0.4)
    B, A = eval_B(f, 0), eval_A(f, 0)
    assert np.isclose(eval_X(f, 0, p), np.exp(0.4j) * (p.alpha * B + p.beta * A))
    assert np.isclose(eval_Y(f, 0, p), np.exp(0.4j) * (p.gamma * B + p.delta * A))


def test_laplacian_actions():
    f = YukawaFunction.single(ORIGIN, 0, 2.0, coeff=1.0)
    assert np.isclose(apply_laplacian_star(f).coeffs[0], 4.0)
    assert np.isclose(apply_minus_laplacian_star(f, 4.0).coeffs[0], 0.0)


# -- symmetry identities ----------------------------------------------------------------


@given(seeds, st.integers(1, 3))
def test_boundary_form_identity(seed, n):
    rng = np.random.default_rng(seed)
    src = random_sources(rng, n)
    phi, psi = random_yukawa(rng, src, complex_decays=True), random_yukawa(rng, src, complex_decays=True)
    scale = max(1.0, np.abs(phi.coeffs).max() * np.abs(psi.coeffs).max())
    assert abs(symmetry_defect(phi, psi)) <= 1e-12 * scale
    params = [random_params(rng) for _ in range(n)]
    assert abs(symmetry_defect(phi, psi, params, form="XY")) <= 1e-12 * scale


def test_symmetry_defect_detects_a_wrong_functional(monkeypatch):
    import vanhove_ibc.yukawa_algebra as ya

    rng = np.random.default_rng(3)
    src = random_sources(rng, 2)
    phi, psi = random_yukawa(rng, src, n_terms=3), random_yukawa(rng, src, n_terms=3)
    monkeypatch.setattr(ya, "eval_A", lambda f, i: 2 * eval_A(f, i))
    assert abs(ya.symmetry_defect(phi, psi)) > 1e-6


def test_symmetry_defect_argument_checks():
    f = YukawaFunction.single(ORIGIN, 0, 1.0)
    with pytest.raises(InvalidArgumentError):
        symmetry_defect(f, f, form="XY")
    with pytest.raises(InvalidArgumentError):
        symmetry_defect(f, f, form="BA")


@given(seeds)
def test_two_sector_symmetry(seed):
    rng = np.random.default_rng(seed)
    g, e0 = rng.uniform(0.2, 3.0), rng.uniform(0.1, 4.0)
    psi0, psi1 = random_ibc_pair(rng, g)
    phi0, phi1 = random_ibc_pair(rng, g)
    scale = max(1.0, g * np.abs(psi1.coeffs).max() * np.abs(phi1.coeffs).max())
    assert abs(two_sector_ibc_symmetry(psi0, psi1, g, e0, phi0, phi1)) <= 1e-12 * scale
    assert abs(two_sector_ibc_symmetry(psi0, psi1, g, e0).imag) <= 1e-12 * scale


def test_two_sector_requires_the_boundary_condition():
    psi1 = YukawaFunction.single(ORIGIN, 0, 1.0, coeff=1.0)
    with pytest.raises(PreconditionError):
        two_sector_ibc_symmetry(0.3, psi1, 1.0, 1.0)
    with pytest.raises(InvalidArgumentError):
        two_sector_ibc_symmetry(1.0, psi1, 1.0, 1.0, phi0=1.0)
