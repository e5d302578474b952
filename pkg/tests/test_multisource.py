import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from vanhove_ibc.errors import InvalidArgumentError, InvalidConfigError, NotInRangeError
from vanhove_ibc.identities import random_source_config
from vanhove_ibc.multisource import (
    SourceConfig,
    check_bounded_below,
    gram_matrix,
    ground_energy_multisource,
    ker_x_identity_terms,
    point_interaction_eigenvalues,
    reduced_gamma,
    s_matrix,
    sample_ker_x,
    solve_phi,
)
from vanhove_ibc.vanhove_renorm import ibc_ground_energy
from vanhove_ibc.yukawa_algebra import IbcParams, apply_minus_laplacian_star, eval_X, inner_product

P = IbcParams.from_inverse_scattering_length
seeds = st.integers(0, 2**32 - 1)


def pair(a, d, theta=0.0, e0=1.0):
    return SourceConfig([[0, 0, 0], [0, 0, d]], [P(a, theta), P(a, theta)], e0)


def test_config_validation():
    with pytest.raises(InvalidConfigError, match="coincide"):
        SourceConfig([[0, 0, 0], [0, 0, 0]], [P(1.0), P(1.0)])
    with pytest.raises(InvalidConfigError) as exc:
        SourceConfig([[0, 0, 0]], [P(1.0)], e0=0.0)
    assert exc.value.key == "model.e0"
    with pytest.raises(InvalidConfigError):
        SourceConfig([[0, 0, 0]], [P(1.0), P(2.0)])
    with pytest.raises(InvalidConfigError):
        SourceConfig(np.zeros((1, 2)), [P(1.0)])


def test_gram_matrix_values():
    G = gram_matrix(pair(0.1, 1.0), 1.0)
    assert np.isclose(G[0, 1], -np.exp(-1) / (4 * np.pi))
    assert np.isclose(G[0, 1], -0.02927492, atol=1e-8)
    assert G[0, 0] == 0 and np.array_equal(G, G.T)
    assert gram_matrix(SourceConfig([[0, 0, 0]], [P(1.0)]), 2.0).shape == (1, 1)
    assert abs(gram_matrix(pair(0.1, 200.0), 1.0)[0, 1]) < 1e-80
    with pytest.raises(InvalidArgumentError):
        gram_matrix(pair(0.1, 1.0), 0.0)


def test_s_matrix_structure():
    lam = 2.0
    p = IbcParams(theta=0.0, alpha=0.4, beta=1.0, gamma=-0.6, delta=1.0)
    one = SourceConfig([[0, 0, 0]], [p])
    assert np.isclose(s_matrix(one, lam)[0, 0], 0.4 + np.sqrt(lam) / (4 * np.pi))
    diag_only = SourceConfig([[0, 0, 0], [1, 0, 0]], [IbcParams.single_source(2.0), IbcParams.single_source(3.0)])
    assert np.allclose(s_matrix(diag_only, lam), np.diag([0.5, 1 / 3]))
    S = s_matrix(pair(0.2, 1.3), lam)
    assert np.isclose(S[0, 0], S[1, 1]) and np.isclose(S[0, 1], S[1, 0])
    w, v = np.linalg.eigh(S.real)
    assert np.allclose(np.abs(v), 1 / np.sqrt(2))


def test_solve_phi_examples():
    one = SourceConfig([[0, 0, 0]], [IbcParams(alpha=1.0, beta=0.0, gamma=0.0, delta=1.0)])
    phi = solve_phi(one, 3.0)
    assert np.allclose(phi.coeffs, [1.0]) and np.isclose(phi.decays[0], np.sqrt(3.0))
    cfg, lam = pair(0.2, 1.3), 2.0
    G12 = gram_matrix(cfg, lam)[0, 1]
    c = 1 / (0.2 + np.sqrt(lam) / (4 * np.pi) + G12)
    assert np.allclose(solve_phi(cfg, lam).coeffs, [c, c])


def test_not_in_range():
    a = -0.1
    lam = (4 * np.pi * a) ** 2  # alpha + sqrt(lambda) beta / (4 pi) = 0
    with pytest.raises(NotInRangeError):
        solve_phi(SourceConfig([[0, 0, 0]], [P(a)]), lam)


@given(seeds)
def test_solve_phi_boundary_audit(seed):
    rng = np.random.default_rng(seed)
    cfg = random_source_config(rng)
    phi = solve_phi(cfg, cfg.e0)
    for k, p in enumerate(cfg.params):
        assert abs(eval_X(phi, k, p) - 1) <= 1e-10


@given(st.floats(0.1, 5.0), st.floats(0.05, 9.0))
def test_single_source_ground_energy(g, e0):
    cfg = SourceConfig([[0, 0, 0]], [IbcParams.single_source(g)], e0)
    assert abs(ground_energy_multisource(cfg) - ibc_ground_energy(g, e0)) <= 1e-12 * max(1.0, ibc_ground_energy(g, e0))


@given(seeds)
def test_ground_energy_is_real(seed):
    rng = np.random.default_rng(seed)
    _, im = ground_energy_multisource(random_source_config(rng), return_imag=True)
    assert abs(im) <= 1e-10


def test_far_sources_decouple():
    g, e0 = 1.3, 1.0
    p = IbcParams.single_source(g)
    one = ground_energy_multisource(SourceConfig([[0, 0, 0]], [p], e0))
    for d in (5.0, 10.0, 20.0):
        two = ground_energy_multisource(SourceConfig([[0, 0, 0], [d, 0, 0]], [p, p], e0))
        # each A_i still sees the other source's tail g f(d), hence 2 g^2 |f_sqrt(e0)(d)|
        coupling = 2 * g**2 * np.exp(-np.sqrt(e0) * d) / (4 * np.pi * d)
        assert np.isclose(abs(two - 2 * one), coupling, rtol=1e-10)
    a = P(-0.05)
    one = ground_energy_multisource(SourceConfig([[0, 0, 0]], [a], e0))
    errs = []
    for d in (5.0, 10.0, 20.0):
        two = ground_energy_multisource(SourceConfig([[0, 0, 0], [d, 0, 0]], [a, a], e0))
        errs.append(abs(two - 2 * one))
    assert errs[0] > errs[1] > errs[2] and errs[2] < 10 * np.exp(-20.0)


@pytest.mark.parametrize("a", [-1 / (4 * np.pi), -0.3, -0.02])
def test_single_source_root(a):
    roots = point_interaction_eigenvalues(SourceConfig([[0, 0, 0]], [P(a)], 1.0))
    assert len(roots) == 1
    lam = 16 * np.pi**2 * a**2
    assert abs(roots[0].lambda_root - lam) <= 1e-10 * max(1.0, lam)
    assert np.isclose(roots[0].energy, 1.0 - lam)


@pytest.mark.parametrize("a", [0.0, 0.01, 2.0])
def test_no_root_for_nonnegative_length(a):
    assert point_interaction_eigenvalues(SourceConfig([[0, 0, 0]], [P(a)], 1.0)) == []


def test_two_source_roots_against_branch_oracle(oracles):
    for row in oracles["two_source_roots"]:
        expected = sorted(x for x in (row["plus"], row["minus"]) if x is not None)
        got = [r.lambda_root for r in point_interaction_eigenvalues(pair(row["a"], row["d"]))]
        assert np.allclose(got, expected, rtol=1e-8, atol=0)


@given(st.floats(0, 2 * np.pi), st.floats(0, 2 * np.pi))
def test_roots_do_not_depend_on_phases(t1, t2):
    base = [r.lambda_root for r in point_interaction_eigenvalues(pair(-0.3, 0.7))]
    cfg = SourceConfig([[0, 0, 0], [0, 0, 0.7]], [P(-0.3, t1), P(-0.3, t2)], 1.0)
    got = [r.lambda_root for r in point_interaction_eigenvalues(cfg)]
    assert np.allclose(got, base, rtol=1e-12)
    for lam in got:
        assert abs(np.linalg.det(s_matrix(cfg, lam))) <= 1e-12 * np.abs(s_matrix(cfg, lam)).max() ** 2


@given(seeds)
def test_reduced_gamma_eigenvalues_increase(seed):
    rng = np.random.default_rng(seed)
    cfg = SourceConfig(rng.uniform(-1, 1, (3, 3)), [P(x) for x in rng.uniform(-0.5, 0.5, 3)])
    lams = np.linspace(0.01, 30, 25)
    eig = np.array([np.linalg.eigvalsh(reduced_gamma(cfg, x)) for x in lams])
    assert (np.diff(eig, axis=0) >= -1e-12).all()


def test_boundary_root_advisory():
    cfg = SourceConfig([[0, 0, 0]], [P(-1 / (4 * np.pi))], 1.0)
    with pytest.warns(RuntimeWarning, match="widen"):
        point_interaction_eigenvalues(cfg, (0.1, 0.5))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert len(point_interaction_eigenvalues(cfg, (0.1, 2.0))) == 1
    with pytest.raises(InvalidArgumentError):
        point_interaction_eigenvalues(cfg, (2.0, 1.0))


def test_sources_without_beta_have_no_roots():
    cfg = SourceConfig([[0, 0, 0], [1, 0, 0]], [IbcParams.single_source(1.0), IbcParams.single_source(-2.0)])
    assert point_interaction_eigenvalues(cfg) == []
    rep = check_bounded_below(cfg)
    assert rep.strictly_positive and rep.bounded_below


def test_bounded_below_single_source_threshold():
    e0 = 2.0
    thr = -np.sqrt(e0) / (4 * np.pi)
    marginal = check_bounded_below(SourceConfig([[0, 0, 0]], [P(thr)], e0))
    assert not marginal.strictly_positive and np.isclose(marginal.threshold, thr)
    above = check_bounded_below(SourceConfig([[0, 0, 0]], [P(thr + 1e-3)], e0))
    assert above.strictly_positive and above.bounded_below
    positive = check_bounded_below(SourceConfig([[0, 0, 0]], [P(0.5)], e0))
    assert positive.strictly_positive and positive.roots == ()


def test_bounded_below_two_sources():
    deep = check_bounded_below(pair(-0.3, 0.7))
    assert not deep.strictly_positive and deep.bounded_below is None
    assert np.isclose(deep.lambda_max, max(r.lambda_root for r in deep.roots))


@given(seeds)
def test_ker_x_identity(seed):
    rng = np.random.default_rng(seed)
    cfg = random_source_config(rng)
    phi = solve_phi(cfg, cfg.e0)
    psi = sample_ker_x(cfg, rng)
    for k, p in enumerate(cfg.params):
        assert abs(eval_X(psi, k, p)) <= 1e-12 * max(1.0, np.abs(psi.coeffs).max())
    lhs, rhs = ker_x_identity_terms(cfg, phi, psi)
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs))


def test_ker_x_identity_sign_is_not_the_reversed_one():
    # <phi, (-D* + e0) psi> - <(-D* + e0) phi, psi> is the negative of sum Y_i(psi)
    rng = np.random.default_rng(8)
    cfg = random_source_config(rng, n=2)
    phi = solve_phi(cfg, cfg.e0)
    psi = sample_ker_x(cfg, rng)
    lhs, _ = ker_x_identity_terms(cfg, phi, psi)
    e0 = cfg.e0
    reversed_form = inner_product(phi, apply_minus_laplacian_star(psi, e0)) - inner_product(
        apply_minus_laplacian_star(phi, e0), psi
    )
    assert abs(lhs) > 1e-3
    assert np.isclose(lhs, -reversed_form, rtol=1e-10)
