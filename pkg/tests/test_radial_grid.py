import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from vanhove_ibc.errors import CutoffExceedsGridError, InvalidArgumentError, UnsupportedParameterError
from vanhove_ibc.radial_grid import (
    DELTA_HAT,
    build_radial_grid,
    coupling_vector,
    cutoff_energy_shift,
    dressing_norm2,
    dressing_tail_norm2,
    one_particle_energies,
)


def test_gauss_legendre_is_exact_for_polynomials():
    grid = build_radial_grid(3.0, 8)
    for p in range(16):
        assert np.isclose(grid.weights @ grid.nodes**p, 3.0 ** (p + 1) / (p + 1), rtol=1e-13)


def test_midpoint_scheme_nodes():
    grid = build_radial_grid(2.0, 4, "midpoint")
    assert np.allclose(grid.nodes, [0.25, 0.75, 1.25, 1.75])
    assert np.allclose(grid.weights, 0.5)


@pytest.mark.parametrize("args", [(0.0, 4), (-1.0, 4), (np.inf, 4), (1.0, 0), (1.0, 2.5)])
def test_bad_grid_arguments(args):
    with pytest.raises(InvalidArgumentError):
        build_radial_grid(*args)


def test_unknown_scheme():
    with pytest.raises(InvalidArgumentError):
        build_radial_grid(1.0, 4, "simpson")


def test_grid_arrays_are_read_only():
    grid = build_radial_grid(1.0, 4)
    with pytest.raises(ValueError):
        grid.nodes[0] = 1.0


def test_energies():
    grid = build_radial_grid(5.0, 6)
    assert np.allclose(one_particle_energies(grid, 2.0), grid.nodes**2 + 2.0)


def test_coupling_vector_cut_and_scale():
    grid = build_radial_grid(10.0, 40)
    chi = coupling_vector(grid, 4.0, 2.0)
    inside = grid.nodes <= 4.0
    assert np.all(chi[~inside] == 0)
    assert np.allclose(chi[inside], 2.0 * DELTA_HAT * grid.measure()[inside])


def test_coupling_vector_errors():
    grid = build_radial_grid(10.0, 8)
    with pytest.raises(CutoffExceedsGridError):
        coupling_vector(grid, 10.5, 1.0)
    with pytest.raises(InvalidArgumentError):
        coupling_vector(grid, 0.0, 1.0)


def test_zero_coupling_gives_zero_vector():
    grid = build_radial_grid(10.0, 8)
    assert not coupling_vector(grid, 10.0, 0.0).any()


@pytest.mark.parametrize("lam", [5.0, 10.0, 20.0, 40.0])
def test_shift_closed_form_matches_quadrature(lam):
    grid = build_radial_grid(lam, 64)
    closed = cutoff_energy_shift(1.0, 1.0, lam)
    assert abs(closed - cutoff_energy_shift(1.0, 1.0, lam, grid)) <= 1e-8 * abs(closed)


def test_shift_known_value():
    # Lambda = sqrt(e0): -(g^2 / 2 pi^2)(1 - pi/4)
    assert np.isclose(cutoff_energy_shift(1.0, 1.0, 1.0), -(1 - np.pi / 4) / (2 * np.pi**2), rtol=1e-15)


@given(st.floats(1e-6, 5e-3), st.floats(0.5, 4.0))
def test_small_cutoff_series_branch(lam, e0):
    s = np.sqrt(e0)
    x = lam / s
    # leading behaviour -(g^2 / 2 pi^2) * Lambda^3 / (3 e0)
    lead = -(lam**3) / (3 * e0) / (2 * np.pi**2)
    assert np.isclose(cutoff_energy_shift(1.0, e0, lam), lead * (1 - 3 * x**2 / 5), rtol=1e-6)


def test_series_and_direct_branches_join():
    a = cutoff_energy_shift(1.0, 1.0, 1e-3 * (1 - 1e-12))
    b = cutoff_energy_shift(1.0, 1.0, 1e-3 * (1 + 1e-12))
    assert np.isclose(a, b, rtol=1e-6)


@given(st.lists(st.floats(0.1, 200.0), min_size=2, max_size=6, unique=True))
def test_shift_decreases_with_cutoff(lams):
    lams = sorted(lams)
    # cutoffs a few ulp apart give shifts equal to rounding
    assume(all(b > a * (1 + 1e-9) for a, b in zip(lams, lams[1:])))
    vals = [cutoff_energy_shift(1.0, 1.0, x) for x in lams]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_nonpositive_e0_rejected():
    for fn in (lambda: cutoff_energy_shift(1.0, 0.0, 5.0), lambda: dressing_norm2(1.0, -1.0),
               lambda: dressing_tail_norm2(1.0, 0.0, 1.0)):
        with pytest.raises(UnsupportedParameterError):
            fn()


def test_dressing_norm_against_oracle(oracles):
    for row in oracles["dressing_norm"]:
        assert np.isclose(dressing_norm2(row["g"], row["e0"]), row["value"], rtol=1e-12)


@given(st.floats(0.1, 3.0), st.floats(0.25, 4.0), st.floats(1.0, 60.0))
def test_tail_plus_grid_recovers_full_norm(g, e0, L):
    # the integrand peaks at k = sqrt(e0); 96 nodes resolve it for L / sqrt(e0) <= 120
    grid = build_radial_grid(L, 96)
    f = g * DELTA_HAT * grid.measure() / (grid.nodes**2 + e0)
    total = np.sum(f**2) + dressing_tail_norm2(g, e0, L)
    assert np.isclose(total, dressing_norm2(g, e0), rtol=1e-6)
