"""Radial momentum grid for the s-wave sector of L^2(R^3).

A point source couples only to rotation-invariant modes, so the one-particle
space is reduced to the half line k > 0 with measure 4 pi k^2 dk.  Grid mode
``i`` is normalised so that mode vectors are orthonormal; a momentum-space
function F(|k|) is represented by the coefficients

    F_i = F(k_i) * sqrt(4 pi k_i^2 w_i),

and inner products become plain sums over the coefficient arrays.
One-particle vectors are therefore ordinary complex numpy arrays of length
``grid.size``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CutoffExceedsGridError, InvalidArgumentError, UnsupportedParameterError

#: Fourier transform of the delta function, (2 pi)^{-3/2}.
DELTA_HAT = (2.0 * np.pi) ** -1.5

SCHEMES = ("gauss-legendre", "midpoint")


@dataclass(frozen=True)
class RadialGrid:
    """Quadrature nodes and weights on ``(0, lambda_max)``."""

    nodes: np.ndarray
    weights: np.ndarray
    lambda_max: float
    scheme: str = "gauss-legendre"

    def __post_init__(self):
        for arr in (self.nodes, self.weights):
            arr.setflags(write=False)

    @property
    def size(self) -> int:
        return self.nodes.size

    def measure(self) -> np.ndarray:
        """sqrt(4 pi k_i^2 w_i): maps F(k_i) to orthonormal mode coefficients."""
        return np.sqrt(4.0 * np.pi * self.nodes**2 * self.weights)


def build_radial_grid(lambda_max: float, m: int, scheme: str = "gauss-legendre") -> RadialGrid:
    """Build an ``m``-node radial grid on ``[0, lambda_max]``.

    Parameters
    ----------
    lambda_max : float
        Upper integration endpoint (momentum units).
    m : int
        Number of nodes.
    scheme : {"gauss-legendre", "midpoint"}
        Quadrature rule.  Gauss-Legendre is exact for polynomials of degree
        ``2m - 1``; the midpoint rule is kept as a low-order comparison.
    """
    if not np.isfinite(lambda_max) or lambda_max <= 0:
        raise InvalidArgumentError(f"lambda_max must be positive, got {lambda_max}")
    if int(m) != m or m < 1:
        raise InvalidArgumentError(f"node count must be a positive integer, got {m}")
    m = int(m)
    if scheme == "gauss-legendre":
        x, w = np.polynomial.legendre.leggauss(m)
        nodes = 0.5 * lambda_max * (x + 1.0)
        weights = 0.5 * lambda_max * w
    elif scheme == "midpoint":
        h = lambda_max / m
        nodes = h * (np.arange(m) + 0.5)
        weights = np.full(m, h)
    else:
        raise InvalidArgumentError(f"unknown quadrature scheme {scheme!r}; expected one of {SCHEMES}")
    return RadialGrid(nodes=nodes, weights=weights, lambda_max=float(lambda_max), scheme=scheme)


def one_particle_energies(grid: RadialGrid, e0: float) -> np.ndarray:
    """Diagonal of h = -Laplacian + e0 on the grid: k_i^2 + e0."""
    return grid.nodes**2 + e0


def coupling_vector(grid: RadialGrid, lambda_cut: float, g: float) -> np.ndarray:
    """Sharp-cutoff source vector g * chi_Lambda in grid coordinates.

    chi_hat(k) = (2 pi)^{-3/2} for |k| <= lambda_cut and zero above.
    """
    if lambda_cut <= 0:
        raise InvalidArgumentError(f"lambda_cut must be positive, got {lambda_cut}")
    if lambda_cut > grid.lambda_max:
        raise CutoffExceedsGridError(
            f"cutoff {lambda_cut} exceeds grid endpoint {grid.lambda_max}; "
            "modes above the endpoint are not represented"
        )
    inside = grid.nodes <= lambda_cut
    return np.where(inside, g * DELTA_HAT * grid.measure(), 0.0).astype(complex)


def _require_positive_e0(e0):
    if not e0 > 0:
        raise UnsupportedParameterError(f"E0 must be positive (h must be invertible), got {e0}")


def cutoff_energy_shift(g: float, e0: float, lambda_cut: float, grid: RadialGrid | None = None) -> float:
    """Renormalisation constant E_Lambda = -g^2 <chi, h^{-1} chi>.

    With ``grid=None`` the closed form for the sharp cutoff is returned,

        E_Lambda = -(g^2 / (2 pi^2)) * (Lambda - sqrt(e0) * arctan(Lambda / sqrt(e0))),

    otherwise the grid quadrature -sum_i chi_i^2 / (k_i^2 + e0).
    """
    _require_positive_e0(e0)
    if grid is None:
        if lambda_cut < 0:
            raise InvalidArgumentError(f"lambda_cut must be non-negative, got {lambda_cut}")
        s = np.sqrt(e0)
        # Lambda - s*arctan(Lambda/s) loses digits for Lambda << s; use its series there.
        x = lambda_cut / s
        if x < 1e-3:
            core = s * (x**3 / 3 - x**5 / 5 + x**7 / 7)
        else:
            core = lambda_cut - s * np.arctan(x)
        return float(-(g**2) / (2.0 * np.pi**2) * core)
    chi = coupling_vector(grid, lambda_cut, g)
    return float(-np.sum(np.abs(chi) ** 2 / one_particle_energies(grid, e0)))


def dressing_norm2(g: float, e0: float) -> float:
    """||g h^{-1} delta||^2 = ||g f_sqrt(e0)||^2 = g^2 / (8 pi sqrt(e0))."""
    _require_positive_e0(e0)
    return g**2 / (8.0 * np.pi * np.sqrt(e0))


def dressing_tail_norm2(g: float, e0: float, lambda_max: float) -> float:
    """Part of ||g h^{-1} delta||^2 carried by momenta above ``lambda_max``.

    (g^2 / (2 pi^2)) * int_L^inf k^2 / (k^2 + e0)^2 dk, in closed form.
    """
    _require_positive_e0(e0)
    a = np.sqrt(e0)
    L = lambda_max
    # pi/2 - arctan(L/a) = arctan(a/L) keeps accuracy for large L
    integral = np.arctan2(a, L) / (2.0 * a) + L / (2.0 * (L**2 + a**2))
    return float(g**2 / (2.0 * np.pi**2) * integral)
