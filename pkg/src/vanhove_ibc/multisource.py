"""Several point sources: Green matrix, S(lambda), dressing function and ground energy.

Source ``i`` sits at ``xi_i`` with boundary-condition parameters
(theta_i, alpha_i, beta_i, gamma_i, delta_i).  Writing w_l^lambda for the
Yukawa function f_sqrt(lambda) centred at xi_l, the parameter matrix

    S_ij(lambda) = delta_ij e^{i theta_i} (alpha_i + sqrt(lambda) beta_i / (4 pi))
                   + (1 - delta_ij) e^{i theta_i} beta_i G_ij(lambda)

maps coefficients c of sum_l c_l w_l^lambda to the values of the boundary
functionals X_k, and its singular points locate the bound states of the
point-interaction operator.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
from scipy.optimize import brentq

from .errors import InternalConsistencyError, InvalidArgumentError, InvalidConfigError, NotInRangeError
from .yukawa_algebra import (
    FOUR_PI,
    IbcParams,
    YukawaFunction,
    apply_minus_laplacian_star,
    eval_X,
    eval_Y,
    inner_product,
)

RANGE_TOL = 1e-10
X_AUDIT_TOL = 1e-10
IM_AUDIT_TOL = 1e-10
IM_FAIL_TOL = 1e-8


@dataclass(frozen=True)
class SourceConfig:
    positions: np.ndarray
    params: tuple
    e0: float = 1.0

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float)
        if pos.ndim == 1 and pos.size == 3:
            pos = pos[None, :]
        if pos.ndim != 2 or pos.shape[1] != 3 or pos.shape[0] < 1:
            raise InvalidConfigError(f"positions must be a non-empty (N, 3) array, got shape {pos.shape}", "sources")
        if not np.isfinite(pos).all():
            raise InvalidConfigError("positions must be finite", "sources")
        params = tuple(self.params)
        if len(params) != pos.shape[0]:
            raise InvalidConfigError(f"{pos.shape[0]} positions but {len(params)} parameter sets", "sources")
        for i, p in enumerate(params):
            if not isinstance(p, IbcParams):
                raise InvalidConfigError(f"entry {i} is not an IbcParams", f"sources[{i}]")
        if pos.shape[0] > 1:
            d = self.distances_of(pos)
            i, j = np.unravel_index(np.argmin(d + np.diag(np.full(len(d), np.inf))), d.shape)
            if d[i, j] <= 0:
                raise InvalidConfigError(f"sources {i} and {j} coincide", "sources")
        if not (np.isfinite(self.e0) and self.e0 > 0):
            raise InvalidConfigError(f"e0 must be positive, got {self.e0}", "model.e0")
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "params", params)

    @staticmethod
    def distances_of(pos) -> np.ndarray:
        return np.linalg.norm(pos[:, None, :] - pos[None, :, :], axis=-1)

    @property
    def n(self) -> int:
        return self.positions.shape[0]

    @property
    def distances(self) -> np.ndarray:
        return self.distances_of(self.positions)

    def _vec(self, name) -> np.ndarray:
        return np.array([getattr(p, name) for p in self.params], dtype=float)


def _check_lambda(lam):
    if not (np.isfinite(lam) and lam > 0):
        raise InvalidArgumentError(f"lambda must be positive, got {lam}")


def gram_matrix(cfg: SourceConfig, lam: float) -> np.ndarray:
    """G_ij = w_i^lambda(xi_j) = -e^{-sqrt(lambda) d_ij} / (4 pi d_ij); the diagonal is set to 0."""
    _check_lambda(lam)
    d = cfg.distances
    off = ~np.eye(cfg.n, dtype=bool)
    G = np.zeros((cfg.n, cfg.n), dtype=complex)
    G[off] = -np.exp(-np.sqrt(lam) * d[off]) / (FOUR_PI * d[off])
    return G


def _real_s_matrix(cfg: SourceConfig, lam: float) -> np.ndarray:
    """S(lambda) without the row phases e^{i theta_i}; real for real parameters."""
    alpha, beta = cfg._vec("alpha"), cfg._vec("beta")
    S0 = beta[:, None] * gram_matrix(cfg, lam).real
    S0[np.diag_indices(cfg.n)] = alpha + np.sqrt(lam) * beta / FOUR_PI
    return S0


def s_matrix(cfg: SourceConfig, lam: float) -> np.ndarray:
    phases = np.exp(1j * cfg._vec("theta"))
    return phases[:, None] * _real_s_matrix(cfg, lam)


def dressing_basis(cfg: SourceConfig, lam: float, coeffs) -> YukawaFunction:
    """sum_l coeffs_l w_l^lambda as a :class:`YukawaFunction`."""
    n = cfg.n
    return YukawaFunction(cfg.positions, np.arange(n), np.asarray(coeffs, dtype=complex), np.full(n, np.sqrt(lam)))


def solve_phi(cfg: SourceConfig, lam: float) -> YukawaFunction:
    """The dressing function phi(lambda) = sum_l c_l w_l^lambda with X_k(phi) = 1 for all k.

    Solves S(lambda) c = (1, ..., 1); a singular S is handled by least squares.
    Raises :class:`NotInRangeError` when the residual exceeds 1e-10 sqrt(N),
    and :class:`InternalConsistencyError` if the boundary functionals of the
    result, evaluated independently, miss 1 by more than 1e-10.
    """
    S = s_matrix(cfg, lam)
    ones = np.ones(cfg.n, dtype=complex)
    c, *_ = np.linalg.lstsq(S, ones, rcond=None)
    resid = np.linalg.norm(S @ c - ones)
    if resid > RANGE_TOL * np.sqrt(cfg.n):
        raise NotInRangeError(f"(1,...,1) is not in the range of S({lam}); residual {resid:.3e}")
    phi = dressing_basis(cfg, lam, c)
    x = np.array([eval_X(phi, k, p) for k, p in enumerate(cfg.params)])
    err = np.abs(x - 1.0).max()
    if err > X_AUDIT_TOL * max(1.0, np.abs(c).max()):
        raise InternalConsistencyError(f"X_k(phi) deviates from 1 by {err:.3e}")
    return phi


def boundary_energy(cfg: SourceConfig, phi: YukawaFunction) -> complex:
    """sum_i Y_i(phi)."""
    return complex(sum(eval_Y(phi, i, p) for i, p in enumerate(cfg.params)))


def ground_energy_multisource(cfg: SourceConfig, return_imag: bool = False):
    """C(phi(e0)) = sum_i Y_i(phi(e0)), which must be real.

    The imaginary part is returned alongside when ``return_imag`` is set; above
    1e-8 it is treated as an internal inconsistency.
    """
    total = boundary_energy(cfg, solve_phi(cfg, cfg.e0))
    scale = max(1.0, abs(total.real))
    if abs(total.imag) > IM_FAIL_TOL * scale:
        raise InternalConsistencyError(f"Im C(phi) = {total.imag:.3e} is not negligible")
    return (total.real, total.imag) if return_imag else total.real


# -- bound states ------------------------------------------------------------


@dataclass(frozen=True)
class PointRoot:
    lambda_root: float
    energy: float


def reduced_gamma(cfg: SourceConfig, lam: float, active=None) -> np.ndarray:
    """Real symmetric Gamma(lambda) = diag(a_i) + sqrt(lambda)/(4 pi) + G over sources with beta_i != 0.

    For those sources S(lambda) = diag(e^{i theta_i} beta_i) Gamma(lambda), so
    the two are singular together.
    """
    beta = cfg._vec("beta")
    active = np.flatnonzero(beta != 0) if active is None else active
    a = cfg._vec("alpha")[active] / beta[active]
    G = gram_matrix(cfg, lam).real[np.ix_(active, active)]
    return G + np.diag(a + np.sqrt(lam) / FOUR_PI)


def _gershgorin_top(cfg: SourceConfig, active) -> float:
    """A lambda above which Gamma(lambda) is positive definite."""
    beta = cfg._vec("beta")
    a = cfg._vec("alpha")[active] / beta[active]
    d = cfg.distances[np.ix_(active, active)]
    off = ~np.eye(len(active), dtype=bool)
    row = (np.where(off, 1.0 / np.where(off, d, 1.0), 0.0) / FOUR_PI).sum(axis=1)
    bound = np.max(-a + row) if len(active) else 0.0
    return (FOUR_PI * max(bound, 0.0)) ** 2 * 1.01 + 1.0


def point_interaction_eigenvalues(cfg: SourceConfig, search_interval=None, xtol: float = 1e-15) -> list[PointRoot]:
    """Zeros of det S(lambda) on ``search_interval`` with energies e0 - lambda, ascending.

    The row phases e^{i theta_i} only multiply det S by a unimodular constant,
    and sources with beta_i = 0 contribute the non-zero factor alpha_i, so the
    zeros are those of det Gamma(lambda) for the real symmetric matrix of
    :func:`reduced_gamma`.  d Gamma / d sqrt(lambda) is the Gram matrix of the
    functions w_l^lambda, hence positive semidefinite, and every sorted
    eigenvalue of Gamma is non-decreasing in lambda.  Each sorted eigenvalue
    that changes sign on the interval is bracketed and refined with Brent's
    method, which treats degenerate roots without special cases.

    Roots that land on an end of the interval trigger a warning suggesting a
    wider interval.
    """
    beta = cfg._vec("beta")
    active = np.flatnonzero(beta != 0)
    if active.size == 0:
        return []
    lo, hi = (1e-12, _gershgorin_top(cfg, active)) if search_interval is None else map(float, search_interval)
    if not (0 < lo < hi and np.isfinite(hi)):
        raise InvalidArgumentError(f"search interval must satisfy 0 < lo < hi, got ({lo}, {hi})")

    def eig(lam, j):
        return np.linalg.eigvalsh(reduced_gamma(cfg, lam, active))[j]

    roots = []
    at_edge = False
    for j in range(active.size):
        f_lo, f_hi = eig(lo, j), eig(hi, j)
        if f_lo == 0 or f_hi == 0:
            at_edge = True
            roots.append(lo if f_lo == 0 else hi)
            continue
        if f_lo > 0 or f_hi < 0:
            if search_interval is not None and f_hi < 0:
                at_edge = True  # a zero lies beyond hi
            continue
        # eigenvalue j is monotone in sqrt(lambda), so bracket in that variable
        s = brentq(lambda t: eig(t * t, j), np.sqrt(lo), np.sqrt(hi), xtol=xtol, rtol=1e-15, maxiter=200)
        roots.append(s * s)
    if at_edge:
        warnings.warn("a root lies on or beyond the search interval boundary; widen the interval", RuntimeWarning)
    roots.sort()
    return [PointRoot(lam, cfg.e0 - lam) for lam in roots]


@dataclass(frozen=True)
class BoundednessReport:
    roots: tuple
    lambda_max: float | None
    strictly_positive: bool
    bounded_below: bool | None  # None: not decided (N >= 2 without strict positivity)
    threshold: float | None  # N = 1: a_1 must exceed -sqrt(e0)/(4 pi)
    inverse_scattering_length: float | None


def check_bounded_below(cfg: SourceConfig) -> BoundednessReport:
    """Strict positivity of the one-particle operator e0 - Delta_pi.

    h-tilde is strictly positive exactly when no bound-state root reaches
    lambda = e0.  Strict positivity implies the Hamiltonian is bounded below
    with a unique ground state; otherwise no conclusion is drawn for N >= 2.
    For a single source the marginal case a_1 = -sqrt(e0)/(4 pi) is not
    strictly positive.
    """
    roots = point_interaction_eigenvalues(cfg)
    lam_max = roots[-1].lambda_root if roots else None
    strict = lam_max is None or cfg.e0 - lam_max > 0
    threshold = a1 = None
    if cfg.n == 1:
        p = cfg.params[0]
        threshold = -np.sqrt(cfg.e0) / FOUR_PI
        a1 = p.inverse_scattering_length
        if p.beta != 0:
            # decide from a_1 directly so the boundary case is exact
            strict = a1 > threshold
    bounded = True if strict else (False if cfg.n == 1 else None)
    return BoundednessReport(tuple(roots), lam_max, bool(strict), bounded, threshold, a1)


# -- kernel of X -------------------------------------------------------------


def sample_ker_x(cfg: SourceConfig, rng, aux_lambdas=None) -> YukawaFunction:
    """Random psi in the span of w_l^{lambda'} (two auxiliary lambda') with X_k(psi) = 0 for all k."""
    if aux_lambdas is None:
        aux_lambdas = (cfg.e0 * rng.uniform(1.5, 3.0), cfg.e0 * rng.uniform(3.5, 6.0))
    n = cfg.n
    cols = []
    for lam in aux_lambdas:
        for l in range(n):
            e = np.zeros(n)
            e[l] = 1.0
            f = dressing_basis(cfg, lam, e)
            cols.append([eval_X(f, k, p) for k, p in enumerate(cfg.params)])
    M = np.array(cols).T  # (N constraints, 2N coefficients)
    null = sla.null_space(M)
    w = null @ (rng.standard_normal(null.shape[1]) + 1j * rng.standard_normal(null.shape[1]))
    centers = np.tile(np.arange(n), len(aux_lambdas))
    decays = np.repeat(np.sqrt(np.asarray(aux_lambdas, dtype=float)), n)
    return YukawaFunction(cfg.positions, centers, w, decays)


def ker_x_identity_terms(cfg: SourceConfig, phi: YukawaFunction, psi: YukawaFunction) -> tuple[complex, complex]:
    """(sum_i Y_i(psi), <(-Delta* + e0) phi, psi> - <phi, (-Delta* + e0) psi>) for psi in ker X.

    With X_k(phi) = 1 and X_k(psi) = 0 the boundary-form identity in X/Y form
    reduces to sum_i Y_i(psi) = <Delta* phi, psi> - <phi, Delta* psi>, which is
    the second entry; the two entries agree to rounding.
    """
    lhs = boundary_energy(cfg, psi)
    rhs = inner_product(apply_minus_laplacian_star(phi, cfg.e0), psi) - inner_product(
        phi, apply_minus_laplacian_star(psi, cfg.e0)
    )
    return lhs, complex(rhs)
