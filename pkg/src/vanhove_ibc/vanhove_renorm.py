"""Cutoff van Hove Hamiltonians, the renormalisation flow, and IBC comparisons.

With a sharp momentum cutoff the Hamiltonian

    H_Lambda = dGamma(h) + a(chi_Lambda) + a*(chi_Lambda),   h = k^2 + e0,

is exactly solvable: its ground state is the coherent vector
W(-h^{-1} chi_Lambda) Omega with energy E_Lambda = -<chi_Lambda, h^{-1} chi_Lambda>,
and the rest of its spectrum is E_Lambda plus the spectrum of dGamma(h).
Everything computed on a truncated Fock space is compared against that.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .coherent import CoherentVector, expand_to_fock, truncation_tail2
from .errors import InvalidArgumentError, UnsupportedParameterError
from .fock_space import FockBasis, SparseOperator, field_operator, second_quantize_diagonal
from .radial_grid import (
    DELTA_HAT,
    RadialGrid,
    build_radial_grid,
    coupling_vector,
    cutoff_energy_shift,
    one_particle_energies,
)
from .spectral import DENSE_LIMIT, EigResult, dense_lowest, lanczos_lowest

DEFAULT_LAMBDAS = (5.0, 10.0, 20.0, 40.0)


def _require_positive_e0(e0):
    if not e0 > 0:
        raise UnsupportedParameterError(f"E0 must be positive, got {e0}")


def build_cutoff_hamiltonian(grid: RadialGrid, basis: FockBasis, g: float, e0: float, lambda_cut: float) -> SparseOperator:
    """H_Lambda = dGamma(h) + a(chi) + a*(chi) with the coupling g folded into chi."""
    _require_positive_e0(e0)
    if basis.m != grid.size:
        raise InvalidArgumentError(f"basis has {basis.m} modes but the grid has {grid.size} nodes")
    chi = coupling_vector(grid, lambda_cut, g)
    free = second_quantize_diagonal(basis, one_particle_energies(grid, e0))
    if not np.any(chi.imag):
        chi = chi.real
    return SparseOperator(free.matrix + field_operator(basis, chi).matrix, hermitian=True)


def ibc_ground_energy(g: float, e0: float) -> float:
    """Lowest eigenvalue g^2 sqrt(e0) / (4 pi) of the IBC Hamiltonian."""
    _require_positive_e0(e0)
    return g**2 * np.sqrt(e0) / (4.0 * np.pi)


def c_constant(g: float, gamma: float, e0: float) -> float:
    """(e0 - gamma^2) ||g f_gamma||^2 + g^2 gamma / (4 pi), with ||f_gamma||^2 = 1/(8 pi gamma)."""
    if not gamma > 0:
        raise InvalidArgumentError(f"gamma must be positive, got {gamma}")
    return (e0 - gamma**2) * g**2 / (8.0 * np.pi * gamma) + g**2 * gamma / (4.0 * np.pi)


def dressing_vector(grid: RadialGrid, g: float, e0: float, lambda_cut: float | None = None) -> np.ndarray:
    """-h^{-1} chi on the grid: the argument of the exact cutoff ground state.

    ``lambda_cut=None`` keeps every grid mode, which is the grid version of
    g f_sqrt(e0).
    """
    _require_positive_e0(e0)
    h = one_particle_energies(grid, e0)
    if lambda_cut is None:
        chi = g * DELTA_HAT * grid.measure()
    else:
        chi = coupling_vector(grid, lambda_cut, g)
    return (-chi / h).astype(complex)


def ibc_ground_state(grid: RadialGrid, g: float, e0: float) -> CoherentVector:
    """Normalised e^{-||u||^2/2} eps(u) with u the grid coefficients of g f_sqrt(e0)."""
    u = dressing_vector(grid, g, e0)
    return CoherentVector(u, np.exp(-0.5 * np.vdot(u, u).real))


def _lowest(op: SparseOperator, k: int, tol: float, max_iter: int, seed: int) -> EigResult:
    if op.dim <= DENSE_LIMIT:
        return dense_lowest(op, k)
    return lanczos_lowest(op, k=k, tol=tol, max_iter=max_iter, seed=seed)


def _overlap(vec: np.ndarray, predicted: np.ndarray) -> float:
    return float(abs(np.vdot(predicted, vec)) / (np.linalg.norm(vec) * np.linalg.norm(predicted)))


@dataclass(frozen=True)
class FlowConfig:
    """Parameters of a renormalisation-flow run.

    With ``per_cutoff_grid`` every row gets its own ``nodes``-point grid on
    ``[0, Lambda]``, so the sharp cutoff sits on the grid endpoint.  Otherwise
    one grid on ``[0, lambda_max]`` is shared by all rows.
    """

    g: float = 1.0
    e0: float = 1.0
    lambda_list: tuple = DEFAULT_LAMBDAS
    nodes: int = 32
    n_max: int = 4
    scheme: str = "gauss-legendre"
    per_cutoff_grid: bool = True
    lambda_max: float | None = None
    tol: float = 2e-4
    max_iter: int = 2000
    seed: int = 0

    def __post_init__(self):
        _require_positive_e0(self.e0)
        lams = tuple(float(x) for x in self.lambda_list)
        if not lams:
            raise InvalidArgumentError("lambda_list is empty")
        if any(b <= a for a, b in zip(lams, lams[1:])):
            raise InvalidArgumentError(f"lambda_list must be strictly ascending, got {lams}")
        if lams[0] <= 0:
            raise InvalidArgumentError("cutoffs must be positive")
        object.__setattr__(self, "lambda_list", lams)
        if not self.per_cutoff_grid:
            lm = lams[-1] if self.lambda_max is None else float(self.lambda_max)
            object.__setattr__(self, "lambda_max", lm)

    def grid_for(self, lambda_cut: float) -> RadialGrid:
        top = lambda_cut if self.per_cutoff_grid else self.lambda_max
        return build_radial_grid(top, self.nodes, self.scheme)


@dataclass(frozen=True)
class FlowRow:
    lambda_cut: float
    e_shift_closed: float
    e_shift_quad: float
    e0_computed: float
    e1_computed: float
    renormalized_ground: float
    gap: float
    ground_overlap: float
    dim: int
    iters: int
    tail_budget: float
    converged: bool = True

    #: column order of the CSV output
    COLUMNS = (
        "lambda", "e_shift_closed", "e_shift_quad", "e0_computed", "e1_computed",
        "renormalized_ground", "gap", "ground_overlap", "dim", "iters", "tail_budget",
    )

    def values(self) -> tuple:
        return (
            self.lambda_cut, self.e_shift_closed, self.e_shift_quad, self.e0_computed, self.e1_computed,
            self.renormalized_ground, self.gap, self.ground_overlap, self.dim, self.iters, self.tail_budget,
        )


def flow_row(config: FlowConfig, lambda_cut: float, basis: FockBasis | None = None) -> FlowRow:
    """Solve H_Lambda on the truncated space and compare with its exact solution.

    ``renormalized_ground`` subtracts the grid quadrature of E_Lambda, which is
    the exact ground energy of the discretised model; the closed form is
    reported alongside.  ``tail_budget`` is the squared norm of the exact
    (normalised) ground state outside the truncated space.
    """
    grid = config.grid_for(lambda_cut)
    basis = basis or FockBasis(grid.size, config.n_max)
    H = build_cutoff_hamiltonian(grid, basis, config.g, config.e0, lambda_cut)
    res = _lowest(H, 2, config.tol, config.max_iter, config.seed)
    e_quad = cutoff_energy_shift(config.g, config.e0, lambda_cut, grid)
    e_closed = cutoff_energy_shift(config.g, config.e0, lambda_cut)

    u = dressing_vector(grid, config.g, config.e0, lambda_cut)
    norm_u2 = np.vdot(u, u).real
    predicted, _ = expand_to_fock(CoherentVector(u, np.exp(-0.5 * norm_u2)), basis)
    e0c, e1c = (float(x) for x in res.eigenvalues[:2])
    return FlowRow(
        lambda_cut=float(lambda_cut),
        e_shift_closed=e_closed,
        e_shift_quad=e_quad,
        e0_computed=e0c,
        e1_computed=e1c,
        renormalized_ground=e0c - e_quad,
        gap=e1c - e0c,
        ground_overlap=_overlap(res.eigenvectors[:, 0], predicted),
        dim=basis.dim,
        iters=res.iterations,
        tail_budget=float(np.exp(-norm_u2) * truncation_tail2(norm_u2, basis.n_max)),
        converged=res.converged,
    )


def renorm_flow(config: FlowConfig) -> list[FlowRow]:
    """One :class:`FlowRow` per cutoff, in ascending order of Lambda."""
    basis = FockBasis(config.nodes, config.n_max)
    return [flow_row(config, lam, basis) for lam in config.lambda_list]


@dataclass(frozen=True)
class SpectrumReport:
    eigenvalues: np.ndarray  # of H - E_Lambda + g^2 sqrt(e0)/(4 pi)
    e_min_predicted: float
    e_min_computed: float
    gap_predicted: float  # continuum edge above E_min, i.e. e0
    gap_computed: float
    grid_gap: float  # k_1^2 + e0, what the grid can resolve
    overlap: float
    multiplicity: int
    tail_budget: float
    residual_norms: np.ndarray
    converged: bool
    tolerances: dict = field(default_factory=dict)

    @property
    def energy_ok(self) -> bool:
        return abs(self.e_min_computed - self.e_min_predicted) <= self.tolerances["e_min"]

    @property
    def gap_ok(self) -> bool:
        return self.gap_computed >= self.gap_predicted - self.tolerances["gap"]

    @property
    def simple(self) -> bool:
        return self.multiplicity == 1 and self.gap_computed >= 0.9 * self.gap_predicted

    @property
    def passed(self) -> bool:
        return self.converged and self.energy_ok and self.gap_ok and self.simple


def ibc_spectrum_check(
    grid: RadialGrid,
    basis: FockBasis,
    g: float,
    e0: float,
    k: int = 2,
    tol: float = 2e-4,
    max_iter: int = 2000,
    seed: int = 0,
    energy_tol: float = 1e-6,
) -> SpectrumReport:
    """Lowest ``k`` eigenvalues of H_Lambda - E_Lambda + g^2 sqrt(e0)/(4 pi) at Lambda = lambda_max.

    The renormalised operator should have a simple ground state at
    g^2 sqrt(e0)/(4 pi), separated from the rest by at least e0 (on the grid
    by k_1^2 + e0).  The multiplicity of the lowest eigenvalue is estimated by
    counting computed eigenvalues within the Ritz-residual scale of it.
    """
    if k < 2:
        raise InvalidArgumentError("need k >= 2 to see the gap")
    lam = grid.lambda_max
    H = build_cutoff_hamiltonian(grid, basis, g, e0, lam)
    res = _lowest(H, k, tol, max_iter, seed)
    e_shift = cutoff_energy_shift(g, e0, lam, grid)
    e_pred = ibc_ground_energy(g, e0)
    vals = res.eigenvalues - e_shift + e_pred

    u = dressing_vector(grid, g, e0, lam)
    norm_u2 = np.vdot(u, u).real
    tail = float(np.exp(-norm_u2) * truncation_tail2(norm_u2, basis.n_max))
    predicted, _ = expand_to_fock(CoherentVector(u, np.exp(-0.5 * norm_u2)), basis)
    cluster = max(10.0 * float(res.residual_norms.max()), 1e-8)
    tolerances = {"e_min": energy_tol, "gap": float(res.residual_norms.max()) + tail, "cluster": cluster}
    return SpectrumReport(
        eigenvalues=vals,
        e_min_predicted=e_pred,
        e_min_computed=float(vals[0]),
        gap_predicted=float(e0),
        gap_computed=float(vals[1] - vals[0]),
        grid_gap=float(grid.nodes[0] ** 2 + e0),
        overlap=_overlap(res.eigenvectors[:, 0], predicted),
        multiplicity=int(np.sum(np.abs(vals - vals[0]) <= cluster)),
        tail_budget=tail,
        residual_norms=res.residual_norms,
        converged=res.converged,
        tolerances=tolerances,
    )
