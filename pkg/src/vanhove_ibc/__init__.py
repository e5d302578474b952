"""Numerical companion for the van Hove model with point sources.

Cutoff Hamiltonians on truncated Fock spaces, their renormalisation flow,
closed-form checks against interior-boundary-condition (IBC) results, and
multi-source point-interaction machinery.
"""

from .coherent import CoherentVector, coherent_inner, expand_to_fock, pull_through_defect, weyl_apply
from .fock_space import FockBasis, SparseOperator, annihilator, creator, second_quantize_diagonal
from .multisource import SourceConfig, ground_energy_multisource, point_interaction_eigenvalues, solve_phi
from .radial_grid import RadialGrid, build_radial_grid, coupling_vector, cutoff_energy_shift
from .spectral import EigResult, dense_lowest, lanczos_lowest
from .vanhove_renorm import FlowConfig, FlowRow, build_cutoff_hamiltonian, ibc_ground_energy, renorm_flow
from .yukawa_algebra import IbcParams, YukawaFunction

__version__ = "0.1.0"
