"""Coherent vectors and Weyl (dressing) operators.

A coherent vector ``prefactor * eps(u)`` has n-particle component
``prefactor * u^{(x) n} / sqrt(n!)``.  Weyl operators are only ever applied
to coherent vectors, where they act in closed form:

    W(phi) eps(u) = exp(-<phi, u> - ||phi||^2 / 2) eps(u + phi).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammainc, gammaln

from .errors import InvalidArgumentError, PreconditionError
from .fock_space import FockBasis, annihilator, creator, second_quantize_diagonal


@dataclass(frozen=True)
class CoherentVector:
    u: np.ndarray
    prefactor: complex = 1.0

    def __post_init__(self):
        u = np.array(self.u, dtype=complex).ravel()
        u.setflags(write=False)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "prefactor", complex(self.prefactor))

    def norm2(self) -> float:
        return abs(self.prefactor) ** 2 * np.exp(np.vdot(self.u, self.u).real)

    def normalized(self) -> "CoherentVector":
        return CoherentVector(self.u, self.prefactor / np.sqrt(self.norm2()))


def _same_modes(a, b):
    if a.size != b.size:
        raise InvalidArgumentError(f"mode counts differ ({a.size} vs {b.size})")


def coherent_inner(v: CoherentVector, u: CoherentVector) -> complex:
    """<c_v eps(v), c_u eps(u)> = conj(c_v) c_u exp(<v, u>)."""
    _same_modes(v.u, u.u)
    return complex(np.conj(v.prefactor) * u.prefactor * np.exp(np.vdot(v.u, u.u)))


def weyl_apply(phi, x: CoherentVector) -> CoherentVector:
    phi = np.asarray(phi, dtype=complex)
    _same_modes(phi, x.u)
    factor = np.exp(-np.vdot(phi, x.u) - 0.5 * np.vdot(phi, phi).real)
    return CoherentVector(x.u + phi, x.prefactor * factor)


def vacuum_state(m: int) -> CoherentVector:
    return CoherentVector(np.zeros(m))


def truncation_tail2(norm2_u: float, n_max: int) -> float:
    """sum_{n > n_max} x^n / n! for x = ||u||^2, i.e. e^x minus its Taylor polynomial."""
    return float(np.exp(norm2_u) * gammainc(n_max + 1, norm2_u)) if norm2_u > 0 else 0.0


def expand_to_fock(x: CoherentVector, basis: FockBasis) -> tuple[np.ndarray, float]:
    """Components of ``x`` on the truncated basis, and the norm of what was cut off.

    Occupation state (n_1, ..., n_m) gets ``prefactor * prod_i u_i^{n_i} / sqrt(n_i!)``.
    """
    _same_modes(x.u, np.zeros(basis.m))
    occ = basis.occupations
    amp = np.prod(np.power(x.u[None, :], occ), axis=1)
    amp = amp * np.exp(-0.5 * gammaln(occ + 1.0).sum(axis=1))
    tail2 = abs(x.prefactor) ** 2 * truncation_tail2(np.vdot(x.u, x.u).real, basis.n_max)
    return x.prefactor * amp, float(np.sqrt(tail2))


def pull_through_scalar(T_energies, phi, u) -> complex:
    """G(T, phi) on eps(u): <phi, T u> - <T phi, u> + <phi, T phi>."""
    T = np.asarray(T_energies, dtype=float)
    phi = np.asarray(phi, dtype=complex)
    u = np.asarray(u, dtype=complex)
    return complex(np.vdot(phi, T * u) - np.vdot(T * phi, u) + np.vdot(phi, T * phi))


def _contour_derivative(F, radius: float, points: int = 24):
    """F'(0) for an entire vector-valued F by the trapezoidal Cauchy integral."""
    ts = radius * np.exp(2j * np.pi * np.arange(points) / points)
    return sum(F(t) / t for t in ts) / points


def dressed_generator_state(T_energies, phi, u, basis: FockBasis) -> np.ndarray:
    """W(-phi) dGamma(T) W(phi) eps(u), projected onto the truncated space.

    dGamma(T) is taken as the generator of Gamma(e^{tT}), which maps eps(w) to
    eps(e^{tT} w); every vector along the way stays coherent, so the Weyl
    operators act exactly, and the t-derivative at 0 is taken by a contour
    integral (exact up to rounding for these entire functions of t).
    """
    T = np.asarray(T_energies, dtype=float)
    phi = np.asarray(phi, dtype=complex)
    dressed = weyl_apply(phi, CoherentVector(u))

    def F(t):
        moved = CoherentVector(np.exp(t * T) * dressed.u, dressed.prefactor)
        return expand_to_fock(weyl_apply(-phi, moved), basis)[0]

    scale = max(np.abs(T).max(), 1e-300)
    return _contour_derivative(F, radius=0.1 / scale)


def pull_through_defect(T_energies, phi, u, basis: FockBasis, tail_tol: float = 1e-10) -> float:
    """Norm of W(-phi) dGamma(T) W(phi) eps(u) - [dGamma(T) + a*(T phi) + a(T phi) + G] eps(u).

    The left side is built from exact coherent-vector actions (see
    :func:`dressed_generator_state`), the right side from sparse matrices on
    the truncated space.  Both are compared on sectors <= n_max; the residual
    comes from the sector-(n_max + 1) component that a(T phi) would bring
    down.  ``tail_tol`` bounds the squared truncation tails of eps(u) and
    eps(u + phi).
    """
    T = np.asarray(T_energies, dtype=float)
    phi = np.asarray(phi, dtype=complex)
    u = np.asarray(u, dtype=complex)
    if T.shape != (basis.m,) or phi.shape != (basis.m,) or u.shape != (basis.m,):
        raise InvalidArgumentError(f"T, phi and u must all have length {basis.m}")
    for name, w in (("u", u), ("u + phi", u + phi)):
        tail2 = truncation_tail2(np.vdot(w, w).real, basis.n_max)
        if tail2 > tail_tol:
            raise PreconditionError(f"coherent tail of eps({name}) is {tail2:.3e} > {tail_tol:.1e}; raise n_max")
    if not phi.any():
        return 0.0
    lhs = dressed_generator_state(T, phi, u, basis)
    psi_u, _ = expand_to_fock(CoherentVector(u), basis)
    Tphi = T * phi
    rhs = (
        second_quantize_diagonal(basis, T) @ psi_u
        + creator(basis, Tphi) @ psi_u
        + annihilator(basis, Tphi) @ psi_u
        + pull_through_scalar(T, phi, u) * psi_u
    )
    return float(np.linalg.norm(lhs - rhs))
