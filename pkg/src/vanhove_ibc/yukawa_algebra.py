"""Closed-form algebra on finite spans of shifted Yukawa functions.

A :class:`YukawaFunction` is a finite sum

    psi(x) = sum_t c_t f_{gamma_t}(x - xi_{s_t}),   f_gamma(x) = -exp(-gamma |x|) / (4 pi |x|),

with centres ``xi`` taken from a declared source set.  On such sums the
adjoint Laplacian acts term-wise (Delta* f_gamma = gamma^2 f_gamma), the
boundary functionals A_i, B_i are explicit, and all L^2 inner products have
closed forms.  Smooth (H^2) parts are represented by equal-centre differences
f_{g1} - f_{g2}, which are regular at the centre.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError, InvalidParamsError, PreconditionError, UnknownSourceError

FOUR_PI = 4.0 * np.pi


@dataclass(frozen=True)
class IbcParams:
    """Boundary-condition parameters (theta, alpha, beta, gamma, delta) of one source.

    X = e^{i theta} (alpha B + beta A) fixes the boundary condition and
    Y = e^{i theta} (gamma B + delta A) is the creation/annihilation term.
    """

    theta: float = 0.0
    alpha: float = 1.0
    beta: float = 0.0
    gamma: float = 0.0
    delta: float = 1.0

    def __post_init__(self):
        det = self.alpha * self.delta - self.beta * self.gamma
        if not np.isclose(det, 1.0, rtol=0, atol=1e-12):
            raise InvalidParamsError(f"alpha*delta - beta*gamma must equal 1, got {det!r}")

    @classmethod
    def from_inverse_scattering_length(cls, a: float, theta: float = 0.0) -> "IbcParams":
        """Canonical parameters with alpha/beta = a (beta = delta = 1)."""
        return cls(theta=theta, alpha=a, beta=1.0, gamma=a - 1.0, delta=1.0)

    @classmethod
    def single_source(cls, g: float) -> "IbcParams":
        """The plain IBC B psi = g psi with creation term g A (theta = beta = gamma = 0)."""
        if g == 0:
            raise InvalidParamsError("coupling g = 0 has no representation alpha = 1/g")
        return cls(theta=0.0, alpha=1.0 / g, beta=0.0, gamma=0.0, delta=g)

    @property
    def inverse_scattering_length(self) -> float:
        return np.inf if self.beta == 0 else self.alpha / self.beta


def _as_sources(sources) -> np.ndarray:
    src = np.asarray(sources, dtype=float)
    if src.ndim == 1:
        src = src[None, :]
    if src.ndim != 2 or src.shape[1] != 3:
        raise InvalidArgumentError(f"sources must be an (N, 3) array, got shape {src.shape}")
    return src


@dataclass(frozen=True)
class YukawaFunction:
    """Finite linear combination of shifted Yukawa functions.

    Term ``t`` is ``coeffs[t] * f_{decays[t]}(x - sources[centers[t]])``.
    """

    sources: np.ndarray
    centers: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=int))
    coeffs: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))
    decays: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))

    def __post_init__(self):
        src = _as_sources(self.sources)
        centers = np.asarray(self.centers, dtype=int).ravel()
        coeffs = np.asarray(self.coeffs, dtype=complex).ravel()
        decays = np.asarray(self.decays, dtype=complex).ravel()
        if not centers.size == coeffs.size == decays.size:
            raise InvalidArgumentError("centers, coeffs and decays must have equal length")
        if centers.size and (centers.min() < 0 or centers.max() >= src.shape[0]):
            raise UnknownSourceError(f"term centre outside the declared {src.shape[0]} sources")
        if (decays.real <= 0).any():
            raise InvalidArgumentError("every decay needs a positive real part")
        for name, val in (("sources", src), ("centers", centers), ("coeffs", coeffs), ("decays", decays)):
            val.setflags(write=False)
            object.__setattr__(self, name, val)

    @classmethod
    def single(cls, sources, center: int, decay, coeff=1.0) -> "YukawaFunction":
        return cls(sources, [center], [coeff], [decay])

    @property
    def n_sources(self) -> int:
        return self.sources.shape[0]

    def _check_compatible(self, other: "YukawaFunction"):
        if self.sources.shape != other.sources.shape or not np.array_equal(self.sources, other.sources):
            raise InvalidArgumentError("functions are declared over different source sets")

    def __add__(self, other: "YukawaFunction") -> "YukawaFunction":
        self._check_compatible(other)
        return YukawaFunction(
            self.sources,
            np.concatenate([self.centers, other.centers]),
            np.concatenate([self.coeffs, other.coeffs]),
            np.concatenate([self.decays, other.decays]),
        )

    def __mul__(self, c) -> "YukawaFunction":
        return YukawaFunction(self.sources, self.centers, self.coeffs * c, self.decays)

    __rmul__ = __mul__

    def __neg__(self) -> "YukawaFunction":
        return self * -1.0

    def __sub__(self, other: "YukawaFunction") -> "YukawaFunction":
        return self + (-other)

    def __call__(self, x) -> np.ndarray:
        """Pointwise values at positions ``x`` of shape (..., 3)."""
        x = np.asarray(x, dtype=float)
        r = np.linalg.norm(x[..., None, :] - self.sources[self.centers], axis=-1)
        return (self.coeffs * yukawa(self.decays, r)).sum(axis=-1)


def yukawa(gamma, r):
    """f_gamma(r) = -exp(-gamma r) / (4 pi r)."""
    return -np.exp(-gamma * r) / (FOUR_PI * r)


def _expm1(z):
    """exp(z) - 1 for complex z without cancellation for small |z|."""
    x, y = z.real, z.imag
    return np.expm1(x) * np.cos(y) - 2.0 * np.sin(0.5 * y) ** 2 + 1j * np.exp(x) * np.sin(y)


def _one_minus_exp_over(z):
    """(1 - exp(-z)) / z for complex z, continuous at z = 0."""
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < 1e-6
    safe = np.where(small, 1.0, z)
    return np.where(small, 1.0 - z / 2.0 + z**2 / 6.0, -_expm1(-safe) / safe)


def yukawa_overlap(gamma1, gamma2, d):
    """<f_{gamma1}(. - xi_1), f_{gamma2}(. - xi_2)> for |xi_1 - xi_2| = d.

    Partial fractions of the Fourier representation give
    (e^{-a d} - e^{-b d}) / (4 pi d (b^2 - a^2)) with a = conj(gamma1),
    b = gamma2.  It is evaluated as

        e^{-a d} * phi((b - a) d) / (4 pi (a + b)),   phi(z) = (1 - e^{-z}) / z,

    which is continuous through d = 0 (value 1 / (4 pi (a + b))) and through
    the coincident-decay limit b = a (value e^{-a d} / (8 pi a)).
    """
    a = np.conj(np.asarray(gamma1, dtype=complex))
    b = np.asarray(gamma2, dtype=complex)
    d = np.asarray(d, dtype=float)
    return np.exp(-a * d) * _one_minus_exp_over((b - a) * d) / (FOUR_PI * (a + b))


def _distances(sources):
    diff = sources[:, None, :] - sources[None, :, :]
    return np.linalg.norm(diff, axis=-1)


def gram(f: YukawaFunction, g: YukawaFunction) -> np.ndarray:
    """Term-by-term overlap matrix <f_term_s, g_term_t> (coefficients excluded)."""
    f._check_compatible(g)
    d = _distances(f.sources)[np.ix_(f.centers, g.centers)]
    return yukawa_overlap(f.decays[:, None], g.decays[None, :], d)


def inner_product(f: YukawaFunction, g: YukawaFunction) -> complex:
    """L^2 inner product <f, g>, antilinear in ``f``."""
    return complex(np.conj(f.coeffs) @ gram(f, g) @ g.coeffs)


def norm2(f: YukawaFunction) -> float:
    return inner_product(f, f).real


def apply_minus_laplacian_star(f: YukawaFunction, e0: float) -> YukawaFunction:
    """(-Delta* + e0) f, using Delta* f_gamma = gamma^2 f_gamma term-wise."""
    return YukawaFunction(f.sources, f.centers, f.coeffs * (e0 - f.decays**2), f.decays)


def apply_laplacian_star(f: YukawaFunction) -> YukawaFunction:
    return YukawaFunction(f.sources, f.centers, f.coeffs * f.decays**2, f.decays)


def _check_index(f: YukawaFunction, i: int):
    if not (isinstance(i, (int, np.integer)) and 0 <= i < f.n_sources):
        raise UnknownSourceError(f"source index {i!r} not among the {f.n_sources} declared sources")


def eval_B(f: YukawaFunction, i: int) -> complex:
    """B_i f = -4 pi lim_{x -> xi_i} |x - xi_i| f(x)."""
    _check_index(f, i)
    return complex(f.coeffs[f.centers == i].sum())


def eval_A(f: YukawaFunction, i: int) -> complex:
    """A_i f = lim_{x -> xi_i} d/dr_i (r_i f(x)).

    A term centred at xi_i contributes c * gamma / (4 pi); a term centred
    elsewhere contributes its value c * f_gamma(xi_i - xi_l).
    """
    _check_index(f, i)
    own = f.centers == i
    total = (f.coeffs[own] * f.decays[own]).sum() / FOUR_PI
    other = ~own
    if other.any():
        r = np.linalg.norm(f.sources[f.centers[other]] - f.sources[i], axis=1)
        total += (f.coeffs[other] * yukawa(f.decays[other], r)).sum()
    return complex(total)


def eval_X(f: YukawaFunction, i: int, params: IbcParams) -> complex:
    """X_i = e^{i theta} (alpha B_i + beta A_i)."""
    return np.exp(1j * params.theta) * (params.alpha * eval_B(f, i) + params.beta * eval_A(f, i))


def eval_Y(f: YukawaFunction, i: int, params: IbcParams) -> complex:
    """Y_i = e^{i theta} (gamma B_i + delta A_i)."""
    return np.exp(1j * params.theta) * (params.gamma * eval_B(f, i) + params.delta * eval_A(f, i))


def symmetry_defect(phi: YukawaFunction, psi: YukawaFunction, params=None, form: str = "AB") -> complex:
    """Failure of the boundary-form identity for the adjoint Laplacian.

    Returns

        [<phi, Delta* psi> - <Delta* phi, psi>] - sum_i [<B_i phi, A_i psi> - <A_i phi, B_i psi>]

    (``form="AB"``), or the same with X_i, Y_i in place of B_i, A_i
    (``form="XY"``, which needs one :class:`IbcParams` per source).  Both
    vanish identically; the return value measures rounding and formula errors.
    """
    lhs = inner_product(phi, apply_laplacian_star(psi)) - inner_product(apply_laplacian_star(phi), psi)
    n = phi.n_sources
    rhs = 0j
    if form == "AB":
        for i in range(n):
            rhs += np.conj(eval_B(phi, i)) * eval_A(psi, i) - np.conj(eval_A(phi, i)) * eval_B(psi, i)
    elif form == "XY":
        if params is None or len(params) != n:
            raise InvalidArgumentError("form='XY' needs one IbcParams per source")
        for i, p in enumerate(params):
            rhs += np.conj(eval_X(phi, i, p)) * eval_Y(psi, i, p) - np.conj(eval_Y(phi, i, p)) * eval_X(psi, i, p)
    else:
        raise InvalidArgumentError(f"form must be 'AB' or 'XY', got {form!r}")
    return complex(lhs - rhs)


def two_sector_ibc_symmetry(psi0, psi1: YukawaFunction, g: float, e0: float, phi0=None, phi1=None,
                            atol: float = 1e-12) -> complex:
    """<phi, H psi> - <H phi, psi> for the zero/one-particle IBC Hamiltonian.

    H (psi0, psi1) = (g A psi1, (-Delta* + e0) psi1) on pairs obeying the
    interior-boundary condition B psi1 = g psi0 at a single source.  Without
    ``phi0, phi1`` the pair is paired with itself.
    """
    if phi0 is None and phi1 is None:
        phi0, phi1 = psi0, psi1
    elif phi0 is None or phi1 is None:
        raise InvalidArgumentError("give both phi0 and phi1 or neither")
    for name, (x0, x1) in (("psi", (psi0, psi1)), ("phi", (phi0, phi1))):
        if x1.n_sources != 1:
            raise InvalidArgumentError("the two-sector model has exactly one source")
        residual = eval_B(x1, 0) - g * x0
        if abs(residual) > atol * max(1.0, abs(g * x0)):
            raise PreconditionError(f"{name} violates the IBC B psi1 = g psi0 (residual {residual:.3e})")
    h_psi0, h_psi1 = g * eval_A(psi1, 0), apply_minus_laplacian_star(psi1, e0)
    h_phi0, h_phi1 = g * eval_A(phi1, 0), apply_minus_laplacian_star(phi1, e0)
    left = np.conj(phi0) * h_psi0 + inner_product(phi1, h_psi1)
    right = np.conj(h_phi0) * psi0 + inner_product(h_phi1, psi1)
    return complex(left - right)
