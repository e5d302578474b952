"""Randomised checks of the algebraic identities the package relies on.

Each suite draws ``trials`` random instances, evaluates an identity that holds
exactly in infinite precision, and reports the largest observed error against
a fixed tolerance.  Used by the ``identities`` subcommand and the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coherent import CoherentVector, coherent_inner, pull_through_defect, pull_through_scalar, weyl_apply
from .fock_space import FockBasis, annihilator, creator, polarization_decompose, symmetrize, tensor_power
from .multisource import SourceConfig, ground_energy_multisource, ker_x_identity_terms, sample_ker_x, solve_phi
from .yukawa_algebra import IbcParams, YukawaFunction, eval_B, symmetry_defect, two_sector_ibc_symmetry


@dataclass(frozen=True)
class SuiteResult:
    name: str
    trials: int
    max_error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.max_error <= self.tolerance)

    def as_dict(self) -> dict:
        return {"trials": self.trials, "max_error": self.max_error, "tolerance": self.tolerance, "passed": self.passed}


def _cvec(rng, n, scale=1.0):
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return scale * v


def _unit_ball(rng, n, radius):
    v = _cvec(rng, n)
    return v * (radius * rng.uniform(0.2, 1.0) / np.linalg.norm(v))


# -- random instances ----------------------------------------------------------


def random_yukawa(rng, sources, n_terms=None, complex_decays=False) -> YukawaFunction:
    n_src = np.asarray(sources).shape[0]
    n_terms = n_terms or int(rng.integers(1, 5))
    decays = rng.uniform(0.3, 3.0, n_terms).astype(complex)
    if complex_decays:
        decays += 1j * rng.uniform(-1.0, 1.0, n_terms)
    return YukawaFunction(sources, rng.integers(0, n_src, n_terms), _cvec(rng, n_terms), decays)


def random_sources(rng, n) -> np.ndarray:
    while True:
        pos = rng.uniform(-1.5, 1.5, (n, 3))
        d = np.linalg.norm(pos[:, None] - pos[None], axis=-1) + np.eye(n) * 10
        if d.min() > 0.2:
            return pos


def random_params(rng) -> IbcParams:
    """Random (theta, alpha, beta, gamma, delta) with alpha delta - beta gamma = 1."""
    theta = rng.uniform(0, 2 * np.pi)
    alpha, beta, gamma = rng.uniform(-2, 2, 3)
    if abs(alpha) < 0.1:
        alpha = 0.1 + abs(alpha)
    delta = (1.0 + beta * gamma) / alpha
    return IbcParams(theta, alpha, beta, gamma, delta)


def random_source_config(rng, n=None) -> SourceConfig:
    n = n or int(rng.integers(1, 4))
    return SourceConfig(random_sources(rng, n), [random_params(rng) for _ in range(n)], float(rng.uniform(0.3, 3.0)))


def random_ibc_pair(rng, g):
    """(psi0, psi1) with a single source obeying B psi1 = g psi0."""
    psi1 = random_yukawa(rng, np.zeros((1, 3)), complex_decays=True)
    return eval_B(psi1, 0) / g, psi1


# -- suites -------------------------------------------------------------------


def suite_ccr(rng, trials) -> SuiteResult:
    """[a(f), a*(h)] = <f, h> on states with fewer than n_max particles."""
    basis = FockBasis(3, 5)
    low = basis.particle_numbers < basis.n_max
    err = 0.0
    for _ in range(trials):
        f, h = _cvec(rng, 3), _cvec(rng, 3)
        a, ad = annihilator(basis, f).matrix, creator(basis, h).matrix
        comm = (a @ ad - ad @ a).toarray()
        target = np.vdot(f, h) * np.eye(basis.dim)
        err = max(err, np.abs((comm - target)[np.ix_(low, low)]).max() / max(1.0, abs(np.vdot(f, h))))
    return SuiteResult("ccr", trials, float(err), 1e-12)


def suite_polarization(rng, trials) -> SuiteResult:
    err = 0.0
    for _ in range(trials):
        n, d = int(rng.integers(1, 6)), int(rng.integers(1, 5))
        us = [_cvec(rng, d) for _ in range(n)]
        rebuilt = sum(c * tensor_power(v, n) for c, v in polarization_decompose(us))
        err = max(err, np.abs(rebuilt - symmetrize(us)).max())
    return SuiteResult("polarization", trials, float(err), 1e-12)


def suite_weyl(rng, trials) -> SuiteResult:
    """Inverse, unitarity on coherent pairs, and norm preservation of compositions."""
    err = 0.0
    for _ in range(trials):
        m = int(rng.integers(1, 8))
        u, v, p1, p2 = (_unit_ball(rng, m, 1.0) for _ in range(4))
        x = CoherentVector(u, complex(*rng.standard_normal(2)))
        back = weyl_apply(-p1, weyl_apply(p1, x))
        err = max(err, np.abs(back.u - x.u).max(), abs(back.prefactor - x.prefactor) / abs(x.prefactor))
        y = CoherentVector(v)
        ref = coherent_inner(x, y)
        got = coherent_inner(weyl_apply(p1, x), weyl_apply(p1, y))
        err = max(err, abs(got - ref) / abs(ref))
        twice = weyl_apply(p2, weyl_apply(p1, x))
        err = max(err, abs(twice.norm2() / x.norm2() - 1.0))
        undone = weyl_apply(-p1, weyl_apply(-p2, twice))
        err = max(err, np.abs(undone.u - x.u).max(), abs(undone.prefactor / x.prefactor - 1.0))
    return SuiteResult("weyl", trials, float(err), 1e-12)


def suite_pull_through(rng, trials, m=3, n_max=8) -> SuiteResult:
    """Defect of the dressing pull-through identity with ||u||, ||phi|| <= 0.25."""
    basis = FockBasis(m, n_max)
    err = 0.0
    for _ in range(trials):
        T = rng.uniform(0.5, 2.0, m)
        err = max(err, pull_through_defect(T, _unit_ball(rng, m, 0.25), _unit_ball(rng, m, 0.25), basis))
    return SuiteResult("pull_through", trials, float(err), 1e-8)


def suite_pull_through_scalar(rng, trials) -> SuiteResult:
    """With phi = T^{-1} psi the scalar G(T, phi) is <psi, T^{-1} psi>, independent of u."""
    err = 0.0
    for _ in range(trials):
        m = int(rng.integers(1, 10))
        T = rng.uniform(0.5, 2.0, m)
        psi, u = _cvec(rng, m), _cvec(rng, m)
        ref = np.vdot(psi, psi / T)
        err = max(err, abs(pull_through_scalar(T, psi / T, u) - ref) / abs(ref))
    return SuiteResult("pull_through_scalar", trials, float(err), 1e-12)


def suite_symmetry(rng, trials) -> SuiteResult:
    """Boundary-form identity in A/B and X/Y form for random Yukawa pairs (1-3 sources)."""
    err = 0.0
    for _ in range(trials):
        n = int(rng.integers(1, 4))
        src = random_sources(rng, n)
        phi, psi = random_yukawa(rng, src, complex_decays=True), random_yukawa(rng, src, complex_decays=True)
        params = [random_params(rng) for _ in range(n)]
        scale = max(1.0, np.abs(phi.coeffs).max() * np.abs(psi.coeffs).max())
        err = max(err, abs(symmetry_defect(phi, psi)) / scale, abs(symmetry_defect(phi, psi, params, "XY")) / scale)
    return SuiteResult("symmetry", trials, float(err), 1e-12)


def suite_two_sector(rng, trials) -> SuiteResult:
    err = 0.0
    for _ in range(trials):
        g = float(rng.uniform(0.2, 3.0)) * rng.choice([-1, 1])
        e0 = float(rng.uniform(0.1, 4.0))
        psi0, psi1 = random_ibc_pair(rng, g)
        phi0, phi1 = random_ibc_pair(rng, g)
        scale = max(1.0, abs(g) * np.abs(psi1.coeffs).max() * np.abs(phi1.coeffs).max())
        err = max(err, abs(two_sector_ibc_symmetry(psi0, psi1, g, e0, phi0, phi1)) / scale)
    return SuiteResult("two_sector", trials, float(err), 1e-12)


def suite_realness(rng, trials) -> SuiteResult:
    """Im sum_i Y_i(phi(e0)) for random admissible multi-source configurations."""
    err = 0.0
    for _ in range(trials):
        _, im = ground_energy_multisource(random_source_config(rng), return_imag=True)
        err = max(err, abs(im))
    return SuiteResult("realness", trials, float(err), 1e-10)


def suite_ker_x(rng, trials) -> SuiteResult:
    """sum_i Y_i(psi) against the inner-product form for psi in ker X."""
    err = 0.0
    for _ in range(trials):
        cfg = random_source_config(rng)
        phi = solve_phi(cfg, cfg.e0)
        lhs, rhs = ker_x_identity_terms(cfg, phi, sample_ker_x(cfg, rng))
        err = max(err, abs(lhs - rhs) / max(1.0, abs(rhs)))
    return SuiteResult("ker_x", trials, float(err), 1e-10)


SUITES = {
    "ccr": suite_ccr,
    "polarization": suite_polarization,
    "weyl": suite_weyl,
    "pull_through": suite_pull_through,
    "pull_through_scalar": suite_pull_through_scalar,
    "symmetry": suite_symmetry,
    "two_sector": suite_two_sector,
    "realness": suite_realness,
    "ker_x": suite_ker_x,
}


def run_all(seed: int = 0, trials: int = 50) -> dict[str, SuiteResult]:
    """Run every suite with its own child stream of ``seed``; order and results are deterministic."""
    children = np.random.SeedSequence(seed).spawn(len(SUITES))
    return {name: fn(np.random.default_rng(ss), trials) for (name, fn), ss in zip(SUITES.items(), children)}
