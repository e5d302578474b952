"""Compute reference values independently of the package and freeze them to JSON.

Run once; the test suite reads ``tests/data/oracles.json``.  Nothing here
imports ``vanhove_ibc``.

* ``overlap``: <f_a(. - xi_1), f_b(. - xi_2)> for |xi_1 - xi_2| = d by Fourier
  quadrature,

      (1 / (2 pi^2 d)) int_0^inf k sin(k d) / ((k^2 + a^2)(k^2 + b^2)) dk,

  using QUADPACK's oscillatory Fourier-integral rule on the half line.
* ``two_source_roots``: for two equal sources with inverse scattering length
  a at distance d, roots s = sqrt(lambda) of a + s/(4 pi) = +-e^{-s d}/(4 pi d),
  one scalar bisection per branch.
* ``dressing_norm``: ||g h^{-1} chi||^2 over [0, inf) by adaptive quadrature
  of the radial integrand, for comparison with g^2 / (8 pi sqrt(e0)).
"""

import json
from pathlib import Path

import numpy as np
from scipy.integrate import quad
from scipy.optimize import bisect

OUT = Path(__file__).resolve().parents[1] / "tests" / "data" / "oracles.json"


def overlap_by_quadrature(a, b, d):
    f = lambda k: k / ((k * k + a * a) * (k * k + b * b))
    # finite head with the sine-weighted rule, then the Fourier rule on the tail;
    # the Fourier rule alone loses accuracy when the first cycles are long
    head, e1 = quad(f, 0.0, 50.0, weight="sin", wvar=d, epsabs=1e-16, epsrel=1e-14, limit=500)
    tail, e2 = quad(f, 50.0, np.inf, weight="sin", wvar=d, epsabs=1e-16, limlst=200)
    scale = 2.0 * np.pi**2 * d
    return (head + tail) / scale, (e1 + e2) / scale


def two_source_branch_roots(a, d):
    roots = {}
    for name, sign in (("plus", 1.0), ("minus", -1.0)):
        f = lambda s: a + s / (4 * np.pi) - sign * np.exp(-s * d) / (4 * np.pi * d)
        lo, hi = 1e-12, 4 * np.pi * (abs(a) + 1.0 / (4 * np.pi * d)) + 1.0
        if f(lo) * f(hi) < 0:
            s = bisect(f, lo, hi, xtol=1e-15, rtol=1e-15, maxiter=500)
            roots[name] = s * s
        else:
            roots[name] = None
    return roots


def dressing_norm_by_quadrature(g, e0):
    f = lambda k: k * k / (k * k + e0) ** 2
    val, _ = quad(f, 0.0, np.inf, epsabs=0, epsrel=1e-13, limit=200)
    return g * g / (2 * np.pi**2) * val


def main():
    rng = np.random.default_rng(20240917)
    triples = [(1.0, 1.0, 1.0), (1.0, 2.0, 1.0), (0.5, 0.5, 0.1), (3.0, 0.4, 2.5), (1.0, 1.0 + 1e-9, 0.7)]
    while len(triples) < 20:
        a, b = rng.uniform(0.2, 3.0, 2)
        triples.append((float(a), float(b), float(rng.uniform(0.05, 3.0))))
    overlap = []
    for a, b, d in triples:
        val, err = overlap_by_quadrature(a, b, d)
        overlap.append({"gamma1": a, "gamma2": b, "d": d, "value": val, "quad_error": err})

    configs = [(-0.3, 0.7), (-0.1, 1.0), (-0.5, 0.3), (0.02, 2.0), (-0.05, 4.0)]
    two = [{"a": a, "d": d, **two_source_branch_roots(a, d)} for a, d in configs]

    norms = [{"g": g, "e0": e0, "value": dressing_norm_by_quadrature(g, e0)}
             for g, e0 in ((1.0, 1.0), (2.0, 4.0), (0.3, 0.25))]

    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps({"overlap": overlap, "two_source_roots": two, "dressing_norm": norms}, indent=2) + "\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
