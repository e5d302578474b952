"""Two equal attractive sources: bound-state branches against the separation d.

For each d prints the roots lambda of det S(lambda) = 0, the corresponding
energies e0 - lambda, and the ground energy of the dressed model.  The
ground energy is singular where a root crosses lambda = e0, because S(e0)
is then not invertible (near d = 1 for the defaults).
"""

import argparse

import numpy as np

from vanhove_ibc.multisource import SourceConfig, ground_energy_multisource, point_interaction_eigenvalues
from vanhove_ibc.yukawa_algebra import IbcParams


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--a", type=float, default=-0.05, help="inverse scattering length of both sources")
    p.add_argument("--e0", type=float, default=1.0)
    args = p.parse_args()

    params = IbcParams.from_inverse_scattering_length(args.a)
    print(f"single source: lambda = {16 * np.pi**2 * args.a**2:.10f}" if args.a < 0 else "single source: no bound state")
    print(f"{'d':>6} {'roots lambda':>30} {'ground energy':>16}")
    for d in (0.25, 0.5, 1.0, 2.0, 4.0, 8.0):
        cfg = SourceConfig([[0, 0, 0], [0, 0, d]], [params, params], args.e0)
        roots = ", ".join(f"{r.lambda_root:.8f}" for r in point_interaction_eigenvalues(cfg)) or "-"
        print(f"{d:6.2f} {roots:>30} {ground_energy_multisource(cfg):16.10f}")


if __name__ == "__main__":
    main()
