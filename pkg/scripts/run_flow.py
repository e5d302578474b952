"""Print the cutoff flow of H_Lambda - E_Lambda as a table.

    python3 scripts/run_flow.py                 # defaults: m = 32, n_max = 4
    python3 scripts/run_flow.py --nodes 12 --n-max 6 --tol 1e-8
"""

import argparse
import time

from vanhove_ibc import FlowConfig, ibc_ground_energy
from vanhove_ibc.fock_space import FockBasis
from vanhove_ibc.vanhove_renorm import flow_row


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--g", type=float, default=1.0)
    p.add_argument("--e0", type=float, default=1.0)
    p.add_argument("--nodes", type=int, default=32)
    p.add_argument("--n-max", type=int, default=4)
    p.add_argument("--tol", type=float, default=2e-4)
    p.add_argument("--lambdas", type=float, nargs="+", default=[5.0, 10.0, 20.0, 40.0])
    args = p.parse_args()

    cfg = FlowConfig(g=args.g, e0=args.e0, lambda_list=tuple(args.lambdas), nodes=args.nodes,
                     n_max=args.n_max, tol=args.tol)
    basis = FockBasis(cfg.nodes, cfg.n_max)
    print(f"dim = {basis.dim}, E_min (IBC) = {ibc_ground_energy(cfg.g, cfg.e0):.12f}")
    print(f"{'Lambda':>7} {'E_Lambda':>16} {'e0 - E_Lambda':>14} {'gap':>12} {'k1^2+e0':>12} {'1-overlap':>10} {'iters':>6} {'s':>6}")
    for lam in cfg.lambda_list:
        t0 = time.perf_counter()
        r = flow_row(cfg, lam, basis)
        edge = cfg.grid_for(lam).nodes[0] ** 2 + cfg.e0
        print(f"{lam:7.1f} {r.e_shift_quad:16.10f} {r.renormalized_ground:14.3e} {r.gap:12.8f} {edge:12.8f} "
              f"{1 - r.ground_overlap:10.2e} {r.iters:6d} {time.perf_counter() - t0:6.1f}"
              + ("" if r.converged else "  (not converged)"))


if __name__ == "__main__":
    main()
