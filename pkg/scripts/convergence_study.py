"""Truncation study at a single cutoff: gap and ground-state error against (m, n_max).

The ground energy is exact up to the Fock tail; the gap error is dominated
by the particle-number cap, so it falls quickly with n_max at fixed m.

    python3 scripts/convergence_study.py --cutoff 40
"""

import argparse
import itertools
import time

from vanhove_ibc import FlowConfig
from vanhove_ibc.vanhove_renorm import flow_row


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--cutoff", type=float, default=40.0)
    p.add_argument("--nodes", type=int, nargs="+", default=[6, 12])
    p.add_argument("--n-max", type=int, nargs="+", default=[2, 3, 4, 6])
    p.add_argument("--max-dim", type=int, default=200_000, help="skip larger Fock spaces")
    args = p.parse_args()

    print(f"{'m':>3} {'n_max':>5} {'dim':>8} {'e0 - E_Lambda':>14} {'gap error':>10} {'1-overlap':>10} {'s':>6}")
    for m, n in itertools.product(args.nodes, args.n_max):
        cfg = FlowConfig(lambda_list=(args.cutoff,), nodes=m, n_max=n, tol=1e-8)
        t0 = time.perf_counter()
        try:
            r = flow_row(cfg, args.cutoff) if _dim(m, n) <= args.max_dim else None
        except MemoryError:
            r = None
        if r is None:
            print(f"{m:3d} {n:5d} {_dim(m, n):8d}  skipped")
            continue
        edge = cfg.grid_for(args.cutoff).nodes[0] ** 2 + cfg.e0
        print(f"{m:3d} {n:5d} {r.dim:8d} {r.renormalized_ground:14.3e} {abs(r.gap - edge):10.2e} "
              f"{1 - r.ground_overlap:10.2e} {time.perf_counter() - t0:6.1f}")


def _dim(m, n):
    from math import comb

    return comb(m + n, n)


if __name__ == "__main__":
    main()
