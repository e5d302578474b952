"""Command-line experiment runner.

Subcommands: ``renorm-flow``, ``spectrum``, ``multisource`` and ``identities``.
Exit codes: 0 success, 2 configuration error, 3 solver non-convergence,
4 internal-consistency failure.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
import warnings
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import identities
from .config import RunConfig, load_config
from .errors import InternalConsistencyError, InvalidArgumentError, InvalidConfigError, NotInRangeError
from .fock_space import FockBasis
from .multisource import (
    SourceConfig,
    check_bounded_below,
    ground_energy_multisource,
    point_interaction_eigenvalues,
    s_matrix,
    solve_phi,
)
from .radial_grid import build_radial_grid
from .vanhove_renorm import FlowRow, ibc_spectrum_check, renorm_flow

EXIT_OK, EXIT_CONFIG, EXIT_NONCONVERGED, EXIT_INCONSISTENT = 0, 2, 3, 4


class _Fail(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


# -- formatting -------------------------------------------------------------------


def _fmt(x) -> str:
    """17 significant digits for floats, plain integers; locale independent."""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, (float, np.floating)):
        return float(x)
    return x


def dumps_json(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2) + "\n"


def flow_csv(rows: list[FlowRow]) -> str:
    buf = io.StringIO()
    buf.write(",".join(FlowRow.COLUMNS) + "\n")
    for r in rows:
        buf.write(",".join(_fmt(v) for v in r.values()) + "\n")
    return buf.getvalue()


def _flow_json(rows):
    return [dict(zip(FlowRow.COLUMNS, r.values()), converged=r.converged) for r in rows]


# -- commands ---------------------------------------------------------------------


def cmd_renorm_flow(cfg: RunConfig, fmt: str = "csv", log=None):
    """Run the renormalisation flow; returns (exit code, rendered output)."""
    try:
        rows = renorm_flow(cfg.flow_config())
    except InvalidArgumentError as exc:
        raise _Fail(EXIT_CONFIG, str(exc)) from exc
    text = flow_csv(rows) if fmt == "csv" else dumps_json(_flow_json(rows))
    bad = [r.lambda_cut for r in rows if not r.converged]
    if bad:
        if log:
            log(f"solver did not converge for lambda = {', '.join(_fmt(b) for b in bad)}")
        return EXIT_NONCONVERGED, text
    return EXIT_OK, text


def cmd_spectrum(cfg: RunConfig, fmt: str = "json", log=None):
    _json_only(fmt, "spectrum")
    try:
        grid = build_radial_grid(cfg.grid.lambda_max, cfg.grid.nodes, cfg.grid.scheme)
        basis = FockBasis(grid.size, cfg.fock.max_particles)
        rep = ibc_spectrum_check(grid, basis, cfg.model.g, cfg.model.e0, k=2, tol=cfg.solver.tol,
                                 max_iter=cfg.solver.max_iter, seed=cfg.solver.seed)
    except InvalidArgumentError as exc:
        raise _Fail(EXIT_CONFIG, str(exc)) from exc
    out = {
        "e_min_predicted": rep.e_min_predicted,
        "e_min_computed": rep.e_min_computed,
        "gap_predicted": rep.gap_predicted,
        "gap_computed": rep.gap_computed,
        "overlap": rep.overlap,
        "tolerances": rep.tolerances,
        "continuum_gap_on_grid": rep.grid_gap,
        "eigenvalues": rep.eigenvalues,
        "multiplicity": rep.multiplicity,
        "tail_budget": rep.tail_budget,
        "converged": rep.converged,
        "passed": rep.passed,
    }
    text = dumps_json(out)
    if not rep.converged:
        return EXIT_NONCONVERGED, text
    if not rep.passed:
        if log:
            log("computed spectrum disagrees with the predicted ground energy or gap")
        return EXIT_INCONSISTENT, text
    return EXIT_OK, text


def source_config(cfg: RunConfig) -> SourceConfig:
    if not cfg.sources:
        raise InvalidConfigError("at least one [[sources]] entry is required", "sources")
    return SourceConfig([s.pos for s in cfg.sources], [s.params for s in cfg.sources], cfg.model.e0)


def cmd_multisource(cfg: RunConfig, fmt: str = "json", log=None, search_interval=None):
    _json_only(fmt, "multisource")
    sc = source_config(cfg)
    out = {"s_matrix": s_matrix(sc, sc.e0)}
    try:
        phi = solve_phi(sc, sc.e0)
        energy, im = ground_energy_multisource(sc, return_imag=True)
        out.update(phi_coeffs=phi.coeffs, ground_energy=energy, im_part=im, in_range=True)
    except NotInRangeError as exc:
        # the ground-state construction needs (1,...,1) in the range of S(e0)
        if log:
            log(str(exc))
        out.update(phi_coeffs=None, ground_energy=None, im_part=None, in_range=False)
    except InternalConsistencyError as exc:
        raise _Fail(EXIT_INCONSISTENT, str(exc)) from exc
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        roots = point_interaction_eigenvalues(sc, search_interval)
    out["advisories"] = [str(w.message) for w in caught]
    out["eigenvalues"] = [{"lambda": r.lambda_root, "energy": r.energy} for r in roots]
    rep = check_bounded_below(sc)
    out["bounded_below"] = {
        "strictly_positive": rep.strictly_positive,
        "bounded_below": rep.bounded_below,
        "lambda_max": rep.lambda_max,
        "threshold": rep.threshold,
        "inverse_scattering_length": rep.inverse_scattering_length,
    }
    return EXIT_OK, dumps_json(out)


def cmd_identities(seed: int = 0, trials: int = 50, fmt: str = "json", log=None):
    _json_only(fmt, "identities")
    results = identities.run_all(seed, trials)
    out = {"seed": seed, "trials": trials, "suites": {k: v.as_dict() for k, v in results.items()}}
    failed = [k for k, v in results.items() if not v.passed]
    out["passed"] = not failed
    if failed and log:
        log(f"identity suites above tolerance: {', '.join(failed)}")
    return (EXIT_INCONSISTENT if failed else EXIT_OK), dumps_json(out)


def _json_only(fmt, name):
    if fmt != "json":
        raise InvalidConfigError(f"{name} output is JSON only, got format {fmt!r}", "output.format")


# -- entry point --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="TOML or JSON run configuration")
    common.add_argument("--out", type=Path, help="write output here instead of stdout")
    common.add_argument("--seed", type=int, help="override solver.seed (identities: RNG seed)")
    common.add_argument("--format", choices=("csv", "json"), help="output encoding")
    common.add_argument("--quiet", action="store_true", help="suppress diagnostics on stderr")

    p = argparse.ArgumentParser(prog="vanhove-ibc", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("renorm-flow", parents=[common], help="cutoff flow of H_Lambda - E_Lambda (CSV)")
    sub.add_parser("spectrum", parents=[common], help="lowest eigenvalues vs the IBC prediction (JSON)")
    sub.add_parser("multisource", parents=[common], help="S matrix, dressing function, bound states (JSON)")
    ident = sub.add_parser("identities", parents=[common], help="randomised identity checks (JSON)")
    ident.add_argument("--trials", type=int, default=50)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)

    def log(msg):
        if not args.quiet:
            print(f"vanhove-ibc: {msg}", file=sys.stderr)

    try:
        cfg = load_config(args.config) if args.config else RunConfig()
        if args.seed is not None:
            if args.seed < 0:
                raise InvalidConfigError("seed must be non-negative", "solver.seed")
            cfg = replace(cfg, solver=replace(cfg.solver, seed=args.seed))
        default_fmt = "csv" if args.command == "renorm-flow" else "json"
        fmt = args.format or cfg.output.format or default_fmt
        out_path = args.out or (Path(cfg.output.path) if cfg.output.path else None)
        if args.command == "renorm-flow":
            code, text = cmd_renorm_flow(cfg, fmt, log)
        elif args.command == "spectrum":
            code, text = cmd_spectrum(cfg, fmt, log)
        elif args.command == "multisource":
            code, text = cmd_multisource(cfg, fmt, log)
        else:
            if args.trials < 1:
                raise InvalidConfigError("trials must be positive", "trials")
            code, text = cmd_identities(cfg.solver.seed, args.trials, fmt, log)
    except InvalidConfigError as exc:
        log(f"config error: {exc}")
        return EXIT_CONFIG
    except _Fail as exc:
        log(str(exc))
        return exc.code
    except InternalConsistencyError as exc:
        log(f"internal consistency failure: {exc}")
        return EXIT_INCONSISTENT

    if out_path is None:
        sys.stdout.write(text)
    else:
        out_path.write_text(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
