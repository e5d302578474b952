"""Run configuration: TOML (or JSON) files with sections matching :class:`RunConfig`.

Example::

    [model]
    g = 1.0
    e0 = 1.0

    [grid]
    lambda_max = 40.0
    nodes = 32

    [fock]
    max_particles = 4

    [flow]
    lambda_list = [5.0, 10.0, 20.0, 40.0]

    [[sources]]
    pos = [0.0, 0.0, 0.0]
    a = -0.05          # shorthand for alpha = a, beta = 1, gamma = a - 1, delta = 1

Every validation error is an :class:`InvalidConfigError` whose ``key``
names the offending entry, e.g. ``model.e0`` or ``sources[1].alpha``.
"""

from __future__ import annotations

import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .errors import InvalidConfigError, InvalidParamsError
from .radial_grid import SCHEMES
from .vanhove_renorm import DEFAULT_LAMBDAS, FlowConfig
from .yukawa_algebra import IbcParams

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

FORMATS = ("csv", "json")


@dataclass(frozen=True)
class ModelConfig:
    g: float = 1.0
    e0: float = 1.0


@dataclass(frozen=True)
class GridConfig:
    lambda_max: float = 40.0
    nodes: int = 32
    scheme: str = "gauss-legendre"


@dataclass(frozen=True)
class FockConfig:
    max_particles: int = 4


@dataclass(frozen=True)
class FlowSection:
    lambda_list: tuple = DEFAULT_LAMBDAS
    per_cutoff_grid: bool = True


@dataclass(frozen=True)
class SolverConfig:
    tol: float = 2e-4
    max_iter: int = 2000
    seed: int = 0


@dataclass(frozen=True)
class SourceEntry:
    pos: tuple
    params: IbcParams


@dataclass(frozen=True)
class OutputConfig:
    format: str | None = None
    path: str | None = None


@dataclass(frozen=True)
class RunConfig:
    model: ModelConfig = field(default_factory=ModelConfig)
    grid: GridConfig = field(default_factory=GridConfig)
    fock: FockConfig = field(default_factory=FockConfig)
    flow: FlowSection = field(default_factory=FlowSection)
    solver: SolverConfig = field(default_factory=SolverConfig)
    sources: tuple = ()
    output: OutputConfig = field(default_factory=OutputConfig)

    def flow_config(self) -> FlowConfig:
        return FlowConfig(
            g=self.model.g,
            e0=self.model.e0,
            lambda_list=self.flow.lambda_list,
            nodes=self.grid.nodes,
            n_max=self.fock.max_particles,
            scheme=self.grid.scheme,
            per_cutoff_grid=self.flow.per_cutoff_grid,
            lambda_max=None if self.flow.per_cutoff_grid else self.grid.lambda_max,
            tol=self.solver.tol,
            max_iter=self.solver.max_iter,
            seed=self.solver.seed,
        )


# -- field checks ---------------------------------------------------------------


def _number(value, key, *, positive=False, nonneg=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InvalidConfigError(f"expected a number, got {value!r}", key)
    value = float(value)
    if not math.isfinite(value):
        raise InvalidConfigError(f"must be finite, got {value}", key)
    if positive and value <= 0:
        raise InvalidConfigError(f"must be positive, got {value}", key)
    if nonneg and value < 0:
        raise InvalidConfigError(f"must be non-negative, got {value}", key)
    return value


def _integer(value, key, minimum):
    if isinstance(value, bool) or not isinstance(value, int):
        raise InvalidConfigError(f"expected an integer, got {value!r}", key)
    if value < minimum:
        raise InvalidConfigError(f"must be >= {minimum}, got {value}", key)
    return value


def _table(raw, key) -> dict:
    section = raw.get(key, {})
    if not isinstance(section, dict):
        raise InvalidConfigError("expected a table", key)
    return section


def _reject_unknown(section: dict, allowed, prefix):
    for k in section:
        if k not in allowed:
            raise InvalidConfigError(f"unknown key (allowed: {', '.join(sorted(allowed))})", f"{prefix}.{k}")


def _parse_source(entry, i) -> SourceEntry:
    key = f"sources[{i}]"
    if not isinstance(entry, dict):
        raise InvalidConfigError("expected a table", key)
    _reject_unknown(entry, {"pos", "theta", "a", "alpha", "beta", "gamma", "delta"}, key)
    pos = entry.get("pos")
    if not isinstance(pos, list) or len(pos) != 3:
        raise InvalidConfigError("pos must be a list of three numbers", f"{key}.pos")
    pos = tuple(_number(x, f"{key}.pos") for x in pos)
    theta = _number(entry.get("theta", 0.0), f"{key}.theta")
    explicit = [k for k in ("alpha", "beta", "gamma", "delta") if k in entry]
    try:
        if "a" in entry:
            if explicit:
                raise InvalidConfigError("give either a or alpha/beta/gamma/delta, not both", f"{key}.a")
            params = IbcParams.from_inverse_scattering_length(_number(entry["a"], f"{key}.a"), theta)
        else:
            vals = {k: _number(entry.get(k, d), f"{key}.{k}") for k, d in
                    (("alpha", 1.0), ("beta", 0.0), ("gamma", 0.0), ("delta", 1.0))}
            params = IbcParams(theta=theta, **vals)
    except InvalidParamsError as exc:
        raise InvalidConfigError(str(exc), key) from exc
    return SourceEntry(pos, params)


def parse_config(raw: dict) -> RunConfig:
    """Validate a decoded config mapping into a :class:`RunConfig`."""
    if not isinstance(raw, dict):
        raise InvalidConfigError("top level must be a table")
    _reject_unknown(raw, {"model", "grid", "fock", "flow", "solver", "sources", "output"}, "config")

    m = _table(raw, "model")
    _reject_unknown(m, {"g", "e0"}, "model")
    for req in ("g", "e0"):
        if req not in m:
            raise InvalidConfigError("required key is missing", f"model.{req}")
    model = ModelConfig(g=_number(m["g"], "model.g"), e0=_number(m["e0"], "model.e0", positive=True))

    gr = _table(raw, "grid")
    _reject_unknown(gr, {"lambda_max", "nodes", "scheme"}, "grid")
    scheme = gr.get("scheme", GridConfig.scheme)
    if scheme not in SCHEMES:
        raise InvalidConfigError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}", "grid.scheme")
    grid = GridConfig(
        lambda_max=_number(gr.get("lambda_max", GridConfig.lambda_max), "grid.lambda_max", positive=True),
        nodes=_integer(gr.get("nodes", GridConfig.nodes), "grid.nodes", 1),
        scheme=scheme,
    )

    fk = _table(raw, "fock")
    _reject_unknown(fk, {"max_particles"}, "fock")
    fock = FockConfig(_integer(fk.get("max_particles", FockConfig.max_particles), "fock.max_particles", 1))

    fl = _table(raw, "flow")
    _reject_unknown(fl, {"lambda_list", "per_cutoff_grid"}, "flow")
    lams = fl.get("lambda_list", list(DEFAULT_LAMBDAS))
    if not isinstance(lams, list) or not lams:
        raise InvalidConfigError("expected a non-empty list of cutoffs", "flow.lambda_list")
    lams = tuple(_number(x, "flow.lambda_list", positive=True) for x in lams)
    if any(b <= a for a, b in zip(lams, lams[1:])):
        raise InvalidConfigError("cutoffs must be strictly ascending", "flow.lambda_list")
    per_cut = fl.get("per_cutoff_grid", True)
    if not isinstance(per_cut, bool):
        raise InvalidConfigError("expected true or false", "flow.per_cutoff_grid")
    if not per_cut and lams[-1] > grid.lambda_max:
        raise InvalidConfigError(
            f"cutoff {lams[-1]} exceeds grid.lambda_max = {grid.lambda_max}", "flow.lambda_list"
        )
    flow = FlowSection(lams, per_cut)

    sv = _table(raw, "solver")
    _reject_unknown(sv, {"tol", "max_iter", "seed"}, "solver")
    solver = SolverConfig(
        tol=_number(sv.get("tol", SolverConfig.tol), "solver.tol", positive=True),
        max_iter=_integer(sv.get("max_iter", SolverConfig.max_iter), "solver.max_iter", 1),
        seed=_integer(sv.get("seed", SolverConfig.seed), "solver.seed", 0),
    )

    src = raw.get("sources", [])
    if not isinstance(src, list):
        raise InvalidConfigError("expected an array of tables", "sources")
    sources = tuple(_parse_source(e, i) for i, e in enumerate(src))
    for i in range(len(sources)):
        for j in range(i):
            if sources[i].pos == sources[j].pos:
                raise InvalidConfigError(f"sources {j} and {i} sit at the same position", f"sources[{i}].pos")

    out = _table(raw, "output")
    _reject_unknown(out, {"format", "path"}, "output")
    fmt = out.get("format")
    if fmt is not None and fmt not in FORMATS:
        raise InvalidConfigError(f"expected one of {FORMATS}, got {fmt!r}", "output.format")
    path = out.get("path")
    if path is not None and not isinstance(path, str):
        raise InvalidConfigError("expected a string", "output.path")
    return RunConfig(model, grid, fock, flow, solver, sources, OutputConfig(fmt, path))


def load_config(path) -> RunConfig:
    """Read a ``.toml`` or ``.json`` file (decided by suffix; TOML otherwise)."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InvalidConfigError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        raw = json.loads(text) if path.suffix.lower() == ".json" else tomllib.loads(text)
    except (tomllib.TOMLDecodeError, json.JSONDecodeError) as exc:
        # both decoders report line and column in the message
        raise InvalidConfigError(f"{path}: {exc}") from exc
    return parse_config(raw)
