"""YAML run configuration: gas constants, scheme selection and either a
preset id or an inline network description."""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np
import yaml

from .errors import ParseError, SchemaError
from .model import (GasParameters, Inlet, JunctionSpec, NetworkState,
                    NetworkTopology, Outlet, PeriodicEnd, PipeGeometry,
                    PipeState)

_GAS_KEYS = ("gamma", "epsilon", "b", "kappa", "c_delta", "theta", "nu")


@dataclass
class RunConfig:
    """Everything a run needs; CLI flags override individual fields."""

    preset: str | None = None
    topology: dict | None = None
    scheme: str = "ap"
    final_time: float | None = None
    cells: int | None = None
    dt_max: float | None = None
    boundary_dx_variant: bool = False
    verbatim_junction_sum: bool = False
    out: str | None = None
    gamma: float | None = None
    epsilon: float | None = None
    b: float | None = None
    kappa: float | None = None
    c_delta: float | None = None
    theta: float | None = None
    nu: float | None = None

    def gas_parameters(self, epsilon_override: float | None = None) -> GasParameters:
        overrides = {k: getattr(self, k) for k in _GAS_KEYS
                     if getattr(self, k) is not None}
        if epsilon_override is not None:
            overrides["epsilon"] = epsilon_override
        return GasParameters(**overrides)


def load_config(path: str) -> RunConfig:
    """Parse a YAML file into a RunConfig; unknown keys are rejected."""
    try:
        with open(path) as fh:
            raw = yaml.safe_load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read config {path!r}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ParseError(f"malformed YAML in {path!r}: {exc}") from exc
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise SchemaError(f"config root must be a mapping, got {type(raw).__name__}")
    known = {f.name for f in fields(RunConfig)}
    for key in raw:
        if key not in known:
            raise SchemaError(f"unknown config key {key!r} in {path!r}")
    return RunConfig(**raw)


def _require(mapping: dict, key: str, where: str):
    if key not in mapping:
        raise SchemaError(f"missing key {key!r} in {where}")
    return mapping[key]


def _check_keys(mapping: dict, allowed, where: str):
    for key in mapping:
        if key not in allowed:
            raise SchemaError(f"unknown key {key!r} in {where}")


def build_topology(desc: dict) -> NetworkState:
    """Instantiate a network from an inline config description.

    Pipes carry constant initial data; richer profiles come from presets.
    """
    _check_keys(desc, ("pipes", "junctions", "boundaries"), "topology")
    pipe_descs = _require(desc, "pipes", "topology")
    geometry = []
    states = []
    for i, pd in enumerate(pipe_descs):
        where = f"topology.pipes[{i}]"
        _check_keys(pd, ("length", "cells", "rho", "u"), where)
        length = float(_require(pd, "length", where))
        cells = int(_require(pd, "cells", where))
        rho = float(pd.get("rho", 1.0))
        u = float(pd.get("u", 0.0))
        geometry.append(PipeGeometry(length, cells))
        dx = length / cells
        states.append(PipeState(dx, np.full(cells, rho),
                                np.full(cells, rho * u)))

    junctions = []
    for j, jd in enumerate(desc.get("junctions", [])):
        where = f"topology.junctions[{j}]"
        _check_keys(jd, ("ingoing", "outgoing", "condition", "h"), where)
        h = jd.get("h")
        if h is not None:
            h = {(int(k), int(l)): float(v)
                 for (k, l), v in ((tuple(key.split("-")), val)
                                   for key, val in h.items())}
        junctions.append(JunctionSpec(
            ingoing=tuple(_require(jd, "ingoing", where)),
            outgoing=tuple(_require(jd, "outgoing", where)),
            condition=jd.get("condition", "equal_pressure"),
            h=h))

    boundaries = {}
    for k, bd in enumerate(desc.get("boundaries", [])):
        where = f"topology.boundaries[{k}]"
        _check_keys(bd, ("pipe", "side", "kind", "rho"), where)
        kind = _require(bd, "kind", where)
        if kind == "inlet":
            bc = Inlet(rho=float(_require(bd, "rho", where)))
        elif kind == "outlet":
            bc = Outlet()
        elif kind == "periodic":
            bc = PeriodicEnd()
        else:
            raise SchemaError(f"unknown boundary kind {kind!r} in {where}")
        boundaries[(int(_require(bd, "pipe", where)),
                    str(_require(bd, "side", where)))] = bc

    topo = NetworkTopology(pipes=geometry, junctions=junctions,
                           boundaries=boundaries)
    return NetworkState(topo, states)
