"""Built-in experiment setups on the two T-junction networks.

All presets share the default gas constants and an equal-pressure junction.
``ex1-*`` run a smooth density ramp through the junction for grid-refinement
studies; ``ex2-*`` drive an inlet discontinuity into resting gas; ``ex3`` is
the ex2 1-to-2 setup used for AP-versus-explicit run-time comparisons.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import (GasParameters, Inlet, JunctionSpec, NetworkState,
                    NetworkTopology, Outlet, PipeGeometry, PipeState)

PRESET_NAMES = ("ex1-1to2", "ex1-2to1", "ex2-1to2", "ex2-2to1", "ex3")


@dataclass
class RunSetup:
    """A ready-to-run experiment: network, constants and the final time."""

    name: str
    net: NetworkState
    params: GasParameters
    final_time: float


def _t_junction(n_ingoing: int, length: float, n_cells: int, inlet_rho: float,
                condition: str = "equal_pressure") -> NetworkTopology:
    """Three equal pipes meeting in one junction; free ends are inlets on the
    ingoing side and outlets on the outgoing side."""
    n_outgoing = 3 - n_ingoing
    geometry = [PipeGeometry(length, n_cells)] * 3
    ingoing = tuple(range(n_ingoing))
    outgoing = tuple(range(n_ingoing, 3))
    junction = JunctionSpec(ingoing=ingoing, outgoing=outgoing,
                            condition=condition)
    boundaries = {}
    for k in ingoing:
        boundaries[(k, "left")] = Inlet(rho=inlet_rho)
    for k in outgoing:
        boundaries[(k, "right")] = Outlet()
    assert n_outgoing >= 1
    return NetworkTopology(pipes=geometry, junctions=[junction],
                           boundaries=boundaries)


def _uniform_pipe(length: float, n_cells: int, rho: float) -> PipeState:
    dx = length / n_cells
    return PipeState(dx, np.full(n_cells, rho), np.zeros(n_cells))


def _ramp_pipe(length: float, n_cells: int, epsilon: float) -> PipeState:
    """Resting gas at density 1.1 that descends smoothly to 1 over the window
    (0.4/eps, 0.8/eps) via a quarter sine wave."""
    dx = length / n_cells
    x = (np.arange(n_cells) + 0.5) * dx
    rho = np.where(
        x <= 0.4 / epsilon, 1.1,
        np.where(x >= 0.8 / epsilon, 1.0,
                 1.0 + 0.1 * np.sin(np.pi * epsilon / 0.8 * x)))
    return PipeState(dx, rho, np.zeros(n_cells))


def _build_ex1(n_ingoing: int, epsilon: float, n_cells: int,
               params: GasParameters) -> RunSetup:
    length = 1.0 / epsilon
    topo = _t_junction(n_ingoing, length, n_cells, inlet_rho=1.1)
    pipes = []
    for k in range(3):
        if k < n_ingoing:
            pipes.append(_ramp_pipe(length, n_cells, epsilon))
        else:
            pipes.append(_uniform_pipe(length, n_cells, 1.0))
    name = "ex1-1to2" if n_ingoing == 1 else "ex1-2to1"
    return RunSetup(name, NetworkState(topo, pipes), params, final_time=0.2)


def _build_ex2(n_ingoing: int, epsilon: float, n_cells: int,
               params: GasParameters, name: str) -> RunSetup:
    length = 100.0
    topo = _t_junction(n_ingoing, length, n_cells, inlet_rho=1.3)
    pipes = [_uniform_pipe(length, n_cells, 1.0) for _ in range(3)]
    # the inlet wave needs t ~ 100*eps to reach comparable depth at each eps
    return RunSetup(name, NetworkState(topo, pipes), params,
                    final_time=100.0 * epsilon)


def build_preset(name: str, epsilon: float = 0.1,
                 n_cells: int | None = None,
                 params: GasParameters | None = None) -> RunSetup:
    """Instantiate a named preset; ``n_cells`` is per pipe."""
    if name not in PRESET_NAMES:
        raise ValueError(f"unknown preset {name!r}; choose from {PRESET_NAMES}")
    if params is None:
        params = GasParameters(epsilon=epsilon)
    elif params.epsilon != epsilon:
        raise ValueError("params.epsilon disagrees with the epsilon argument")
    if name == "ex1-1to2":
        return _build_ex1(1, epsilon, n_cells or 400, params)
    if name == "ex1-2to1":
        return _build_ex1(2, epsilon, n_cells or 400, params)
    if name == "ex2-1to2":
        return _build_ex2(1, epsilon, n_cells or 4000, params, name)
    if name == "ex2-2to1":
        return _build_ex2(2, epsilon, n_cells or 4000, params, name)
    # ex3: the ex2 1-to-2 setup, kept as its own name for timing runs
    return _build_ex2(1, epsilon, n_cells or 4000, params, "ex3")
