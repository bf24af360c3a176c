"""Gas law, scheme constants, pipe states and network topology.

All quantities are nondimensional.  The gas is isentropic, p = rho**gamma,
and pipes carry cell averages of density ``rho`` and momentum ``q = rho*u``
on uniform grids.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NonPositiveDensity

VACUUM_FLOOR = 1e-12

DEFAULT_NEWTON_TOL = 1e-8
DEFAULT_NEWTON_MAX_ITER = 50


@dataclass(frozen=True)
class GasParameters:
    """Physical and scheme constants.

    gamma   : ratio of specific heats (> 1)
    epsilon : reference Mach number (> 0)
    b       : flux-splitting exponent (>= 2)
    kappa   : Fanning friction coefficient
    c_delta : cross-section constant
    theta   : generalized minmod parameter, in [1, 2]
    nu      : CFL number, in (0, 1]
    """

    gamma: float = 5.0 / 3.0
    epsilon: float = 1.0
    b: float = 2.0
    kappa: float = 1e-3
    c_delta: float = 1.0
    theta: float = 1.3
    nu: float = 0.45

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ValueError(f"gamma must be > 1, got {self.gamma}")
        if not self.epsilon > 0.0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon}")
        if not self.b >= 2.0:
            raise ValueError(f"b must be >= 2, got {self.b}")
        if not 1.0 <= self.theta <= 2.0:
            raise ValueError(f"theta must be in [1, 2], got {self.theta}")
        if not 0.0 < self.nu <= 1.0:
            raise ValueError(f"nu must be in (0, 1], got {self.nu}")

    @property
    def alpha(self) -> float:
        """Splitting weight, clamped so 0 < alpha <= 1 for any epsilon."""
        return min(1.0, self.epsilon**self.b)

    @property
    def alpha_over_eps2(self) -> float:
        # Written as epsilon**(b-2) so the value is *exactly* 1.0 for b == 2
        # and any epsilon < 1; this keeps the AP time step bitwise
        # epsilon-independent for b == 2.
        return min(self.epsilon ** (self.b - 2.0), self.epsilon**-2.0)

    @property
    def friction_coeff(self) -> float:
        """C_delta * kappa / (2 eps^2), the stiff friction prefactor."""
        return self.c_delta * self.kappa / (2.0 * self.epsilon**2)


def _check_density(rho):
    if np.any(np.asarray(rho) <= VACUUM_FLOOR):
        raise NonPositiveDensity(f"density at or below vacuum floor {VACUUM_FLOOR}")


def pressure(rho, params: GasParameters):
    """Isentropic pressure p = rho**gamma.  Accepts scalars or arrays."""
    _check_density(rho)
    return rho**params.gamma


def pressure_derivative(rho, params: GasParameters):
    """p'(rho) = gamma * rho**(gamma-1), the squared sound-speed scale."""
    _check_density(rho)
    return params.gamma * rho ** (params.gamma - 1.0)


@dataclass
class PipeState:
    """Cell averages of (rho, q) on a uniform grid, plus one ghost per side.

    Ghosts are (rho, q) pairs refreshed at the start of every step from the
    boundary conditions or the junction solve.
    """

    dx: float
    rho: np.ndarray
    q: np.ndarray
    ghost_left: np.ndarray = field(default_factory=lambda: np.array([1.0, 0.0]))
    ghost_right: np.ndarray = field(default_factory=lambda: np.array([1.0, 0.0]))

    def __post_init__(self):
        self.rho = np.asarray(self.rho, dtype=np.float64)
        self.q = np.asarray(self.q, dtype=np.float64)
        if self.rho.shape != self.q.shape:
            raise ValueError("rho and q must have the same shape")
        if self.n_cells < 3:
            raise ValueError("a pipe needs at least 3 cells")
        if self.dx <= 0.0:
            raise ValueError("dx must be positive")
        _check_density(self.rho)

    @property
    def n_cells(self) -> int:
        return self.rho.size

    @property
    def length(self) -> float:
        return self.n_cells * self.dx

    @property
    def u(self) -> np.ndarray:
        return self.q / self.rho

    def x_centers(self) -> np.ndarray:
        return (np.arange(self.n_cells) + 0.5) * self.dx

    def copy(self) -> "PipeState":
        return PipeState(
            self.dx,
            self.rho.copy(),
            self.q.copy(),
            self.ghost_left.copy(),
            self.ghost_right.copy(),
        )


# ---------------------------------------------------------------------------
# topology
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Inlet:
    """Dirichlet density at a pipe end; ghost momentum is zero-gradient."""

    rho: float


@dataclass(frozen=True)
class Outlet:
    """Zero-gradient (Neumann) boundary."""


@dataclass(frozen=True)
class PeriodicEnd:
    """Wraps around to the other end of the same pipe."""


@dataclass(frozen=True)
class JunctionSpec:
    """A pipe intersection.

    ``ingoing`` pipes meet the junction at their right end, ``outgoing``
    pipes at their left end.  ``condition`` selects the closure paired with
    momentum conservation; ``h`` is the pressure-loss table keyed by
    (ingoing_id, outgoing_id).
    """

    ingoing: tuple
    outgoing: tuple
    condition: str = "equal_pressure"
    h: dict | None = None
    newton_tol: float = DEFAULT_NEWTON_TOL
    newton_max_iter: int = DEFAULT_NEWTON_MAX_ITER

    def __post_init__(self):
        if self.condition not in ("equal_pressure", "equal_momentum", "pressure_loss"):
            raise ValueError(f"unknown coupling condition {self.condition!r}")
        if self.newton_tol <= 0.0:
            raise ValueError("newton_tol must be positive")
        if self.h is not None and not all(np.isfinite(v) for v in self.h.values()):
            raise ValueError("pressure-loss table entries must be finite")

    @property
    def pipes(self) -> tuple:
        return tuple(self.ingoing) + tuple(self.outgoing)


@dataclass(frozen=True)
class PipeGeometry:
    length: float
    n_cells: int


@dataclass
class NetworkTopology:
    """Pipes, junctions and free-end boundary conditions.

    ``boundaries`` maps (pipe_id, side) with side in {"left", "right"} to an
    Inlet / Outlet / PeriodicEnd spec.  Pipe ends claimed by a junction must
    not appear here.
    """

    pipes: list
    junctions: list = field(default_factory=list)
    boundaries: dict = field(default_factory=dict)


def validate_topology(net: NetworkTopology) -> list:
    """Return a list of human-readable defects; empty means valid."""
    defects = []
    n_pipes = len(net.pipes)
    for i, geom in enumerate(net.pipes):
        if geom.n_cells < 3:
            defects.append(f"pipe {i}: fewer than 3 cells")
        if geom.length <= 0.0 or geom.length / max(geom.n_cells, 1) <= 0.0:
            defects.append(f"pipe {i}: nonpositive length or dx")

    claims: dict = {}

    def claim(end, owner):
        if end in claims:
            defects.append(f"doubly-claimed end {end}: {claims[end]} and {owner}")
        else:
            claims[end] = owner

    for j, spec in enumerate(net.junctions):
        if len(spec.ingoing) < 1 or len(spec.outgoing) < 1:
            defects.append(f"junction {j}: needs >=1 ingoing and >=1 outgoing pipe")
        for k in spec.ingoing:
            claim((k, "right"), f"junction {j}")
        for k in spec.outgoing:
            claim((k, "left"), f"junction {j}")
    for end, bc in net.boundaries.items():
        pipe_id, side = end
        if not (0 <= pipe_id < n_pipes) or side not in ("left", "right"):
            defects.append(f"boundary spec references invalid end {end}")
            continue
        claim(end, type(bc).__name__)
    for i in range(n_pipes):
        for side in ("left", "right"):
            if (i, side) not in claims:
                defects.append(f"dangling pipe end ({i}, {side!r})")
    return defects


@dataclass
class JunctionSolution:
    """Starred boundary states per incident pipe, in JunctionSpec.pipes order."""

    rho_star: np.ndarray
    q_star: np.ndarray
    iterations: int
    residual_norm: float


class NetworkState:
    """Topology plus the evolving per-pipe states.

    ``end_role(pipe_id, side)`` resolves to ("inlet", spec) / ("outlet", spec)
    / ("periodic", spec) / ("junction", junction_index).
    """

    def __init__(self, topology: NetworkTopology, pipes: list):
        defects = validate_topology(topology)
        if defects:
            raise ValueError("invalid topology: " + "; ".join(defects))
        if len(pipes) != len(topology.pipes):
            raise ValueError("pipe state count does not match topology")
        self.topology = topology
        self.pipes = pipes
        self._roles = {}
        for j, spec in enumerate(topology.junctions):
            for k in spec.ingoing:
                self._roles[(k, "right")] = ("junction", j)
            for k in spec.outgoing:
                self._roles[(k, "left")] = ("junction", j)
        for end, bc in topology.boundaries.items():
            if isinstance(bc, Inlet):
                self._roles[end] = ("inlet", bc)
            elif isinstance(bc, Outlet):
                self._roles[end] = ("outlet", bc)
            elif isinstance(bc, PeriodicEnd):
                self._roles[end] = ("periodic", bc)
            else:
                raise TypeError(f"unknown boundary spec {bc!r}")

    def end_role(self, pipe_id: int, side: str):
        return self._roles[(pipe_id, side)]

    def is_periodic(self, pipe_id: int) -> bool:
        return self._roles[(pipe_id, "left")][0] == "periodic"

    def total_mass(self) -> float:
        return sum(p.dx * p.rho.sum() for p in self.pipes)

    def copy(self) -> "NetworkState":
        return NetworkState(self.topology, [p.copy() for p in self.pipes])
