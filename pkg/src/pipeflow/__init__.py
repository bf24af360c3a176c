"""Low-Mach isentropic gas flow with wall friction on pipe networks.

An asymptotic-preserving flux-split IMEX scheme with central-upwind spatial
discretization and half-Riemann junction coupling, plus a fully explicit
baseline for comparison.
"""

from ._kernels import get_backend, set_backend
from .ap_stepper import network_step
from .driver import RunResult, simulate
from .explicit_stepper import explicit_step
from .model import (GasParameters, Inlet, JunctionSpec, NetworkState,
                    NetworkTopology, Outlet, PeriodicEnd, PipeGeometry,
                    PipeState)
from .presets import PRESET_NAMES, build_preset

__version__ = "0.1.0"

__all__ = [
    "GasParameters", "Inlet", "JunctionSpec", "NetworkState",
    "NetworkTopology", "Outlet", "PeriodicEnd", "PipeGeometry", "PipeState",
    "PRESET_NAMES", "RunResult", "build_preset", "explicit_step",
    "get_backend", "network_step", "set_backend", "simulate", "__version__",
]
