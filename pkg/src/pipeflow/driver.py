"""Time-marching driver shared by the CLI and the test harness."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

from .ap_stepper import network_step
from .explicit_stepper import explicit_step
from .model import GasParameters, NetworkState

log = logging.getLogger("pipeflow")

_TIME_ATOL = 1e-14

SCHEMES = ("ap", "explicit")


@dataclass
class RunResult:
    """Outcome of one simulation: final network state and run statistics.

    ``wall_time`` covers the time loop only, not setup or output.
    """

    net: NetworkState
    scheme: str
    final_time: float
    n_steps: int
    wall_time: float
    junction_iterations: list = field(default_factory=list)
    max_junction_residual: float = 0.0

    @property
    def steps_per_second(self) -> float:
        return self.n_steps / self.wall_time if self.wall_time > 0.0 else float("inf")


def simulate(net: NetworkState, params: GasParameters, final_time: float,
             scheme: str = "ap", dt_max: float | None = None,
             boundary_dx_variant: bool = False, verbatim_sum: bool = False,
             max_steps: int | None = None) -> RunResult:
    """March ``net`` in place from t = 0 to ``final_time``.

    The last step is clamped so the final time is hit exactly.
    """
    if scheme not in SCHEMES:
        raise ValueError(f"scheme must be one of {SCHEMES}, got {scheme!r}")
    if final_time < 0.0:
        raise ValueError("final_time must be nonnegative")

    t = 0.0
    n_steps = 0
    iterations = []
    max_residual = 0.0
    # the steppers default their cap to the smallest cell width; keep that
    # here so clamping to the remaining time cannot enlarge it
    base_cap = dt_max if dt_max is not None else min(p.dx for p in net.pipes)
    tic = time.perf_counter()
    while t < final_time - _TIME_ATOL:
        if max_steps is not None and n_steps >= max_steps:
            raise RuntimeError(f"exceeded max_steps={max_steps} at t={t:.6g}")
        cap = min(base_cap, final_time - t)
        if scheme == "ap":
            report = network_step(net, params, dt_max=cap,
                                  boundary_dx_variant=boundary_dx_variant,
                                  verbatim_sum=verbatim_sum)
        else:
            report = explicit_step(net, params, dt_max=cap,
                                   verbatim_sum=verbatim_sum)
        t += report.dt
        n_steps += 1
        iterations.extend(report.junction_iterations)
        if report.junction_residuals:
            max_residual = max(max_residual, max(report.junction_residuals))
        if n_steps % 10000 == 0:
            log.debug("step %d, t = %.6g, dt = %.3e", n_steps, t, report.dt)
    wall = time.perf_counter() - tic
    log.info("%s scheme: %d steps to t = %.6g in %.3f s",
             scheme, n_steps, t, wall)
    return RunResult(net=net, scheme=scheme, final_time=t, n_steps=n_steps,
                     wall_time=wall, junction_iterations=iterations,
                     max_junction_residual=max_residual)
