"""Explicit baseline scheme: forward-Euler central-upwind fluxes of the
unsplit physical flux under an acoustic CFL restriction.

The friction source keeps the same pointwise implicit relaxation as the AP
stepper (division by the factor Psi); treating the stiff source explicitly
is unstable against the startup velocity transient at small epsilon no
matter how small the acoustic time step is.  Junction solves and ghost
filling are shared with the AP stepper so the two schemes see identical
boundary data; only the interior update differs.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .ap_stepper import SPEED_FLOOR, StepReport, fill_ghosts, psi
from .errors import BlowUp, NonPositiveDensity
from .flux import extended_arrays
from .model import (GasParameters, NetworkState, VACUUM_FLOOR,
                    pressure_derivative)

BLOWUP_THRESHOLD = 1e10


def explicit_timestep(pipes, params: GasParameters,
                      dt_max: float | None = None) -> float:
    """CFL time step from the full acoustic wave speeds |u| + c/eps."""
    if dt_max is None:
        dt_max = min(p.dx for p in pipes)
    dt = dt_max
    for p in pipes:
        rho = np.concatenate(([p.ghost_left[0]], p.rho, [p.ghost_right[0]]))
        q = np.concatenate(([p.ghost_left[1]], p.q, [p.ghost_right[1]]))
        u = q / rho
        speed = np.abs(u) + np.sqrt(pressure_derivative(rho, params)) / params.epsilon
        s_max = max(float(speed.max()), SPEED_FLOOR)
        dt = min(dt, params.nu * p.dx / s_max)
    return dt


def full_residual(pipe, params: GasParameters,
                  left_first_order: bool = False,
                  right_first_order: bool = False,
                  periodic: bool = False):
    """Per-cell flux-difference residual of the unsplit system."""
    rho_e, q_e = extended_arrays(pipe, periodic)
    frho, fq = _kernels.full_interface_flux(
        rho_e, q_e, pipe.dx, params.theta, params.gamma,
        params.epsilon**-2.0, 1.0 / params.epsilon,
        left_first_order, right_first_order)
    inv_dx = 1.0 / pipe.dx
    return (-(frho[1:] - frho[:-1]) * inv_dx, -(fq[1:] - fq[:-1]) * inv_dx)


def explicit_step(net: NetworkState, params: GasParameters,
                  dt_max: float | None = None, dt: float | None = None,
                  verbatim_sum: bool = False) -> StepReport:
    """Advance the whole network by one explicit step, in place."""
    solutions = fill_ghosts(net, params, verbatim_sum)
    if dt is None:
        dt = explicit_timestep(net.pipes, params, dt_max)

    residuals = []
    for pid, pipe in enumerate(net.pipes):
        if net.is_periodic(pid):
            residuals.append(full_residual(pipe, params, periodic=True))
            continue
        left_role = net.end_role(pid, "left")[0]
        right_role = net.end_role(pid, "right")[0]
        residuals.append(full_residual(
            pipe, params,
            left_first_order=left_role == "junction",
            right_first_order=right_role == "junction"))

    for pipe, (rho_res, q_res) in zip(net.pipes, residuals):
        rho_new = pipe.rho + dt * rho_res
        q_new = (pipe.q + dt * q_res) / psi(pipe.u, dt, params)
        if not (np.all(np.isfinite(rho_new)) and np.all(np.isfinite(q_new))):
            raise BlowUp("non-finite state in explicit update")
        if max(np.abs(rho_new).max(), np.abs(q_new).max()) > BLOWUP_THRESHOLD:
            raise BlowUp(f"state magnitude exceeded {BLOWUP_THRESHOLD:g}")
        if rho_new.min() <= VACUUM_FLOOR:
            raise NonPositiveDensity("explicit density update reached the vacuum floor")
        pipe.rho = rho_new
        pipe.q = q_new

    return StepReport(
        dt=dt,
        junction_iterations=[s.iterations for s in solutions],
        junction_residuals=[s.residual_norm for s in solutions],
    )
