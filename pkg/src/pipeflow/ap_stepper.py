"""Asymptotic-preserving IMEX step on a pipe network.

One step: solve every junction at the current time level and refresh all
ghost states, evaluate the explicit residual of the non-stiff split
subsystem, then close the stiff subsystem implicitly -- a tridiagonal
elliptic solve for the density increment followed by a pointwise momentum
relaxation against friction.

The density system is assembled in *increment* form, for the unknown
delta = rho_new - rho_old.  At rest every right-hand-side term vanishes
identically, so a resting network is a bitwise fixed point of the step for
any epsilon; a direct solve for rho_new would lose that to roundoff once
the elliptic coefficient grows like 1/epsilon^2.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import NonPositiveDensity
from .flux import SplitParams, nonstiff_residual, stiffness_params
from .junction import ghost_states, make_traces, solve_junction
from .model import (GasParameters, NetworkState, VACUUM_FLOOR,
                    pressure_derivative)

SPEED_FLOOR = 1e-12


@dataclass
class StepReport:
    """Per-step record: time increment taken and junction solve statistics."""

    dt: float
    junction_iterations: list = field(default_factory=list)
    junction_residuals: list = field(default_factory=list)


def psi(u, dt: float, params: GasParameters):
    """Friction relaxation factor 1 + dt * C_delta*kappa*|u| / (2 eps^2)."""
    return 1.0 + dt * params.friction_coeff * np.abs(u)


def phi_half(psi_left, psi_right):
    """Interface average of 1/psi between two adjacent cells."""
    return 0.5 * (1.0 / psi_left + 1.0 / psi_right)


def fill_ghosts(net: NetworkState, params: GasParameters,
                verbatim_sum: bool = False) -> list:
    """Solve all junctions and refresh every pipe's ghost states in place.

    Returns the junction solutions in topology order.
    """
    solutions = []
    for spec in net.topology.junctions:
        traces = make_traces(net.pipes, spec, params)
        sol = solve_junction(traces, spec, params, verbatim_sum)
        solutions.append(sol)
        for (pid, side), (rho_g, q_g) in ghost_states(sol, spec).items():
            pipe = net.pipes[pid]
            if side == "right":
                pipe.ghost_right = np.array([rho_g, q_g])
            else:
                pipe.ghost_left = np.array([rho_g, q_g])
    for (pid, side), bc in net.topology.boundaries.items():
        pipe = net.pipes[pid]
        near = -1 if side == "right" else 0
        role, spec = net.end_role(pid, side)
        if role == "inlet":
            ghost = np.array([spec.rho, pipe.q[near]])
        elif role == "outlet":
            ghost = np.array([pipe.rho[near], pipe.q[near]])
        else:  # periodic: wrap the opposite end
            far = 0 if side == "right" else -1
            ghost = np.array([pipe.rho[far], pipe.q[far]])
        if side == "right":
            pipe.ghost_right = ghost
        else:
            pipe.ghost_left = ghost
    return solutions


def ap_timestep(pipes, split: SplitParams, params: GasParameters,
                dt_max: float | None = None) -> float:
    """CFL time step from the non-stiff wave speeds.

    Defaults the cap to the smallest cell width, the natural large-time
    step of the relaxed regime.
    """
    if dt_max is None:
        dt_max = min(p.dx for p in pipes)
    dt = dt_max
    for p in pipes:
        # ghosts carry the boundary/junction data whose waves are about to
        # enter the pipe, so they belong in the speed scan
        rho = np.concatenate(([p.ghost_left[0]], p.rho, [p.ghost_right[0]]))
        q = np.concatenate(([p.ghost_left[1]], p.q, [p.ghost_right[1]]))
        u = q / rho
        rad = (1.0 - split.alpha) * u * u + params.alpha_over_eps2 * (
            pressure_derivative(rho, params) - split.a_n)
        speed = np.abs(u) + np.sqrt(np.maximum(rad, 0.0))
        s_max = max(float(speed.max()), SPEED_FLOOR)
        dt = min(dt, params.nu * p.dx / s_max)
    return dt


def _cyclic_thomas(sub, diag, sup, corner, rhs):
    """Solve a symmetric cyclic tridiagonal system via rank-one correction.

    ``corner`` is the single wrap-around entry A[0, n-1] == A[n-1, 0].
    """
    n = diag.size
    gamma = -diag[0]
    d = diag.copy()
    d[0] -= gamma
    d[-1] -= corner * corner / gamma
    y = _kernels.thomas(sub, d, sup, rhs)
    u = np.zeros(n)
    u[0] = gamma
    u[-1] = corner
    z = _kernels.thomas(sub, d, sup, u)
    fact = (y[0] + corner * y[-1] / gamma) / (1.0 + z[0] + corner * z[-1] / gamma)
    return y - fact * z


def _pipe_update(pipe, rho_res, q_res, dt, split, params,
                 left_closure, right_closure, boundary_dx_variant):
    """Implicit closure on one non-periodic pipe: elliptic density increment
    plus friction-relaxed momentum.  Mutates the pipe state.

    ``left_closure`` / ``right_closure`` are "dirichlet" (inlet or junction
    ghost held fixed over the step) or "neumann" (ghost tracks the adjacent
    cell).
    """
    n = pipe.n_cells
    dx = pipe.dx
    gl, gr = pipe.ghost_left, pipe.ghost_right

    psi_c = psi(pipe.u, dt, params)
    psi_l = float(psi(gl[1] / gl[0], dt, params))
    psi_r = float(psi(gr[1] / gr[0], dt, params))
    psi_ext = np.empty(n + 2)
    psi_ext[0] = psi_l
    psi_ext[1:-1] = psi_c
    psi_ext[-1] = psi_r
    # phi[k] sits between extended cells k and k+1; cell j sees phi[j] on
    # its left and phi[j+1] on its right.
    phi = phi_half(psi_ext[:-1], psi_ext[1:])

    # momentum-over-psi field whose divergence drives the density update
    xi = np.empty(n + 2)
    xi[1:-1] = (pipe.q + dt * q_res) / psi_c
    xi[0] = (gl[1] + dt * q_res[0]) / psi_l
    xi[-1] = (gr[1] + dt * q_res[-1]) / psi_r
    dxi = (xi[2:] - xi[:-2]) / (2.0 * dx)
    # one-sided boundary divergence; the default prefactor is 1/dx, the
    # variant switches to 1/(2 dx)
    bfac = 0.5 / dx if boundary_dx_variant else 1.0 / dx
    dxi[0] = (xi[2] - xi[0]) * bfac
    dxi[-1] = (xi[-1] - xi[-3]) * bfac

    one_m_alpha = 1.0 - split.alpha
    eps2 = params.epsilon**2
    c = dt * dt * split.a_n * one_m_alpha / (dx * dx * eps2)

    rho_ext = np.empty(n + 2)
    rho_ext[0] = gl[0]
    rho_ext[1:-1] = pipe.rho
    rho_ext[-1] = gr[0]
    lap = (phi[1:] * (rho_ext[2:] - rho_ext[1:-1])
           - phi[:-1] * (rho_ext[1:-1] - rho_ext[:-2]))

    rhs = dt * rho_res - dt * one_m_alpha * dxi + c * lap
    diag = 1.0 + c * (phi[:-1] + phi[1:])
    sub = np.zeros(n)
    sup = np.zeros(n)
    sub[1:] = -c * phi[1:-1]
    sup[:-1] = -c * phi[1:-1]
    if left_closure == "neumann":
        # ghost increment equals the first cell's; its off-diagonal folds in
        diag[0] = 1.0 + c * phi[1]
    if right_closure == "neumann":
        diag[-1] = 1.0 + c * phi[-2]

    delta = _kernels.thomas(sub, diag, sup, rhs)
    rho_new = pipe.rho + delta
    if rho_new.min() <= VACUUM_FLOOR:
        raise NonPositiveDensity("implicit density update reached the vacuum floor")

    rho_new_ext = np.empty(n + 2)
    rho_new_ext[1:-1] = rho_new
    rho_new_ext[0] = gl[0] if left_closure == "dirichlet" else rho_new[0]
    rho_new_ext[-1] = gr[0] if right_closure == "dirichlet" else rho_new[-1]
    dxrho = (rho_new_ext[2:] - rho_new_ext[:-2]) / (2.0 * dx)

    pipe.q = (pipe.q + dt * q_res - split.a_n * dt / eps2 * dxrho) / psi_c
    pipe.rho = rho_new


def _periodic_update(pipe, rho_res, q_res, dt, split, params):
    """Implicit closure on a periodic pipe; all stencils wrap."""
    n = pipe.n_cells
    dx = pipe.dx

    psi_c = psi(pipe.u, dt, params)
    # phi[j] is the interface left of cell j; phi[(j+1) % n] its right
    phi = phi_half(np.roll(psi_c, 1), psi_c)

    xi = (pipe.q + dt * q_res) / psi_c
    dxi = (np.roll(xi, -1) - np.roll(xi, 1)) / (2.0 * dx)

    one_m_alpha = 1.0 - split.alpha
    eps2 = params.epsilon**2
    c = dt * dt * split.a_n * one_m_alpha / (dx * dx * eps2)

    rho = pipe.rho
    phi_r = np.roll(phi, -1)  # interface right of each cell
    lap = (phi_r * (np.roll(rho, -1) - rho) - phi * (rho - np.roll(rho, 1)))

    rhs = dt * rho_res - dt * one_m_alpha * dxi + c * lap
    diag = 1.0 + c * (phi + phi_r)
    sub = np.zeros(n)
    sup = np.zeros(n)
    sub[1:] = -c * phi[1:]
    sup[:-1] = -c * phi[1:]
    corner = -c * phi[0]

    if c == 0.0:
        delta = rhs
    else:
        delta = _cyclic_thomas(sub, diag, sup, corner, rhs)
    rho_new = rho + delta
    if rho_new.min() <= VACUUM_FLOOR:
        raise NonPositiveDensity("implicit density update reached the vacuum floor")

    dxrho = (np.roll(rho_new, -1) - np.roll(rho_new, 1)) / (2.0 * dx)
    pipe.q = (pipe.q + dt * q_res - split.a_n * dt / eps2 * dxrho) / psi_c
    pipe.rho = rho_new


_CLOSURE = {"inlet": "dirichlet", "junction": "dirichlet", "outlet": "neumann"}


def network_step(net: NetworkState, params: GasParameters,
                 dt_max: float | None = None, dt: float | None = None,
                 boundary_dx_variant: bool = False,
                 verbatim_sum: bool = False) -> StepReport:
    """Advance the whole network by one AP step, in place."""
    solutions = fill_ghosts(net, params, verbatim_sum)
    split = stiffness_params(net.pipes, params)
    if dt is None:
        dt = ap_timestep(net.pipes, split, params, dt_max)

    residuals = []
    for pid, pipe in enumerate(net.pipes):
        if net.is_periodic(pid):
            residuals.append(nonstiff_residual(pipe, split, params, periodic=True))
            continue
        left_role = net.end_role(pid, "left")[0]
        right_role = net.end_role(pid, "right")[0]
        residuals.append(nonstiff_residual(
            pipe, split, params,
            left_first_order=left_role == "junction",
            right_first_order=right_role == "junction"))

    for pid, pipe in enumerate(net.pipes):
        rho_res, q_res = residuals[pid]
        if net.is_periodic(pid):
            _periodic_update(pipe, rho_res, q_res, dt, split, params)
        else:
            left = _CLOSURE[net.end_role(pid, "left")[0]]
            right = _CLOSURE[net.end_role(pid, "right")[0]]
            _pipe_update(pipe, rho_res, q_res, dt, split, params,
                         left, right, boundary_dx_variant)

    return StepReport(
        dt=dt,
        junction_iterations=[s.iterations for s in solutions],
        junction_residuals=[s.residual_norm for s in solutions],
    )
