"""Split fluxes, one-sided speeds, central-upwind flux and the explicit
residual of the non-stiff subsystem on a single pipe."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import NegativeRadicand
from .model import GasParameters, PipeState, pressure, pressure_derivative

RADICAND_TOL = 1e-14
DEGENERATE_SPEED_TOL = 1e-12


@dataclass(frozen=True)
class SplitParams:
    """Splitting weight alpha and the global stiffness coefficient a_n."""

    alpha: float
    a_n: float


def stiffness_params(pipes, params: GasParameters) -> SplitParams:
    """Network-wide split parameters at the current time level.

    ``a_n`` is the minimum of p'(rho) over every cell and ghost of every
    pipe, a single global scalar so all wave-speed radicands stay nonnegative
    across junctions.  When alpha is clamped to 1 (epsilon >= 1) the
    splitting degenerates and a_n is set to 0, which makes the split flux
    coincide with the plain physical flux.
    """
    alpha = params.alpha
    if alpha >= 1.0:
        return SplitParams(alpha=1.0, a_n=0.0)
    a_n = min(
        min(float(pressure_derivative(p.rho, params).min()),
            float(pressure_derivative(p.ghost_left[0], params)),
            float(pressure_derivative(p.ghost_right[0], params)))
        for p in pipes)
    return SplitParams(alpha=alpha, a_n=a_n)


def slow_flux(u_state, split: SplitParams, params: GasParameters):
    """Non-stiff part of the split flux for a state (rho, q)."""
    rho, q = u_state
    p = pressure(rho, params)
    inv_eps2 = params.epsilon**-2.0
    return (split.alpha * q, q * q / rho + (p - split.a_n * rho) * inv_eps2)


def fast_flux(u_state, split: SplitParams, params: GasParameters):
    """Stiff remainder; slow + fast reproduces the full physical flux."""
    rho, q = u_state
    inv_eps2 = params.epsilon**-2.0
    return ((1.0 - split.alpha) * q, split.a_n * rho * inv_eps2)


def _one_speed(rho, u, split, params):
    pd = pressure_derivative(rho, params)
    rad = pd - split.a_n
    if rad < -RADICAND_TOL:
        raise NegativeRadicand(
            f"p'(rho)={pd} below a_n={split.a_n}; stiffness params are stale")
    return np.sqrt((1.0 - split.alpha) * u * u
                   + params.alpha_over_eps2 * max(rad, 0.0))


def one_sided_speeds(u_minus, u_plus, split: SplitParams, params: GasParameters):
    """Largest/smallest non-stiff eigenvalue over the two interface traces,
    floored/capped at zero: s_plus >= 0 >= s_minus."""
    rho_m, q_m = u_minus
    rho_p, q_p = u_plus
    vm = q_m / rho_m
    vp = q_p / rho_p
    cm = _one_speed(rho_m, vm, split, params)
    cp = _one_speed(rho_p, vp, split, params)
    s_plus = max(vm + cm, vp + cp, 0.0)
    s_minus = min(vm - cm, vp - cp, 0.0)
    return s_plus, s_minus


def cu_flux(u_minus, u_plus, split: SplitParams, params: GasParameters):
    """Central-upwind numerical flux of the slow flux at one interface."""
    s_plus, s_minus = one_sided_speeds(u_minus, u_plus, split, params)
    fm = slow_flux(u_minus, split, params)
    fp = slow_flux(u_plus, split, params)
    ds = s_plus - s_minus
    if ds < DEGENERATE_SPEED_TOL:
        return (0.5 * (fm[0] + fp[0]), 0.5 * (fm[1] + fp[1]))
    w = s_plus * s_minus / ds
    return (
        (s_plus * fm[0] - s_minus * fp[0]) / ds + w * (u_plus[0] - u_minus[0]),
        (s_plus * fm[1] - s_minus * fp[1]) / ds + w * (u_plus[1] - u_minus[1]),
    )


def extended_arrays(pipe: PipeState, periodic: bool = False):
    """Cell arrays with two ghost entries per side, kernel layout."""
    n = pipe.n_cells
    rho_e = np.empty(n + 4)
    q_e = np.empty(n + 4)
    rho_e[2:-2] = pipe.rho
    q_e[2:-2] = pipe.q
    if periodic:
        rho_e[:2] = pipe.rho[-2:]
        q_e[:2] = pipe.q[-2:]
        rho_e[-2:] = pipe.rho[:2]
        q_e[-2:] = pipe.q[:2]
    else:
        rho_e[:2] = pipe.ghost_left[0]
        q_e[:2] = pipe.ghost_left[1]
        rho_e[-2:] = pipe.ghost_right[0]
        q_e[-2:] = pipe.ghost_right[1]
    return rho_e, q_e


def interface_fluxes(pipe: PipeState, split: SplitParams, params: GasParameters,
                     left_first_order: bool = False,
                     right_first_order: bool = False,
                     periodic: bool = False):
    """Slow-flux CU fluxes at the n+1 interfaces of one pipe.

    Junction-adjacent boundary interfaces take the first-order rule (both
    traces equal the ghost state); inlet/outlet interfaces keep the ghost
    constant as the outside trace only.
    """
    rho_e, q_e = extended_arrays(pipe, periodic)
    # Traces obey the local maximum principle for theta <= 2, so checking the
    # cell and ghost values covers the reconstructed ones too.
    pd_min = float(pressure_derivative(rho_e, params).min())
    if pd_min - split.a_n < -RADICAND_TOL:
        raise NegativeRadicand(
            f"min p'(rho)={pd_min} below a_n={split.a_n}; stiffness params are stale")
    return _kernels.split_interface_flux(
        rho_e, q_e, pipe.dx, params.theta, params.gamma, params.epsilon**-2.0,
        split.alpha, params.alpha_over_eps2, split.a_n,
        left_first_order, right_first_order)


def nonstiff_residual(pipe: PipeState, split: SplitParams, params: GasParameters,
                      left_first_order: bool = False,
                      right_first_order: bool = False,
                      periodic: bool = False):
    """Per-cell flux-difference residual (R_rho, R_q) of the slow subsystem."""
    frho, fq = interface_fluxes(pipe, split, params, left_first_order,
                                right_first_order, periodic)
    inv_dx = 1.0 / pipe.dx
    return (-(frho[1:] - frho[:-1]) * inv_dx, -(fq[1:] - fq[:-1]) * inv_dx)
