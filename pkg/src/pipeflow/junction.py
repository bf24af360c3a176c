"""Half-Riemann junction coupling: Lax curves, coupling residual, Newton
solve and ghost-state production.

At a junction the boundary state of every incident pipe is a "starred"
state.  Ingoing pipes (junction at their right end) admit only left-running
waves, so their starred state sits on the forward 1-Lax curve through the
nearest-cell trace; outgoing pipes (junction at their left end) admit only
right-running waves and use the reversed 2-Lax curve.  Momentum conservation
sums starred momenta of ingoing pipes against outgoing ones; at rest this is
equivalent to summing the reversed-2-curve values over every incident pipe.
A ``verbatim_sum`` mode that does exactly that latter summation is kept for
comparison.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import JunctionNewtonFailure, NonPositiveDensity
from .model import (GasParameters, JunctionSolution, JunctionSpec,
                    VACUUM_FLOOR, pressure, pressure_derivative)

log = logging.getLogger("pipeflow")

_FD_STEP = 1e-7
_CLIP_FLOOR = 1e-10


def _rarefaction(rho, rho_hat, params):
    """Integral term g(rho, rho_hat) of the rarefaction branch (< 0 for
    rho < rho_hat)."""
    c = np.sqrt(pressure_derivative(rho, params))
    c_hat = np.sqrt(pressure_derivative(rho_hat, params))
    return 2.0 / (params.gamma - 1.0) * rho * (c - c_hat)


def _shock(rho, rho_hat, params):
    """Rankine-Hugoniot term h(rho, rho_hat) of the shock branch (> 0 for
    rho > rho_hat)."""
    dp = pressure(rho, params) - pressure(rho_hat, params)
    return np.sqrt(rho / rho_hat * (rho - rho_hat) * dp)


def wave_strength(rho, rho_hat, params: GasParameters):
    """Branch term shared by both curves: g on the rarefaction side
    (rho < rho_hat, negative), h on the shock side (rho > rho_hat,
    positive); continuous through zero at rho = rho_hat."""
    if rho < rho_hat:
        return _rarefaction(rho, rho_hat, params)
    if rho > rho_hat:
        return _shock(rho, rho_hat, params)
    return 0.0


def lax1_forward(rho, rho_hat, q_hat, params: GasParameters):
    """Momentum on the forward 1-Lax curve through (rho_hat, q_hat)."""
    if rho <= VACUUM_FLOOR or rho_hat <= VACUUM_FLOOR:
        raise NonPositiveDensity("Lax curve evaluated at vacuum density")
    return rho / rho_hat * q_hat - wave_strength(rho, rho_hat, params) / params.epsilon


def lax2_backward(rho, rho_hat, q_hat, params: GasParameters):
    """Momentum on the reversed 2-Lax curve through (rho_hat, q_hat)."""
    if rho <= VACUUM_FLOOR or rho_hat <= VACUUM_FLOOR:
        raise NonPositiveDensity("Lax curve evaluated at vacuum density")
    return rho / rho_hat * q_hat + wave_strength(rho, rho_hat, params) / params.epsilon


@dataclass(frozen=True)
class TraceData:
    """Nearest-cell states of the incident pipes, in JunctionSpec.pipes
    order: ingoing first, then outgoing."""

    rho: np.ndarray
    q: np.ndarray
    n_ingoing: int

    @property
    def n_pipes(self) -> int:
        return self.rho.size


def make_traces(pipes, spec: JunctionSpec, params: GasParameters) -> TraceData:
    """Collect the cell value nearest the junction from every incident pipe."""
    rho = []
    q = []
    for k in spec.ingoing:
        rho.append(pipes[k].rho[-1])
        q.append(pipes[k].q[-1])
    for k in spec.outgoing:
        rho.append(pipes[k].rho[0])
        q.append(pipes[k].q[0])
    rho = np.array(rho)
    q = np.array(q)
    sound = np.sqrt(pressure_derivative(rho, params)) / params.epsilon
    if np.any(np.abs(q / rho) > sound):
        log.warning("supersonic trace at junction with pipes %s", spec.pipes)
    return TraceData(rho=rho, q=q, n_ingoing=len(spec.ingoing))


def starred_momenta(rho_star, traces: TraceData, params: GasParameters):
    """Starred momentum of every incident pipe for candidate densities."""
    q_star = np.empty(traces.n_pipes)
    for i in range(traces.n_pipes):
        if i < traces.n_ingoing:
            q_star[i] = lax1_forward(rho_star[i], traces.rho[i], traces.q[i], params)
        else:
            q_star[i] = lax2_backward(rho_star[i], traces.rho[i], traces.q[i], params)
    return q_star


def coupling_residual(rho_star, traces: TraceData, spec: JunctionSpec,
                      params: GasParameters, verbatim_sum: bool = False):
    """Residual vector of the junction system for candidate densities.

    Component 0 is momentum conservation; components 1..K-1 chain each pipe's
    closure condition against pipe 0.  The equal-momentum and pressure-loss
    conditions are scaled by epsilon^2 to keep the Jacobian well conditioned
    as epsilon -> 0.
    """
    rho_star = np.asarray(rho_star, dtype=np.float64)
    if np.any(rho_star <= VACUUM_FLOOR):
        raise NonPositiveDensity("candidate junction density at vacuum floor")
    k_tot = traces.n_pipes
    res = np.empty(k_tot)
    if verbatim_sum:
        q2 = np.array([lax2_backward(rho_star[i], traces.rho[i], traces.q[i], params)
                       for i in range(k_tot)])
        res[0] = q2.sum()
    else:
        q_star = starred_momenta(rho_star, traces, params)
        res[0] = (q_star[:traces.n_ingoing].sum()
                  - q_star[traces.n_ingoing:].sum())
    p_star = pressure(rho_star, params)
    eps2 = params.epsilon**2
    if spec.condition == "equal_pressure":
        res[1:] = p_star[1:] - p_star[0]
    elif spec.condition == "equal_momentum":
        q_star = starred_momenta(rho_star, traces, params)
        mom = eps2 * q_star**2 / rho_star + p_star
        res[1:] = mom[1:] - mom[0]
    else:  # pressure_loss; pipe 0 is the reference ingoing pipe
        h = spec.h or {}
        ref_id = spec.pipes[0]
        for i in range(1, k_tot):
            if i < traces.n_ingoing:
                # additional ingoing pipes: equal pressure with the reference
                res[i] = p_star[i] - p_star[0]
            else:
                loss = h.get((ref_id, spec.pipes[i]), 0.0)
                res[i] = p_star[0] - p_star[i] + eps2 * loss
    return res


def solve_junction(traces: TraceData, spec: JunctionSpec,
                   params: GasParameters,
                   verbatim_sum: bool = False) -> JunctionSolution:
    """Newton iteration with finite-difference Jacobian, initial guess the
    nearest-cell densities."""
    rho_star = traces.rho.copy()
    k_tot = traces.n_pipes
    clipped_once = False
    res = coupling_residual(rho_star, traces, spec, params, verbatim_sum)
    norm = float(np.abs(res).max())
    iters = 0
    while norm > spec.newton_tol:
        if iters >= spec.newton_max_iter:
            raise JunctionNewtonFailure(
                f"no convergence after {iters} iterations, residual {norm:.3e}")
        jac = np.empty((k_tot, k_tot))
        for i in range(k_tot):
            step = _FD_STEP * max(1.0, abs(rho_star[i]))
            bumped = rho_star.copy()
            bumped[i] += step
            jac[:, i] = (coupling_residual(bumped, traces, spec, params,
                                           verbatim_sum) - res) / step
        try:
            delta = np.linalg.solve(jac, -res)
        except np.linalg.LinAlgError as exc:
            raise JunctionNewtonFailure(f"singular Jacobian: {exc}") from exc
        rho_star = rho_star + delta
        if np.any(rho_star <= _CLIP_FLOOR):
            if clipped_once:
                raise NonPositiveDensity("junction iterate needed clipping twice")
            clipped_once = True
            rho_star = np.maximum(rho_star, _CLIP_FLOOR)
        res = coupling_residual(rho_star, traces, spec, params, verbatim_sum)
        norm = float(np.abs(res).max())
        iters += 1
    q_star = starred_momenta(rho_star, traces, params)
    return JunctionSolution(rho_star=rho_star, q_star=q_star,
                            iterations=iters, residual_norm=norm)


def ghost_states(solution: JunctionSolution, spec: JunctionSpec) -> dict:
    """Ghost (rho, q) per incident pipe end, keyed by (pipe_id, side).

    The same starred state is also the first-order interface override at the
    junction-adjacent interface.
    """
    ghosts = {}
    for i, k in enumerate(spec.ingoing):
        ghosts[(k, "right")] = (solution.rho_star[i], solution.q_star[i])
    off = len(spec.ingoing)
    for i, k in enumerate(spec.outgoing):
        ghosts[(k, "left")] = (solution.rho_star[off + i], solution.q_star[off + i])
    return ghosts
