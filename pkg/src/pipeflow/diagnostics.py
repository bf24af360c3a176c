"""Error norms, convergence rates, asymptotic residuals and conservation
accounting."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GridMismatch, NonPositiveDifference
from .model import GasParameters, NetworkState, pressure


def project_halved(fine: np.ndarray) -> np.ndarray:
    """Cell averages on the coarsened grid: pairwise means of a field on a
    grid with exactly twice the cells."""
    if fine.size % 2 != 0:
        raise GridMismatch("fine field must have an even number of cells")
    return 0.5 * (fine[0::2] + fine[1::2])


def l1_difference(coarse_pipes, fine_pipes):
    """Network-summed L1 distances (rho, q) between a coarse solution and a
    twice-refined one, the fine solution projected down by cell averaging."""
    if len(coarse_pipes) != len(fine_pipes):
        raise GridMismatch("pipe counts differ")
    err_rho = 0.0
    err_q = 0.0
    for c, f in zip(coarse_pipes, fine_pipes):
        if f.n_cells != 2 * c.n_cells:
            raise GridMismatch(
                f"expected {2 * c.n_cells} fine cells, got {f.n_cells}")
        err_rho += c.dx * float(np.abs(project_halved(f.rho) - c.rho).sum())
        err_q += c.dx * float(np.abs(project_halved(f.q) - c.q).sum())
    return err_rho, err_q


def runge_rate(coarse_err: float, fine_err: float) -> float:
    """Observed order log2(e_h / e_{h/2}) from errors on successive grids."""
    if coarse_err <= 0.0 or fine_err <= 0.0:
        raise NonPositiveDifference("convergence rates need positive errors")
    return float(np.log2(coarse_err / fine_err))


@dataclass(frozen=True)
class ConvergenceRow:
    """One line of a grid-refinement study."""

    n_cells: int
    dx: float
    err_rho: float
    err_q: float
    rate_rho: float | None = None
    rate_q: float | None = None


def convergence_table(entries) -> list:
    """Attach observed rates to a refinement ladder.

    ``entries`` is a sequence of (n_cells, dx, err_rho, err_q) ordered from
    coarsest to finest.
    """
    rows = []
    prev = None
    for n_cells, dx, err_rho, err_q in entries:
        if prev is None:
            rows.append(ConvergenceRow(n_cells, dx, err_rho, err_q))
        else:
            rows.append(ConvergenceRow(
                n_cells, dx, err_rho, err_q,
                rate_rho=runge_rate(prev[0], err_rho),
                rate_q=runge_rate(prev[1], err_q)))
        prev = (err_rho, err_q)
    return rows


def ap_residual(net: NetworkState, params: GasParameters) -> float:
    """Distance from the zero-Mach limit balance p_x = -C_delta*kappa/2 *
    rho*u*|u|: the L1 norm, over interior cells of all pipes, of the central
    difference of p plus the friction term.

    Vanishes as the flow relaxes onto the limit manifold.
    """
    total = 0.0
    half_fric = 0.5 * params.c_delta * params.kappa
    for pipe in net.pipes:
        p = pressure(pipe.rho, params)
        u = pipe.u
        px = (p[2:] - p[:-2]) / (2.0 * pipe.dx)
        res = px + half_fric * pipe.rho[1:-1] * u[1:-1] * np.abs(u[1:-1])
        total += pipe.dx * float(np.abs(res).sum())
    return total


def conservation_audit(mass_before: float, net_after: NetworkState,
                       injected: float = 0.0) -> dict:
    """Mass bookkeeping across a stretch of steps.

    ``injected`` is the net mass added through open boundaries (zero for a
    closed/periodic network); the drift is what the scheme lost beyond that.
    """
    mass_after = net_after.total_mass()
    drift = mass_after - mass_before - injected
    return {
        "mass_before": mass_before,
        "mass_after": mass_after,
        "injected": injected,
        "drift": drift,
    }
