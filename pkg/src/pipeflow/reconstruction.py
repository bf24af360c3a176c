"""Generalized minmod limiting and piecewise-linear interface states."""

from __future__ import annotations

import numpy as np

from .errors import ReconstructedVacuum
from .model import VACUUM_FLOOR


def minmod(z1: float, z2: float, z3: float) -> float:
    """Min of the arguments if all positive, max if all negative, else 0."""
    if z1 > 0.0 and z2 > 0.0 and z3 > 0.0:
        return min(z1, z2, z3)
    if z1 < 0.0 and z2 < 0.0 and z3 < 0.0:
        return max(z1, z2, z3)
    return 0.0


def minmod3(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Componentwise three-argument minmod."""
    pos = (a > 0.0) & (b > 0.0) & (c > 0.0)
    neg = (a < 0.0) & (b < 0.0) & (c < 0.0)
    out = np.zeros_like(a)
    out[pos] = np.minimum(np.minimum(a[pos], b[pos]), c[pos])
    out[neg] = np.maximum(np.maximum(a[neg], b[neg]), c[neg])
    return out


def slopes(field: np.ndarray, theta: float, dx: float,
           ghost_left: float, ghost_right: float) -> np.ndarray:
    """Limited slopes for every cell; boundary cells use the ghost values."""
    ext = np.empty(field.size + 2)
    ext[0] = ghost_left
    ext[1:-1] = field
    ext[-1] = ghost_right
    fwd = theta * (ext[2:] - ext[1:-1]) / dx
    ctr = (ext[2:] - ext[:-2]) / (2.0 * dx)
    bwd = theta * (ext[1:-1] - ext[:-2]) / dx
    return minmod3(fwd, ctr, bwd)


def interface_states(field: np.ndarray, slope: np.ndarray, dx: float,
                     ghost_left: float, ghost_right: float,
                     check_vacuum: bool = False):
    """One-sided traces at the N+1 interfaces of an N-cell pipe.

    Interface k sits between cell k-1 and cell k; the outermost traces are
    the (constant) ghost values.  Returns (minus, plus) arrays of length N+1.
    """
    n = field.size
    minus = np.empty(n + 1)
    plus = np.empty(n + 1)
    minus[0] = ghost_left
    minus[1:] = field + 0.5 * dx * slope
    plus[:-1] = field - 0.5 * dx * slope
    plus[-1] = ghost_right
    if check_vacuum and (minus.min() <= VACUUM_FLOOR or plus.min() <= VACUUM_FLOOR):
        raise ReconstructedVacuum("reconstructed density at or below vacuum floor")
    return minus, plus
