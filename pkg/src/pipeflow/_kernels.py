"""Hot numerical kernels with a numba fast path and a pure-numpy fallback.

The backend is chosen from the ``PIPEFLOW_BACKEND`` environment variable
("numba" or "numpy", default "numba" when numba imports cleanly) and can be
switched at runtime with :func:`set_backend`.  Both paths implement the same
arithmetic; ``tests/test_kernels.py`` pins their agreement.

Interface-flux kernels take *extended* cell arrays with two ghost entries on
each side: for a pipe with ``n`` cells the arrays have length ``n + 4`` and
interface ``k`` (k = 0..n) sits between extended cells ``k+1`` and ``k+2``.
Non-periodic pipes duplicate the single physical ghost (which makes the ghost
slope vanish); periodic pipes wrap the opposite end in.
"""

from __future__ import annotations

import os

import numpy as np

from .errors import SingularSystem
from .reconstruction import minmod3

_VALID = ("numba", "numpy")
_BACKEND = os.environ.get("PIPEFLOW_BACKEND", "numba").lower()
if _BACKEND not in _VALID:
    raise ValueError(f"PIPEFLOW_BACKEND must be one of {_VALID}, got {_BACKEND!r}")

_numba_fns: dict = {}


def set_backend(name: str) -> None:
    global _BACKEND
    if name not in _VALID:
        raise ValueError(f"backend must be one of {_VALID}, got {name!r}")
    if name == "numba":
        _compile()
    _BACKEND = name


def get_backend() -> str:
    if _BACKEND == "numba" and not _numba_fns:
        try:
            _compile()
        except ImportError:
            set_backend("numpy")
    return _BACKEND


# ---------------------------------------------------------------------------
# numba path
# ---------------------------------------------------------------------------

def _compile() -> None:
    """Import the jitted kernels once (disk-cached by numba)."""
    if _numba_fns:
        return
    from . import _kernels_numba as nb

    _numba_fns["split_flux"] = nb.split_flux_loop
    _numba_fns["full_flux"] = nb.full_flux_loop
    _numba_fns["thomas"] = nb.thomas_loop


# ---------------------------------------------------------------------------
# numpy path
# ---------------------------------------------------------------------------

def _slopes_np(v, dx, theta):
    out = np.zeros_like(v)
    out[1:-1] = minmod3(
        theta * (v[2:] - v[1:-1]) / dx,
        (v[2:] - v[:-2]) / (2.0 * dx),
        theta * (v[1:-1] - v[:-2]) / dx,
    )
    return out


def _traces_np(rho_e, q_e, dx, theta, left_fo, right_fo):
    n = rho_e.shape[0] - 4
    sr = _slopes_np(rho_e, dx, theta)
    sq = _slopes_np(q_e, dx, theta)
    rl = rho_e[1:n + 2] + 0.5 * dx * sr[1:n + 2]
    ql = q_e[1:n + 2] + 0.5 * dx * sq[1:n + 2]
    rr = rho_e[2:n + 3] - 0.5 * dx * sr[2:n + 3]
    qr = q_e[2:n + 3] - 0.5 * dx * sq[2:n + 3]
    if left_fo:
        rl[0] = rr[0] = rho_e[1]
        ql[0] = qr[0] = q_e[1]
    if right_fo:
        rl[-1] = rr[-1] = rho_e[n + 2]
        ql[-1] = qr[-1] = q_e[n + 2]
    return rl, ql, rr, qr


def _cu_combine_np(sp, sm, flr, flq, frr, frq, rl, ql, rr, qr):
    ds = sp - sm
    degen = ds < 1e-12
    ds_safe = np.where(degen, 1.0, ds)
    frho = (sp * flr - sm * frr) / ds_safe + sp * sm / ds_safe * (rr - rl)
    fq = (sp * flq - sm * frq) / ds_safe + sp * sm / ds_safe * (qr - ql)
    frho = np.where(degen, 0.5 * (flr + frr), frho)
    fq = np.where(degen, 0.5 * (flq + frq), fq)
    return frho, fq


def _split_flux_np(rho_e, q_e, dx, theta, gamma, inv_eps2,
                   alpha, a_over_e2, a_n, left_fo, right_fo):
    rl, ql, rr, qr = _traces_np(rho_e, q_e, dx, theta, left_fo, right_fo)
    ul = ql / rl
    ur = qr / rr
    cl = np.sqrt(np.maximum(
        (1.0 - alpha) * ul**2 + a_over_e2 * (gamma * rl ** (gamma - 1.0) - a_n), 0.0))
    cr = np.sqrt(np.maximum(
        (1.0 - alpha) * ur**2 + a_over_e2 * (gamma * rr ** (gamma - 1.0) - a_n), 0.0))
    sp = np.maximum(np.maximum(ul + cl, ur + cr), 0.0)
    sm = np.minimum(np.minimum(ul - cl, ur - cr), 0.0)
    flr = alpha * ql
    flq = ql * ul + (rl**gamma - a_n * rl) * inv_eps2
    frr = alpha * qr
    frq = qr * ur + (rr**gamma - a_n * rr) * inv_eps2
    return _cu_combine_np(sp, sm, flr, flq, frr, frq, rl, ql, rr, qr)


def _full_flux_np(rho_e, q_e, dx, theta, gamma, inv_eps2, inv_eps,
                  left_fo, right_fo):
    rl, ql, rr, qr = _traces_np(rho_e, q_e, dx, theta, left_fo, right_fo)
    ul = ql / rl
    ur = qr / rr
    cl = np.sqrt(gamma * rl ** (gamma - 1.0)) * inv_eps
    cr = np.sqrt(gamma * rr ** (gamma - 1.0)) * inv_eps
    sp = np.maximum(np.maximum(ul + cl, ur + cr), 0.0)
    sm = np.minimum(np.minimum(ul - cl, ur - cr), 0.0)
    flr = ql
    flq = ql * ul + rl**gamma * inv_eps2
    frr = qr
    frq = qr * ur + rr**gamma * inv_eps2
    return _cu_combine_np(sp, sm, flr, flq, frr, frq, rl, ql, rr, qr)


def _thomas_np(sub, diag, sup, rhs):
    from scipy.linalg import solve_banded

    n = diag.size
    ab = np.zeros((3, n))
    ab[0, 1:] = sup[:-1]
    ab[1, :] = diag
    ab[2, :-1] = sub[1:]
    return solve_banded((1, 1), ab, rhs)


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

def split_interface_flux(rho_e, q_e, dx, theta, gamma, inv_eps2,
                         alpha, a_over_e2, a_n,
                         left_first_order=False, right_first_order=False):
    """Central-upwind fluxes of the slow (non-stiff) split flux at all
    interfaces of one pipe; arrays of length n+1."""
    if get_backend() == "numba":
        return _numba_fns["split_flux"](
            rho_e, q_e, dx, theta, gamma, inv_eps2, alpha, a_over_e2, a_n,
            left_first_order, right_first_order)
    return _split_flux_np(rho_e, q_e, dx, theta, gamma, inv_eps2,
                          alpha, a_over_e2, a_n,
                          left_first_order, right_first_order)


def full_interface_flux(rho_e, q_e, dx, theta, gamma, inv_eps2, inv_eps,
                        left_first_order=False, right_first_order=False):
    """Central-upwind fluxes of the unsplit physical flux (explicit baseline)."""
    if get_backend() == "numba":
        return _numba_fns["full_flux"](
            rho_e, q_e, dx, theta, gamma, inv_eps2, inv_eps,
            left_first_order, right_first_order)
    return _full_flux_np(rho_e, q_e, dx, theta, gamma, inv_eps2, inv_eps,
                         left_first_order, right_first_order)


def thomas(sub, diag, sup, rhs):
    """Tridiagonal solve by forward elimination / back substitution."""
    if get_backend() == "numba":
        x, ok = _numba_fns["thomas"](sub, diag, sup, rhs)
        if not ok:
            raise SingularSystem("pivot magnitude below 1e-14")
        return x
    if np.any(np.abs(diag) < 1e-14):
        raise SingularSystem("pivot magnitude below 1e-14")
    return _thomas_np(sub, diag, sup, rhs)
