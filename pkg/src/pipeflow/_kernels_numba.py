"""Jitted loop kernels; imported lazily so the numpy backend never pays for
compilation.  Definitions mirror the numpy implementations in _kernels.py.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _mm(z1, z2, z3):
    if z1 > 0.0 and z2 > 0.0 and z3 > 0.0:
        return min(z1, min(z2, z3))
    if z1 < 0.0 and z2 < 0.0 and z3 < 0.0:
        return max(z1, max(z2, z3))
    return 0.0


@njit(cache=True)
def _limited_slopes(v, dx, theta, out):
    n = v.shape[0] - 4
    for i in range(1, n + 3):
        out[i] = _mm(
            theta * (v[i + 1] - v[i]) / dx,
            (v[i + 1] - v[i - 1]) / (2.0 * dx),
            theta * (v[i] - v[i - 1]) / dx,
        )


@njit(cache=True)
def split_flux_loop(rho_e, q_e, dx, theta, gamma, inv_eps2,
                    alpha, a_over_e2, a_n, left_fo, right_fo):
    n = rho_e.shape[0] - 4
    sr = np.zeros(n + 4)
    sq = np.zeros(n + 4)
    _limited_slopes(rho_e, dx, theta, sr)
    _limited_slopes(q_e, dx, theta, sq)
    frho = np.empty(n + 1)
    fq = np.empty(n + 1)
    for k in range(n + 1):
        il = k + 1
        ir = k + 2
        rl = rho_e[il] + 0.5 * dx * sr[il]
        ql = q_e[il] + 0.5 * dx * sq[il]
        rr = rho_e[ir] - 0.5 * dx * sr[ir]
        qr = q_e[ir] - 0.5 * dx * sq[ir]
        if k == 0 and left_fo:
            rl = rho_e[1]
            ql = q_e[1]
            rr = rl
            qr = ql
        if k == n and right_fo:
            rr = rho_e[n + 2]
            qr = q_e[n + 2]
            rl = rr
            ql = qr
        ul = ql / rl
        ur = qr / rr
        radl = (1.0 - alpha) * ul * ul + a_over_e2 * (gamma * rl ** (gamma - 1.0) - a_n)
        radr = (1.0 - alpha) * ur * ur + a_over_e2 * (gamma * rr ** (gamma - 1.0) - a_n)
        cl = np.sqrt(max(radl, 0.0))
        cr = np.sqrt(max(radr, 0.0))
        sp = max(max(ul + cl, ur + cr), 0.0)
        sm = min(min(ul - cl, ur - cr), 0.0)
        flr = alpha * ql
        flq = ql * ul + (rl**gamma - a_n * rl) * inv_eps2
        frr = alpha * qr
        frq = qr * ur + (rr**gamma - a_n * rr) * inv_eps2
        ds = sp - sm
        if ds < 1e-12:
            frho[k] = 0.5 * (flr + frr)
            fq[k] = 0.5 * (flq + frq)
        else:
            frho[k] = (sp * flr - sm * frr) / ds + sp * sm / ds * (rr - rl)
            fq[k] = (sp * flq - sm * frq) / ds + sp * sm / ds * (qr - ql)
    return frho, fq


@njit(cache=True)
def full_flux_loop(rho_e, q_e, dx, theta, gamma, inv_eps2, inv_eps,
                   left_fo, right_fo):
    n = rho_e.shape[0] - 4
    sr = np.zeros(n + 4)
    sq = np.zeros(n + 4)
    _limited_slopes(rho_e, dx, theta, sr)
    _limited_slopes(q_e, dx, theta, sq)
    frho = np.empty(n + 1)
    fq = np.empty(n + 1)
    for k in range(n + 1):
        il = k + 1
        ir = k + 2
        rl = rho_e[il] + 0.5 * dx * sr[il]
        ql = q_e[il] + 0.5 * dx * sq[il]
        rr = rho_e[ir] - 0.5 * dx * sr[ir]
        qr = q_e[ir] - 0.5 * dx * sq[ir]
        if k == 0 and left_fo:
            rl = rho_e[1]
            ql = q_e[1]
            rr = rl
            qr = ql
        if k == n and right_fo:
            rr = rho_e[n + 2]
            qr = q_e[n + 2]
            rl = rr
            ql = qr
        ul = ql / rl
        ur = qr / rr
        cl = np.sqrt(gamma * rl ** (gamma - 1.0)) * inv_eps
        cr = np.sqrt(gamma * rr ** (gamma - 1.0)) * inv_eps
        sp = max(max(ul + cl, ur + cr), 0.0)
        sm = min(min(ul - cl, ur - cr), 0.0)
        flr = ql
        flq = ql * ul + rl**gamma * inv_eps2
        frr = qr
        frq = qr * ur + rr**gamma * inv_eps2
        ds = sp - sm
        if ds < 1e-12:
            frho[k] = 0.5 * (flr + frr)
            fq[k] = 0.5 * (flq + frq)
        else:
            frho[k] = (sp * flr - sm * frr) / ds + sp * sm / ds * (rr - rl)
            fq[k] = (sp * flq - sm * frq) / ds + sp * sm / ds * (qr - ql)
    return frho, fq


@njit(cache=True)
def thomas_loop(sub, diag, sup, rhs):
    n = diag.shape[0]
    cp = np.empty(n)
    dp = np.empty(n)
    x = np.empty(n)
    piv = diag[0]
    if abs(piv) < 1e-14:
        return x, False
    cp[0] = sup[0] / piv
    dp[0] = rhs[0] / piv
    for i in range(1, n):
        piv = diag[i] - sub[i] * cp[i - 1]
        if abs(piv) < 1e-14:
            return x, False
        cp[i] = sup[i] / piv
        dp[i] = (rhs[i] - sub[i] * dp[i - 1]) / piv
    x[n - 1] = dp[n - 1]
    for i in range(n - 2, -1, -1):
        x[i] = dp[i] - cp[i] * x[i + 1]
    return x, True
