"""Hot numeric kernels: numba-compiled with a pure numpy/scipy fallback.

The fallback is selected automatically when numba is unavailable, or forced
with the environment variable ``FFGAS_NUMBA=0``. Both paths agree to
floating-point roundoff; ``benchmarks/bench_kernels.py`` times them against
each other.
"""
from __future__ import annotations

import os

import numpy as np
from scipy.linalg import solve_banded

try:
    if os.environ.get("FFGAS_NUMBA", "1") == "0":
        raise ImportError("numba disabled via FFGAS_NUMBA=0")
    from numba import njit

    NUMBA_ENABLED = True
except ImportError:
    njit = None
    NUMBA_ENABLED = False


# ----------------------------------------------------------------------
# normalized harmonic-oscillator eigenfunctions (stable three-term
# recurrence on the already-normalized functions; raw Hermite polynomials
# would overflow near n ~ 150)
# ----------------------------------------------------------------------

_RESCALE = 1e200  # recurrence magnitude bound; one step grows < 1e3


def hermite_psi_numpy(xi, n):
    """psi_n(xi) with psi_0 = pi^-1/4 exp(-xi^2/2); unit L2 norm in xi.

    The Gaussian seed is carried as (mantissa, log-scale) per point: for
    large n the seed underflows inside the classically allowed region while
    the recurrence grows back by hundreds of orders of magnitude, so a
    plain float recurrence would silently zero the state.
    """
    xi = np.asarray(xi, dtype=np.float64)
    log_scale = -0.5 * xi * xi - 0.25 * np.log(np.pi)
    cur = np.ones_like(xi)
    prev = np.zeros_like(xi)
    for k in range(n):
        cur, prev = (np.sqrt(2.0 / (k + 1)) * xi * cur
                     - np.sqrt(k / (k + 1.0)) * prev), cur
        big = np.abs(cur) > _RESCALE
        if big.any():
            factor = np.where(big, 1.0 / _RESCALE, 1.0)
            cur *= factor
            prev *= factor
            log_scale += np.where(big, np.log(_RESCALE), 0.0)
    return cur * np.exp(log_scale)


def _hermite_psi_loop(xi, n):
    # k-outer with a branch-free inner sweep keeps the loop vectorizable;
    # the magnitude check only needs to run every few orders because one
    # step grows the mantissa by at most ~sqrt(2)*|xi| + 1
    M = xi.size
    cur = np.ones(M)
    prev = np.zeros(M)
    log_scale = -0.5 * xi * xi - 0.25 * np.log(np.pi)
    log_rescale = np.log(_RESCALE)
    for k in range(n):
        ca = np.sqrt(2.0 / (k + 1.0))
        cb = np.sqrt(k / (k + 1.0))
        for i in range(M):
            nxt = ca * xi[i] * cur[i] - cb * prev[i]
            prev[i] = cur[i]
            cur[i] = nxt
        if k % 8 == 7:
            for i in range(M):
                if abs(cur[i]) > _RESCALE:
                    cur[i] /= _RESCALE
                    prev[i] /= _RESCALE
                    log_scale[i] += log_rescale
    return cur * np.exp(log_scale)


# ----------------------------------------------------------------------
# Crank-Nicolson sweeps. Potential model: V(x, t) = q(t) x^2, plus for the
# hard wall an effectively infinite step beyond x = wall(t), ramped over one
# grid cell. Off-diagonals are constant, so the Thomas solve specializes.
# ----------------------------------------------------------------------

def _cn_fixed_step_potential(x, dx, q, wall, wall_height):
    V = q * x * x
    if np.isfinite(wall):
        ramp = np.clip((x - (wall - dx)) / dx, 0.0, 1.0)
        V = np.where(x >= wall, wall_height + q * wall * wall, V + wall_height * ramp)
    return V


def cn_sweep_numpy(psi, x, dt, hbar, mass, qcoef, wall_pos, wall_height):
    """Advance psi over len(qcoef) steps; qcoef/wall_pos sampled at midpoints."""
    M = x.size
    dx = x[1] - x[0]
    kin = hbar * hbar / (2.0 * mass * dx * dx)
    r = 1j * dt / (2.0 * hbar)
    off = -kin * r
    ab = np.empty((3, M), dtype=np.complex128)
    ab[0] = off
    ab[2] = off
    psi = psi.copy()
    for k in range(qcoef.size):
        V = _cn_fixed_step_potential(x, dx, qcoef[k], wall_pos[k], wall_height)
        diag = 1.0 + r * (2.0 * kin + V)
        rhs = (2.0 - diag) * psi
        rhs[:-1] -= off * psi[1:]
        rhs[1:] -= off * psi[:-1]
        ab[1] = diag
        psi = solve_banded((1, 1), ab, rhs)
    return psi


def cn_sweep_scaled_numpy(psi, X, dt, hbar, mass, kin_coef, drift_coef, pot_coef):
    """Scaled-frame sweep on X in [0, 1]: kinetic/drift/quadratic coefficients
    vary per step and the drift makes the off-diagonals complex and unequal."""
    M = X.size
    dX = X[1] - X[0]
    r = 1j * dt / (2.0 * hbar)
    ab = np.empty((3, M), dtype=np.complex128)
    psi = psi.copy()
    for k in range(kin_coef.size):
        kin = kin_coef[k] / (dX * dX)
        drift = drift_coef[k]
        diag = 2.0 * kin + pot_coef[k] * X * X + 0.5j * hbar * drift
        up = -kin + 0.5j * hbar * drift * X / dX
        lo = -kin - 0.5j * hbar * drift * X / dX
        rhs = (1.0 - r * diag) * psi
        rhs[:-1] -= r * up[:-1] * psi[1:]
        rhs[1:] -= r * lo[1:] * psi[:-1]
        ab[0, 1:] = r * up[:-1]
        ab[1] = 1.0 + r * diag
        ab[2, :-1] = r * lo[1:]
        psi = solve_banded((1, 1), ab, rhs)
    return psi


if NUMBA_ENABLED:

    hermite_psi_jit = njit(cache=True)(_hermite_psi_loop)

    @njit(cache=True)
    def cn_sweep_jit(psi, x, dt, hbar, mass, qcoef, wall_pos, wall_height):
        M = x.size
        dx = x[1] - x[0]
        kin = hbar * hbar / (2.0 * mass * dx * dx)
        r = 1j * dt / (2.0 * hbar)
        off = -kin * r
        a = np.empty(M, np.complex128)
        b = np.empty(M, np.complex128)
        cp = np.empty(M, np.complex128)
        dp = np.empty(M, np.complex128)
        psi = psi.copy()
        for k in range(qcoef.size):
            q = qcoef[k]
            wall = wall_pos[k]
            for j in range(M):
                xj = x[j]
                if xj >= wall:
                    V = wall_height + q * wall * wall
                elif xj > wall - dx:
                    V = q * xj * xj + wall_height * (xj - (wall - dx)) / dx
                else:
                    V = q * xj * xj
                diag = 1.0 + r * (2.0 * kin + V)
                rv = (2.0 - diag) * psi[j]
                if j > 0:
                    rv -= off * psi[j - 1]
                if j < M - 1:
                    rv -= off * psi[j + 1]
                a[j] = diag
                b[j] = rv
            cp[0] = off / a[0]
            dp[0] = b[0] / a[0]
            for j in range(1, M):
                den = a[j] - off * cp[j - 1]
                cp[j] = off / den
                dp[j] = (b[j] - off * dp[j - 1]) / den
            psi[M - 1] = dp[M - 1]
            for j in range(M - 2, -1, -1):
                psi[j] = dp[j] - cp[j] * psi[j + 1]
        return psi

    @njit(cache=True)
    def cn_sweep_scaled_jit(psi, X, dt, hbar, mass, kin_coef, drift_coef, pot_coef):
        M = X.size
        dX = X[1] - X[0]
        r = 1j * dt / (2.0 * hbar)
        a = np.empty(M, np.complex128)
        b = np.empty(M, np.complex128)
        up = np.empty(M, np.complex128)
        lo = np.empty(M, np.complex128)
        cp = np.empty(M, np.complex128)
        dp = np.empty(M, np.complex128)
        psi = psi.copy()
        for k in range(kin_coef.size):
            kin = kin_coef[k] / (dX * dX)
            drift = drift_coef[k]
            q = pot_coef[k]
            for j in range(M):
                diag = 2.0 * kin + q * X[j] * X[j] + 0.5j * hbar * drift
                u = -kin + 0.5j * hbar * drift * X[j] / dX
                l = -kin - 0.5j * hbar * drift * X[j] / dX
                a[j] = 1.0 + r * diag
                up[j] = r * u
                lo[j] = r * l
                rv = (1.0 - r * diag) * psi[j]
                if j > 0:
                    rv -= lo[j] * psi[j - 1]
                if j < M - 1:
                    rv -= up[j] * psi[j + 1]
                b[j] = rv
            cp[0] = up[0] / a[0]
            dp[0] = b[0] / a[0]
            for j in range(1, M):
                den = a[j] - lo[j] * cp[j - 1]
                cp[j] = up[j] / den
                dp[j] = (b[j] - lo[j] * dp[j - 1]) / den
            psi[M - 1] = dp[M - 1]
            for j in range(M - 2, -1, -1):
                psi[j] = dp[j] - cp[j] * psi[j + 1]
        return psi

    def hermite_psi(xi, n):
        xi = np.ascontiguousarray(xi, dtype=np.float64)
        return hermite_psi_jit(xi, n)

    cn_sweep = cn_sweep_jit
    cn_sweep_scaled = cn_sweep_scaled_jit
else:
    hermite_psi = hermite_psi_numpy
    cn_sweep = cn_sweep_numpy
    cn_sweep_scaled = cn_sweep_scaled_numpy
