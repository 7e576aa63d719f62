"""Drive fields for the accelerated adiabatic sweep.

The sweep multiplies the instantaneous eigenfunction by a quadratic local
phase m Ldot x^2 / (2 hbar L) and a dynamical phase, and adds a quadratic
driving term to the potential. The phase gradient can also be reconstructed
by integrating the size-derivative of the probability density, which serves
as an independent route to the closed form.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_simpson, quad

from .errors import NumericsError, TruncationWarning
from .spectra import Confinement, Grid, Kind, eigenfunction, energy
from .trajectory import KinematicSample

#: density floor (relative to max) below which the integral route divides
#: by an unreliable probability density and switches to extrapolation
_NODE_FLOOR = 1e-10
#: grid cells added around each below-floor run (the quotient is polluted
#: a few cells into the valid side)
_NODE_PAD = 3


@dataclass(frozen=True)
class FFFields:
    """Phase samples, total driving potential samples, dynamical phase."""

    theta: np.ndarray
    v_total: np.ndarray
    dyn_phase: float


@dataclass(frozen=True)
class FFWavefunction:
    """Closed-form driven state on a grid; unit discrete norm."""

    psi: np.ndarray
    n: int
    t: float
    grid: Grid


@dataclass(frozen=True)
class ThetaReconstruction:
    """Integral-route phase; node patches are reported, not fatal."""

    theta: np.ndarray
    dtheta_dx: np.ndarray
    node_deviation: float


def theta_phase(conf: Confinement, L, grid: Grid) -> np.ndarray:
    """Closed-form phase profile m x^2 / (2 hbar L), both models."""
    if not L > 0:
        raise ValueError("L must be positive")
    u = conf.units
    return u.mass * grid.x**2 / (2.0 * u.hbar * L)


def ff_potential(conf: Confinement, k: KinematicSample, grid: Grid) -> np.ndarray:
    """Total potential during the sweep (confining part plus drive).

    Soft: (m/2)(hbar^2/(m^2 L^4) - Lddot/L) x^2. Hard: -(m/2)(Lddot/L) x^2
    inside the box (the walls themselves live in the propagator). Depends on
    (L, Lddot) only, never on Ldot.
    """
    u = conf.units
    if conf.kind is Kind.SOFT:
        coef = 0.5 * u.mass * (u.hbar**2 / (u.mass**2 * k.L**4) - k.Lddot / k.L)
    else:
        coef = -0.5 * u.mass * k.Lddot / k.L
    return coef * grid.x**2


def dynamical_phase(conf: Confinement, traj, n: int, t: float) -> float:
    """Accumulated phase int_0^t E_n(L(s)) ds / hbar by adaptive quadrature."""
    if t == 0.0:
        return 0.0
    u = conf.units

    def integrand(s):
        return energy(conf, n, traj.size(s)) / u.hbar

    pts = [traj.T_FF] if 0.0 < traj.T_FF < t else None
    val, err = quad(integrand, 0.0, t, epsabs=1e-12, epsrel=1e-12,
                    limit=200, points=pts)
    if err > 1e-9 * max(1.0, abs(val)):
        raise NumericsError(
            f"dynamical-phase quadrature reached {err:.3e}, needed 1e-9")
    return val


def ff_fields(conf: Confinement, traj, n: int, t: float, grid: Grid) -> FFFields:
    k = traj.kinematics(t)
    return FFFields(
        theta=theta_phase(conf, k.L, grid),
        v_total=ff_potential(conf, k, grid),
        dyn_phase=dynamical_phase(conf, traj, n, t),
    )


def ff_wavefunction(conf: Confinement, traj, n: int, t: float,
                    grid: Grid) -> FFWavefunction:
    """Driven state: phi_n(x, L(t)) exp(i m Ldot x^2 / 2 hbar L) exp(-i phase)."""
    k = traj.kinematics(t)
    u = conf.units
    phi = eigenfunction(conf, n, k.L, grid)
    local = u.mass * k.Ldot / (2.0 * u.hbar * k.L) * grid.x**2
    psi = phi.astype(np.complex128) * np.exp(1j * local)
    psi *= np.exp(-1j * dynamical_phase(conf, traj, n, t))
    nrm = grid.norm(psi)
    if abs(nrm - 1.0) > 1e-6:
        warnings.warn(f"discrete norm {nrm:.8f} far from 1; grid too small?",
                      TruncationWarning, stacklevel=2)
    return FFWavefunction(psi=psi / nrm, n=n, t=t, grid=grid)


# ----------------------------------------------------------------------
# integral route to the phase
# ----------------------------------------------------------------------

def _density_unclamped(conf, n, L, x):
    # the hard-wall eigenfunction must not be zero-clamped at x = L when
    # evaluated at L -/+ h, or the size derivative picks up a spurious step
    if conf.kind is Kind.SOFT:
        from . import kernels
        return kernels.hermite_psi(x / L, n) ** 2 / L
    return 2.0 / L * np.sin(np.pi * n * x / L) ** 2


def _cumulative_from_left(f, x):
    return cumulative_simpson(f, x=x, initial=0.0)


def _cumulative_from_right(f, x):
    # J(x) = -int_x^b f dx', so J' = f and J(b) = 0
    return -cumulative_simpson(f[::-1], x=-x[::-1], initial=0.0)[::-1]


def _patch_invalid(x, vals, bad):
    """One-sided quadratic extrapolation across invalid runs.

    Returns the patched array and the worst disagreement between the
    left- and right-sided limits where both exist.
    """
    vals = vals.copy()
    deviation = 0.0
    idx = np.flatnonzero(bad)
    if idx.size == 0:
        return vals, deviation
    runs = np.split(idx, np.flatnonzero(np.diff(idx) > 1) + 1)
    good = np.flatnonzero(~bad)
    for run in runs:
        lo, hi = run[0], run[-1]
        left = good[(good < lo)][-3:]
        right = good[(good > hi)][:3]
        est = []
        for side in (left, right):
            if side.size >= 2:
                coef = np.polyfit(x[side], vals[side], min(2, side.size - 1))
                est.append(np.polyval(coef, x[run]))
        if not est:
            raise NumericsError("no valid neighbours to patch node region")
        if len(est) == 2:
            deviation = max(deviation, float(np.max(np.abs(est[0] - est[1]))))
            vals[run] = 0.5 * (est[0] + est[1])
        else:
            vals[run] = est[0]
    return vals, deviation


def theta_from_integral(conf: Confinement, n: int, L: float, grid: Grid,
                        dL_rel: float = 1e-6) -> ThetaReconstruction:
    """Reconstruct the phase from the size-derivative of the density.

    dtheta/dx = -(m/hbar) (1/rho) int^x dL(rho) dx', accumulated from the
    nearest tail so roundoff stays proportional to the local mass, with
    node regions bridged by one-sided extrapolation. The additive constant
    is fixed by theta = 0 at the grid point nearest the trap center (soft)
    or at the left wall (hard).
    """
    u = conf.units
    x = grid.x
    h = dL_rel * L
    rho_p = _density_unclamped(conf, n, L + h, x)
    rho_m = _density_unclamped(conf, n, L - h, x)
    drho = (rho_p - rho_m) / (2.0 * h)
    center = 0.0 if conf.kind is Kind.SOFT else 0.5 * L
    integral = np.where(x <= center,
                        _cumulative_from_left(drho, x),
                        _cumulative_from_right(drho, x))
    rho = _density_unclamped(conf, n, L, x)
    with np.errstate(divide="ignore", invalid="ignore"):
        dtheta = -(u.mass / u.hbar) * integral / rho
    bad = ~np.isfinite(dtheta) | (rho < _NODE_FLOOR * rho.max())
    for _ in range(_NODE_PAD):
        grown = bad.copy()
        grown[1:] |= bad[:-1]
        grown[:-1] |= bad[1:]
        bad = grown
    dtheta, deviation = _patch_invalid(x, dtheta, bad)
    theta = cumulative_simpson(dtheta, x=x, initial=0.0)
    anchor = np.argmin(np.abs(x)) if conf.kind is Kind.SOFT else 0
    theta = theta - theta[anchor]
    return ThetaReconstruction(theta=theta, dtheta_dx=dtheta,
                               node_deviation=deviation)
