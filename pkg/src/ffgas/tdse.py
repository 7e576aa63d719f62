"""Ground-truth propagation: Crank-Nicolson integration of the driven
Schrodinger equation, independent of every closed form it checks.

The fixed frame covers both models (the moving hard wall is an effectively
infinite potential step ramped over one grid cell). The scaled frame maps
the hard-wall box onto fixed [0, 1] coordinates and serves as a cross-check
where the step approximation is weakest.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import NumericsError
from .fastforward import dynamical_phase, ff_wavefunction
from .spectra import Confinement, Grid, Kind, eigenfunction
from .trajectory import KinematicSample


@dataclass(frozen=True)
class PropagatorConfig:
    dt: float
    grid: Grid
    wall_height: float = 1e8
    frame: str = "fixed"

    def __post_init__(self):
        if not (self.dt > 0):
            raise ValueError("dt must be positive")
        if self.frame not in ("fixed", "scaled"):
            raise ValueError(f"unknown frame {self.frame!r}")


@dataclass(frozen=True)
class PropagationResult:
    psi_final: np.ndarray
    fidelity: float
    populations: np.ndarray
    population_remainder: float
    norm_drift: float
    energy_scale_exceeded: bool
    steps: int


def populations(conf: Confinement, psi, k: KinematicSample, grid: Grid,
                n_ref: int, count: int | None = None):
    """Projections onto the co-moving instantaneous basis (phase included).

    Returns (probs, remainder) where probs[j] belongs to quantum number
    lo + j, the window of `count` states (default 2 n_ref + 10) starting at
    lo = max(n_min, n_ref - count//2).
    """
    u = conf.units
    if count is None:
        count = 2 * n_ref + 10
    lo = max(conf.n_min, n_ref - count // 2)
    gamma = u.mass * k.Ldot / (2.0 * u.hbar * k.L)
    phase = np.exp(1j * gamma * grid.x**2)
    probs = np.empty(count)
    for j in range(count):
        chi = eigenfunction(conf, lo + j, k.L, grid) * phase
        probs[j] = abs(np.sum(np.conj(chi) * psi) * grid.dx) ** 2
    return probs, 1.0 - probs.sum()


def _scaled_reference(conf, traj, n, t, X):
    """Driven state in wall-fixed coordinates chi(X) = sqrt(L) psi(L X)."""
    u = conf.units
    k = traj.kinematics(t)
    chi = np.sqrt(2.0) * np.sin(np.pi * n * X).astype(np.complex128)
    chi *= np.exp(1j * u.mass * k.Ldot * k.L * X**2 / (2.0 * u.hbar))
    chi *= np.exp(-1j * dynamical_phase(conf, traj, n, t))
    return chi


def _kinetic_expectation(psi, dx, hbar, mass):
    d2 = (psi[2:] - 2.0 * psi[1:-1] + psi[:-2]) / dx**2
    return float(np.real(-hbar**2 * np.sum(np.conj(psi[1:-1]) * d2) * dx)) / (2.0 * mass)


def propagate(conf: Confinement, traj, psi0: np.ndarray, t0: float, t1: float,
              pcfg: PropagatorConfig, track_n: int | None = None) -> PropagationResult:
    """Integrate from t0 to t1 with midpoint-sampled potentials.

    When track_n is given, the result carries the fidelity against the
    closed-form driven state of that level at t1 and the co-moving
    populations around it.
    """
    u = conf.units
    grid = pcfg.grid
    x = grid.x
    if t1 <= t0:
        raise ValueError("need t1 > t0")
    norm0 = grid.norm(psi0)
    if abs(norm0 - 1.0) > 1e-8:
        raise ValueError(f"psi0 not normalized: |psi0| = {norm0}")
    nsteps = max(1, int(np.ceil((t1 - t0) / pcfg.dt)))
    dt = (t1 - t0) / nsteps
    tmid = t0 + (np.arange(nsteps) + 0.5) * dt
    km = traj.kinematics(tmid)

    if pcfg.frame == "scaled":
        if conf.kind is not Kind.HARD:
            raise ValueError("scaled frame applies to the hard wall only")
        if abs(x[0]) > 1e-12 or abs(x[-1] - 1.0) > 1e-12:
            raise ValueError("scaled frame needs a grid on [0, 1]")
        kin_coef = u.hbar**2 / (2.0 * u.mass * np.asarray(km.L) ** 2)
        drift = np.asarray(km.Ldot) / np.asarray(km.L)
        pot = -0.5 * u.mass * np.asarray(km.Lddot) * np.asarray(km.L)
        e_scale = float(np.max(np.abs(pot[0] * x**2))) + abs(
            _kinetic_expectation(psi0, grid.dx, u.hbar, u.mass)) / km.L[0] ** 2
        psi = kernels.cn_sweep_scaled(psi0.astype(np.complex128), x, dt,
                                      u.hbar, u.mass, kin_coef, drift, pot)
    else:
        if conf.kind is Kind.SOFT:
            qcoef = 0.5 * u.mass * (u.hbar**2 / (u.mass**2 * np.asarray(km.L) ** 4)
                                    - np.asarray(km.Lddot) / np.asarray(km.L))
            wall = np.full(nsteps, np.inf)
        else:
            qcoef = -0.5 * u.mass * np.asarray(km.Lddot) / np.asarray(km.L)
            wall = np.asarray(km.L, dtype=float).copy()
            if abs(x[0]) > 1e-12:
                raise ValueError("hard-wall grid must start at x = 0")
            if np.max(wall) > x[-1] + 1e-12:
                raise ValueError(
                    f"grid ends at {x[-1]} but the wall reaches {np.max(wall)}")
        e_scale = float(np.max(np.abs(qcoef[0] * x**2))) + abs(
            _kinetic_expectation(psi0, grid.dx, u.hbar, u.mass))
        psi = kernels.cn_sweep(psi0.astype(np.complex128), x, dt,
                               u.hbar, u.mass, qcoef, wall, pcfg.wall_height)

    exceeded = dt * e_scale / u.hbar > 0.5
    if exceeded:
        warnings.warn(
            f"dt * E/hbar = {dt * e_scale / u.hbar:.3g} > 0.5; phases are "
            "under-resolved at this step size", stacklevel=2)
    norm1 = grid.norm(psi)
    if not np.isfinite(norm1):
        raise NumericsError("propagation produced non-finite amplitudes")
    drift_norm = abs(norm1 - norm0)

    fid = np.nan
    probs = np.empty(0)
    remainder = np.nan
    if track_n is not None:
        if pcfg.frame == "scaled":
            ref = _scaled_reference(conf, traj, track_n, t1, x)
            ref /= grid.norm(ref)
            fid = abs(np.sum(np.conj(psi / norm1) * ref) * grid.dx) ** 2
            k1 = traj.kinematics(t1)
            gamma = u.mass * k1.Ldot * k1.L / (2.0 * u.hbar)
            count = 2 * track_n + 10
            lo = max(conf.n_min, track_n - count // 2)
            probs = np.empty(count)
            ph = np.exp(1j * gamma * x**2)
            for j in range(count):
                chi = np.sqrt(2.0) * np.sin(np.pi * (lo + j) * x) * ph
                probs[j] = abs(np.sum(np.conj(chi) * psi) * grid.dx) ** 2 / norm1**2
            remainder = 1.0 - probs.sum()
        else:
            ref = ff_wavefunction(conf, traj, track_n, t1, grid)
            fid = abs(np.sum(np.conj(psi / norm1) * ref.psi) * grid.dx) ** 2
            probs, remainder = populations(conf, psi / norm1,
                                           traj.kinematics(t1), grid, track_n)
    return PropagationResult(
        psi_final=psi, fidelity=float(fid), populations=probs,
        population_remainder=float(remainder), norm_drift=float(drift_norm),
        energy_scale_exceeded=bool(exceeded), steps=nsteps)
