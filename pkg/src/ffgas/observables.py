"""Per-level force and energy during the sweep.

Closed forms for the diagonal matrix elements, a variational cross-check
(force = minus the size-derivative of the energy at fixed wall kinetics),
and a grid-stencil route that evaluates the force operator

    p^2/(m L) - (Ldot / 2 L^2)(x p + p x) + quadratic-in-x term

on arbitrary states by central differences, trapezoid sums and Richardson
extrapolation.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np

from .errors import GridResolutionWarning
from .fastforward import FFWavefunction, ff_potential
from .spectra import Confinement, Grid, Kind, _check_n
from .trajectory import KinematicSample

#: relative disagreement between two Richardson extrapolations that
#: triggers a grid-resolution warning
_RICHARDSON_RTOL = 1e-5


@dataclass(frozen=True)
class LevelObservables:
    n: int
    force: float
    energy_ff: float


def _wall_coef(n):
    # hard-wall kinetic-shape factor <x^2>/(2 L^2) = 1/6 - 1/(4 pi^2 n^2)
    return 1.0 / 6.0 - 1.0 / (4.0 * np.pi**2 * n**2)


def level_force(conf: Confinement, n, k: KinematicSample):
    """Diagonal force matrix element; n may be an integer array."""
    n = _check_n(conf, n)
    u = conf.units
    if conf.kind is Kind.SOFT:
        F = u.hbar**2 * (2 * n + 1) / (u.mass * k.L**3) \
            + (2 * n + 1) / 4.0 * u.mass * k.Lddot
    else:
        F = u.hbar**2 * np.pi**2 * n**2 / (u.mass * k.L**3) \
            + _wall_coef(n) * u.mass * k.Lddot
    return float(F) if np.ndim(F) == 0 else F


def level_energy_ff(conf: Confinement, n, k: KinematicSample):
    """Diagonal energy matrix element of the driven Hamiltonian."""
    n = _check_n(conf, n)
    u = conf.units
    if conf.kind is Kind.SOFT:
        E = (2 * n + 1) * u.hbar**2 / (2.0 * u.mass * k.L**2) \
            + (n + 0.5) * 0.5 * u.mass * (k.Ldot**2 - k.Lddot * k.L)
    else:
        E = u.hbar**2 * np.pi**2 * n**2 / (2.0 * u.mass * k.L**2) \
            + _wall_coef(n) * u.mass * (k.Ldot**2 - k.L * k.Lddot)
    return float(E) if np.ndim(E) == 0 else E


def level_observables(conf, n, k) -> LevelObservables:
    return LevelObservables(n=n, force=level_force(conf, n, k),
                            energy_ff=level_energy_ff(conf, n, k))


def force_variational_check(conf, n, k: KinematicSample, h=None) -> float:
    """|F_n + dE_n/dL| / |F_n| with the size-derivative by central difference
    at fixed (Ldot, Lddot)."""
    if h is None:
        h = 1e-5 * k.L
    Ep = level_energy_ff(conf, n, replace(k, L=k.L + h))
    Em = level_energy_ff(conf, n, replace(k, L=k.L - h))
    F = level_force(conf, n, k)
    return abs(F + (Ep - Em) / (2.0 * h)) / abs(F)


# ----------------------------------------------------------------------
# grid-stencil expectation values
# ----------------------------------------------------------------------

def _resolve_state(psi, grid):
    if isinstance(psi, FFWavefunction):
        return psi.psi, psi.grid
    if grid is None:
        raise ValueError("grid required when psi is a bare array")
    return np.asarray(psi, dtype=np.complex128), grid


def _quadratic_forms(psi, x, dx, hbar):
    """(<p^2>, <xp+px>, <x^2>) by central stencils and the trapezoid rule.

    Endpoint stencils are one-sided; for wall-bounded states the endpoint
    values vanish, so the choice only matters for truncated tails.
    """
    d1 = np.gradient(psi, dx, edge_order=2)
    d2 = np.empty_like(psi)
    d2[1:-1] = (psi[2:] - 2.0 * psi[1:-1] + psi[:-2]) / dx**2
    d2[0] = d2[1]
    d2[-1] = d2[-2]
    c = np.conj(psi)
    p2 = float(np.real(np.sum(c * d2) * dx)) * (-hbar**2)
    xpx = float(np.real(np.sum(c * (-1j * hbar) * (2.0 * x * d1 + psi)) * dx))
    x2 = float(np.real(np.sum((c * psi).real * x**2) * dx))
    return p2, xpx, x2


def _force_single(conf, psi, k, x, dx):
    u = conf.units
    p2, xpx, x2 = _quadratic_forms(psi, x, dx, u.hbar)
    out = p2 / (u.mass * k.L) - k.Ldot / (2.0 * k.L**2) * xpx
    if conf.kind is Kind.SOFT:
        out += 0.5 * u.mass * (2.0 * u.hbar**2 / (u.mass**2 * k.L**5)
                               + k.Lddot / k.L**2) * x2
    else:
        out += u.mass * k.Lddot / (2.0 * k.L**2) * x2
    return out


def _energy_single(conf, psi, k, x, dx, grid):
    u = conf.units
    p2, _, _ = _quadratic_forms(psi, x, dx, u.hbar)
    V = ff_potential(conf, k, grid)
    pot = float(np.sum(np.abs(psi) ** 2 * V) * dx)
    return p2 / (2.0 * u.mass) + pot


def _richardson(evaluate, psi, grid):
    """Richardson-extrapolate `evaluate` over strides 1, 2, 4.

    Warns when the two extrapolations disagree, i.e. when the stencil
    errors are not yet in their quadratic regime on this grid.
    """
    vals = []
    for stride in (1, 2, 4):
        p = psi[::stride]
        xs = grid.x[::stride]
        dxs = xs[1] - xs[0]
        nrm = np.sqrt(np.sum(np.abs(p) ** 2) * dxs)
        vals.append(evaluate(p / nrm, xs, dxs, stride))
    f1, f2, f4 = vals
    r1 = (4.0 * f1 - f2) / 3.0
    r2 = (4.0 * f2 - f4) / 3.0
    if abs(r1 - r2) > _RICHARDSON_RTOL * max(abs(r1), 1e-30):
        warnings.warn(
            f"stencil expectation not converged: successive extrapolations "
            f"differ by {abs(r1 - r2):.3e} (value {r1:.6e})",
            GridResolutionWarning, stacklevel=3)
    return r1


def expectation_force(conf, psi, k: KinematicSample, grid: Grid = None) -> float:
    """<F> of an arbitrary state by grid stencils (oracle for level_force)."""
    psi, grid = _resolve_state(psi, grid)
    return _richardson(
        lambda p, xs, dxs, s: _force_single(conf, p, k, xs, dxs), psi, grid)


def expectation_energy(conf, psi, k: KinematicSample, grid: Grid = None) -> float:
    """<H> of an arbitrary state by grid stencils (oracle for level_energy_ff)."""
    psi, grid = _resolve_state(psi, grid)

    def ev(p, xs, dxs, stride):
        sub = Grid(x=xs, dx=dxs)
        return _energy_single(conf, p, k, xs, dxs, sub)

    return _richardson(ev, psi, grid)


def _expectation_force_scaled(conf, psi, k: KinematicSample,
                              grid: Grid = None) -> float:
    """Cross-check route: rescale coordinates by 1/L and apply the
    transformed-frame force operator. Internal; not part of the public API."""
    psi, grid = _resolve_state(psi, grid)
    u = conf.units
    L = k.L
    Xgrid = Grid(x=grid.x / L, dx=grid.dx / L)
    chi = psi * np.sqrt(L)

    def ev(p, xs, dxs, stride):
        p2, xpx, x2 = _quadratic_forms(p, xs, dxs, u.hbar)
        out = p2 / (u.mass * L**3) - k.Ldot / (2.0 * L**2) * xpx
        if conf.kind is Kind.SOFT:
            out += 0.5 * u.mass * (2.0 * u.hbar**2 / (u.mass**2 * L**3)
                                   + k.Lddot) * x2
        else:
            out += 0.5 * u.mass * k.Lddot * x2
        return out

    return _richardson(ev, chi, Xgrid)
