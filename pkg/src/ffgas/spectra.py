"""Instantaneous eigenproblem for the two confinement models.

Soft model: harmonic trap whose frequency maps to the effective size through
omega(L) = omega0 (L0/L)^2 with L0 = sqrt(hbar/(m omega0)). Hard model: box
of width L with walls at x = 0 and x = L. Quantum numbers start at n = 0
(soft) and n = 1 (hard); all eigenfunctions are real.
"""
from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import TruncationWarning, UnsupportedModelError

_TIE_RTOL = 1e-12  # omega0 <-> L0 consistency when both are supplied


@dataclass(frozen=True)
class Units:
    """Unit constants; natural units by default."""

    hbar: float = 1.0
    mass: float = 1.0
    kB: float = 1.0

    def __post_init__(self):
        for name in ("hbar", "mass", "kB"):
            if not (getattr(self, name) > 0):
                raise ValueError(f"{name} must be positive")


class Kind(str, enum.Enum):
    SOFT = "soft"
    HARD = "hard"


@dataclass(frozen=True)
class Confinement:
    kind: Kind
    omega0: float | None = None
    units: Units = field(default_factory=Units)

    def __post_init__(self):
        if self.kind is Kind.SOFT:
            if self.omega0 is None or not (self.omega0 > 0):
                raise ValueError("soft model needs omega0 > 0")
        elif self.omega0 is not None:
            raise UnsupportedModelError("hard model has no trap frequency")

    @property
    def n_min(self) -> int:
        return 0 if self.kind is Kind.SOFT else 1

    @property
    def L0(self) -> float:
        """Effective size tied to the trap frequency (soft only)."""
        if self.kind is not Kind.SOFT:
            raise UnsupportedModelError("L0 from frequency is soft-model only")
        u = self.units
        return float(np.sqrt(u.hbar / (u.mass * self.omega0)))


def soft_harmonic(omega0=None, L0=None, units=None) -> Confinement:
    """Soft confinement from either the frequency or the tied size."""
    units = units or Units()
    if omega0 is None and L0 is None:
        raise ValueError("supply omega0 or L0")
    if omega0 is None:
        omega0 = units.hbar / (units.mass * L0 * L0)
    elif L0 is not None:
        implied = units.hbar / (units.mass * L0 * L0)
        if abs(implied - omega0) > _TIE_RTOL * abs(omega0):
            raise ValueError(
                f"omega0={omega0} and L0={L0} are inconsistent "
                f"(L0 implies omega0={implied})")
    return Confinement(Kind.SOFT, float(omega0), units)


def hard_wall(units=None) -> Confinement:
    return Confinement(Kind.HARD, None, units or Units())


@dataclass(frozen=True)
class Grid:
    """Uniform coordinate grid."""

    x: np.ndarray
    dx: float

    def __post_init__(self):
        d = np.diff(self.x)
        # rounding of the coordinates themselves sets the attainable jitter
        atol = 1e-12 * max(abs(self.dx), float(np.max(np.abs(self.x))))
        if d.size and (np.max(np.abs(d - self.dx)) > atol):
            raise ValueError("grid spacing is not uniform")

    @classmethod
    def symmetric(cls, half_width, npoints) -> "Grid":
        x = np.linspace(-half_width, half_width, npoints)
        return cls(x=x, dx=x[1] - x[0])

    @classmethod
    def box(cls, L, npoints) -> "Grid":
        x = np.linspace(0.0, L, npoints)
        return cls(x=x, dx=x[1] - x[0])

    @property
    def npoints(self) -> int:
        return self.x.size

    def norm(self, psi) -> float:
        return float(np.sqrt(np.sum(np.abs(psi) ** 2) * self.dx))


def soft_half_width(L, n_max, factor=1.5):
    """Default half-width for soft-model grids.

    A pure multiple of the classical turning point underestimates the tail
    room for small n (the n=0 Gaussian needs ~6 widths of margin), so the
    half-width is floored accordingly; either choice keeps the truncated
    norm below 1e-12.
    """
    xt = np.sqrt(2.0 * n_max + 1.0)
    return L * max(factor * xt, xt + 6.0)


def omega_of_L(conf: Confinement, L) -> float:
    """Trap frequency at effective size L: omega0 (L0/L)^2."""
    if conf.kind is not Kind.SOFT:
        raise UnsupportedModelError("omega_of_L is soft-model only")
    if not np.all(np.asarray(L) > 0):
        raise ValueError("L must be positive")
    return conf.omega0 * (conf.L0 / L) ** 2


def _check_n(conf, n):
    n = np.asarray(n)
    if not np.issubdtype(n.dtype, np.integer):
        if not np.all(n == np.floor(n)):
            raise ValueError("quantum numbers must be integers")
    if np.any(n < conf.n_min):
        raise ValueError(
            f"quantum numbers start at n={conf.n_min} for the {conf.kind.value} model")
    return n


def energy(conf: Confinement, n, L):
    """Instantaneous eigenvalue; n may be an integer array."""
    n = _check_n(conf, n)
    u = conf.units
    if conf.kind is Kind.SOFT:
        E = (n + 0.5) * u.hbar * omega_of_L(conf, L)
    else:
        E = u.hbar**2 / (2.0 * u.mass) * (np.pi * n / L) ** 2
    return float(E) if np.ndim(E) == 0 else E


def eigenfunction(conf: Confinement, n, L, grid: Grid) -> np.ndarray:
    """Samples of the normalized real eigenfunction on the grid."""
    n = int(_check_n(conf, n))
    if conf.kind is Kind.SOFT:
        xt = L * np.sqrt(2.0 * n + 1.0)
        if grid.x[-1] < xt or grid.x[0] > -xt:
            warnings.warn(
                f"grid half-width {grid.x[-1]:.3g} does not contain the "
                f"classical turning point {xt:.3g} for n={n}",
                TruncationWarning, stacklevel=2)
        return kernels.hermite_psi(grid.x / L, n) / np.sqrt(L)
    phi = np.sqrt(2.0 / L) * np.sin(np.pi * n * grid.x / L)
    return np.where((grid.x >= 0.0) & (grid.x <= L), phi, 0.0)


def density_of_states(conf: Confinement, E, L):
    """Per-spin density of states at energy E and size L."""
    u = conf.units
    if conf.kind is Kind.SOFT:
        return 1.0 / (u.hbar * omega_of_L(conf, L))
    if not np.all(np.asarray(E) > 0):
        raise ValueError("hard-wall density of states needs E > 0")
    D = np.sqrt(u.mass / 2.0) * L / (u.hbar * np.pi) * np.asarray(E) ** -0.5
    return float(D) if np.ndim(D) == 0 else D
