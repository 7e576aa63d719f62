"""Fermi-Dirac ensemble frozen at t = 0 and its sweep thermodynamics.

Occupations are set once from the initial spectrum and never change (the
drive preserves populations); the temperature and chemical potential that
re-express them at later times scale as 1/L^2. Ensemble means are exact
truncated sums over levels; the closed-form equation-of-state sides come
with degenerate (lowT) and quasi-classical (highT) brackets.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .errors import NumericsError, RegimeWarning
from .observables import level_energy_ff, level_force
from .spectra import Confinement, Kind, energy
from .trajectory import KinematicSample

SPIN_DEGENERACY = 2

#: occupation tail dropped at the level cutoff
_EPS_OCC = 1e-15
_MU_ITER_MAX = 200
_MU_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Particle number, initial temperature, frozen occupations."""

    N: int
    T0: float
    L0: float
    mu: float
    levels: np.ndarray       # quantum numbers, n_min .. n_max
    occupations: np.ndarray  # f_n at (T0, L0), frozen
    n_max: int

    def mu_at(self, L) -> float:
        """Chemical potential re-expressed at size L (scales as 1/L^2)."""
        return self.mu * (self.L0 / L) ** 2


def _validate_gas(N, T0):
    if N < 2 or N % 2 != 0:
        raise ValueError(f"N must be even and >= 2, got {N}")
    if T0 < 0:
        raise ValueError(f"T0 must be >= 0, got {T0}")


def _occupations(conf, E, mu, kT):
    return expit(-(E - mu) / kT)


def _zero_T_mu(conf, N, L0):
    top = conf.n_min + N // 2 - 1
    return 0.5 * (energy(conf, top, L0) + energy(conf, top + 1, L0))


def _level_count(conf, N, T0, L0, mu_hint):
    """Levels to keep: occupation tail below _EPS_OCC, at least 2N levels."""
    u = conf.units
    kT = u.kB * T0
    target = max(mu_hint, 0.0) + kT * np.log(1.0 / _EPS_OCC - 1.0)
    if conf.kind is Kind.SOFT:
        from .spectra import omega_of_L
        cut = int(np.ceil(target / (u.hbar * omega_of_L(conf, L0))))
    else:
        cut = int(np.ceil(L0 * np.sqrt(2.0 * u.mass * max(target, 0.0))
                          / (np.pi * u.hbar)))
    return max(cut, 2 * N, N // 2 + 10)


def solve_mu_exact(conf: Confinement, N, T0, L0) -> float:
    """Bisection root of 2 sum_n f_n(mu) = N on the discrete spectrum.

    For T0 = 0 returns the midpoint between the top filled level and the
    next one (the T0 -> 0 limit of the bisection).
    """
    _validate_gas(N, T0)
    if T0 == 0.0:
        return _zero_T_mu(conf, N, L0)
    u = conf.units
    kT = u.kB * T0
    hint = max(_zero_T_mu(conf, N, L0), 0.0)
    count = _level_count(conf, N, T0, L0, hint)
    for _ in range(6):
        n = np.arange(conf.n_min, conf.n_min + count)
        E = energy(conf, n, L0)
        lo = float(E[0]) - kT * np.log(1.0 / _EPS_OCC - 1.0)
        hi = float(E[-1])
        filled = E[: N // 2]
        empty = E[N // 2:]

        def excess(mu):
            # deficits of the filled sea and occupations of the empty levels
            # separately, so exponentially small tails survive rounding
            holes = expit(-(mu - filled) / kT).sum()
            particles = expit(-(empty - mu) / kT).sum()
            return SPIN_DEGENERACY * (particles - holes)

        flo, fhi = excess(lo), excess(hi)
        if not (flo < 0 < fhi):
            raise NumericsError(
                f"no bracket for the chemical potential: f({lo})={flo}, "
                f"f({hi})={fhi}")
        for _ in range(_MU_ITER_MAX):
            mid = 0.5 * (lo + hi)
            if excess(mid) < 0:
                lo = mid
            else:
                hi = mid
            if hi - lo <= _MU_RTOL * max(1.0, abs(mid)):
                break
        else:
            raise NumericsError(
                f"chemical potential not converged after {_MU_ITER_MAX} "
                f"iterations; bracket width {hi - lo:.3e}, "
                f"residual {excess(0.5 * (lo + hi)):.3e}")
        mu = 0.5 * (lo + hi)
        # cutoff must leave the last level essentially empty
        if _occupations(conf, float(E[-1]), mu, kT) < _EPS_OCC:
            return mu
        count *= 2
    raise NumericsError("level cutoff kept growing; occupations do not decay")


def build_ensemble(conf: Confinement, N, T0, L0) -> Ensemble:
    _validate_gas(N, T0)
    if T0 == 0.0:
        mu = _zero_T_mu(conf, N, L0)
        levels = np.arange(conf.n_min, conf.n_min + N // 2)
        f = np.ones(levels.size)
    else:
        mu = solve_mu_exact(conf, N, T0, L0)
        count = _level_count(conf, N, T0, L0, mu)
        levels = np.arange(conf.n_min, conf.n_min + count)
        kT = conf.units.kB * T0
        f = _occupations(conf, energy(conf, levels, L0), mu, kT)
    return Ensemble(N=N, T0=T0, L0=L0, mu=mu, levels=levels,
                    occupations=f, n_max=int(levels[-1]))


def mu_lowT(conf: Confinement, N, T0, L) -> float:
    """Degenerate-regime closed form for the chemical potential."""
    u = conf.units
    if conf.kind is Kind.SOFT:
        # temperature-independent at this order
        return N / 2.0 * u.hbar**2 / (u.mass * L**2)
    kT = u.kB * T0
    lead = np.pi**2 * u.hbar**2 / (8.0 * u.mass) * (N / L) ** 2
    corr = (16.0 / (3.0 * np.pi**2)) * (u.mass * kT / u.hbar**2) ** 2 * (L / N) ** 4
    return lead * (1.0 + corr)


def fugacity_highT(conf: Confinement, N, T0, L) -> float:
    """Quasi-classical two-term fugacity e^{beta mu}."""
    u = conf.units
    kT = u.kB * T0
    if kT <= 0:
        raise ValueError("fugacity expansion needs T0 > 0")
    if conf.kind is Kind.SOFT:
        a = u.hbar**2 * N / (2.0 * u.mass * L**2 * kT)
        return a * (1.0 + 0.5 * a)
    b = (N / L) * np.sqrt(np.pi * u.hbar**2 / (2.0 * u.mass * kT))
    return b * (1.0 + b / np.sqrt(2.0))


def _tail_bound(conf, ens, k, per_level, kT):
    """Geometric bound on the dropped occupation tail of a level sum."""
    if ens.T0 == 0.0 or ens.occupations[-1] == 0.0:
        return 0.0
    m = ens.levels[-1]
    E_last = energy(conf, m, ens.L0)
    E_next = energy(conf, m + 1, ens.L0)
    growth = np.exp(2.0 / m)  # |per_level| grows at most ~quadratically
    r = np.exp(-(E_next - E_last) / kT) * growth
    if r >= 1.0:
        return np.inf
    f_last = ens.occupations[-1]
    return SPIN_DEGENERACY * f_last * abs(per_level) * r / (1.0 - r)


def mean_force(conf: Confinement, ens: Ensemble, k: KinematicSample):
    """(2 sum_n f_n F_n, tail bound)."""
    F = level_force(conf, ens.levels, k)
    val = SPIN_DEGENERACY * float(np.dot(ens.occupations, F))
    kT = conf.units.kB * ens.T0 if ens.T0 > 0 else 1.0
    return val, _tail_bound(conf, ens, k, F[-1], kT)


def mean_energy(conf: Confinement, ens: Ensemble, k: KinematicSample):
    """(2 sum_n f_n E_n^drive, tail bound)."""
    E = level_energy_ff(conf, ens.levels, k)
    val = SPIN_DEGENERACY * float(np.dot(ens.occupations, E))
    kT = conf.units.kB * ens.T0 if ens.T0 > 0 else 1.0
    return val, _tail_bound(conf, ens, k, E[-1], kT)


def effective_temperature(traj, T0, t) -> float:
    """T(t) = T0 L0^2 / L(t)^2 (population-preserving rescaling)."""
    L = traj.size(t) if np.ndim(t) == 0 else traj.kinematics(t).L
    return T0 * (traj.L0 / L) ** 2


def occupations_at(conf: Confinement, ens: Ensemble, L, T_eff) -> np.ndarray:
    """Occupations re-derived from the scaled spectrum, temperature and
    chemical potential; equals the frozen occupations identically."""
    if T_eff == 0.0:
        return ens.occupations.copy()
    E = energy(conf, ens.levels, L)
    kT = conf.units.kB * T_eff
    return _occupations(conf, E, ens.mu_at(L), kT)


def degeneracy_temperature(conf: Confinement, N, L) -> float:
    """Crossover scale between degenerate and quasi-classical statistics."""
    u = conf.units
    if conf.kind is Kind.SOFT:
        EF = N / 2.0 * u.hbar**2 / (u.mass * L**2)
    else:
        EF = np.pi**2 * u.hbar**2 / (8.0 * u.mass) * (N / L) ** 2
    return EF / u.kB


@dataclass(frozen=True)
class EosRecord:
    """One time sample of the nonequilibrium equation-of-state report."""

    t: float
    L: float
    Ldot: float
    Lddot: float
    T_eff: float
    F_bar: float
    U_bar: float
    poisson_lhs: float
    poisson_rhs: float
    bernoulli_lhs: float
    bernoulli_rhs: float
    residual_poisson: float
    residual_bernoulli: float
    regime: str
    notes: tuple = ()

    COLUMNS = ("t", "L", "Ldot", "Lddot", "T_eff", "F_bar", "U_bar",
               "poisson_lhs", "poisson_rhs", "bernoulli_lhs", "bernoulli_rhs",
               "residual_poisson", "residual_bernoulli")


def _closed_form_sides(conf, regime, N, kT, k):
    """(poisson_rhs, bernoulli_rhs) closed forms with T, L read mid-sweep."""
    u = conf.units
    hb2, m = u.hbar**2, u.mass
    L, Ld, Ldd = k.L, k.Ldot, k.Lddot
    if regime == "lowT":
        if conf.kind is Kind.SOFT:
            B = 1.0 + (4.0 * np.pi**2 / 3.0) * (m * kT / hb2) ** 2 * L**4 / N**2
            poisson = hb2 / (2.0 * m) * N**2 * B + m / 8.0 * N**2 * L**3 * Ldd * B
            bern = N**2 * (3.0 * m / 8.0 * L * Ldd - m / 4.0 * Ld**2) * B
        else:
            x2 = (m * kT / hb2) ** 2 * (L / N) ** 4
            B1 = 1.0 + 24.0 / np.pi**2 * x2
            B2 = 1.0 + 6.0 / (np.pi**2 * N**2) * (1.0 + 16.0 / (3.0 * np.pi**2) * x2)
            poisson = np.pi**2 * hb2 / (12.0 * m) * N**3 * B1 \
                + N / 6.0 * m * L**3 * Ldd * B2
            bern = N * (0.5 * m * L * Ldd - m / 3.0 * Ld**2) * B2
    else:
        if kT <= 0:
            raise ValueError("highT closed forms need T > 0")
        if conf.kind is Kind.SOFT:
            C = 1.0 + N / (8.0 * L**2) * hb2 / (m * kT)
            poisson = 2.0 * L**2 * N * kT * C \
                + 0.5 * m**2 / hb2 * L**5 * Ldd * N * kT * C
            bern = (1.5 * m**2 / hb2 * L**3 * Ldd
                    - 2.0 * m**2 / hb2 * L**2 * Ld**2) * N * kT * C
        else:
            C1 = 1.0 + N / (4.0 * L) * np.sqrt(np.pi * hb2 / (m * kT))
            C2 = 1.0 + 3.0 * np.pi * hb2 / (2.0 * m * L**2 * kT)
            poisson = L**2 * N * kT * C1 + N / 6.0 * m * L**3 * Ldd * C2
            bern = N * (0.5 * m * L * Ldd - m / 3.0 * Ld**2) * C2
    return poisson, bern


def eos_report(conf: Confinement, ens: Ensemble, traj, times,
               regime: str = "auto") -> list[EosRecord]:
    """Exact-sum sides and closed-form sides of the two state equations,
    one record per time sample."""
    if regime not in ("lowT", "highT", "auto"):
        raise ValueError(f"unknown regime {regime!r}")
    if regime == "auto":
        T_deg = degeneracy_temperature(conf, ens.N, ens.L0)
        regime = "lowT" if ens.T0 < T_deg else "highT"
    u = conf.units
    records = []
    crossings = False
    for t in times:
        k = traj.kinematics(float(t))
        T_eff = effective_temperature(traj, ens.T0, float(t))
        kT = u.kB * T_eff
        F_bar, ftail = mean_force(conf, ens, k)
        U_bar, utail = mean_energy(conf, ens, k)
        notes = []
        if ftail > 1e-12 * abs(F_bar) or utail > 1e-12 * abs(U_bar):
            notes.append(f"truncation tail {max(ftail, utail):.2e}")
        tau = T_eff / degeneracy_temperature(conf, ens.N, k.L)
        if (regime == "lowT") != (tau < 1.0):
            crossings = True
            notes.append(f"regime mismatch: T_eff/T_deg={tau:.3g}")
        poisson_rhs, bern_rhs = _closed_form_sides(conf, regime, ens.N, kT, k)
        poisson_lhs = F_bar * k.L**3
        bern_lhs = F_bar * k.L - 2.0 * U_bar
        records.append(EosRecord(
            t=float(t), L=k.L, Ldot=k.Ldot, Lddot=k.Lddot, T_eff=T_eff,
            F_bar=F_bar, U_bar=U_bar,
            poisson_lhs=poisson_lhs, poisson_rhs=poisson_rhs,
            bernoulli_lhs=bern_lhs, bernoulli_rhs=bern_rhs,
            residual_poisson=poisson_lhs - poisson_rhs,
            residual_bernoulli=bern_lhs - bern_rhs,
            regime=regime, notes=tuple(notes)))
    if crossings:
        warnings.warn(
            "effective temperature crossed the degeneracy scale during the "
            "sweep; the chosen regime bracket does not hold throughout",
            RegimeWarning, stacklevel=2)
    return records
