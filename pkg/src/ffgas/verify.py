"""Acceptance suite: every exit criterion as a deterministic check.

Each check returns a CheckResult with the measured numbers it gated on;
`run_all` executes them in order. The CLI `verify` command serializes the
results and exits nonzero when any check fails. No randomness: sweeps use
a fixed-seed generator.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .fastforward import ff_wavefunction
from .observables import (expectation_force, force_variational_check,
                          level_energy_ff, level_force)
from .spectra import Grid, hard_wall, soft_half_width, soft_harmonic
from .statmech import (build_ensemble, effective_temperature, eos_report,
                       fugacity_highT, mean_force, mu_lowT, occupations_at,
                       solve_mu_exact)
from .tdse import PropagatorConfig, propagate
from .trajectory import KinematicSample, Trajectory

_SEED = 20240811


@dataclass
class CheckResult:
    cid: str
    name: str
    passed: bool
    measured: dict = field(default_factory=dict)
    detail: str = ""

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.cid}: {self.name}"


def _random_kinematics(rng, count):
    L = rng.uniform(0.5, 3.0, count)
    Ldot = rng.uniform(-2.0, 2.0, count)
    Lddot = rng.uniform(-3.0, 3.0, count)
    return [KinematicSample(t=0.0, L=a, Ldot=b, Lddot=c)
            for a, b, c in zip(L, Ldot, Lddot)]


def check_level_identity() -> CheckResult:
    """c1: F_n L - 2 E_n equals the per-level wall-kinetics combination
    to 1e-12 relative, soft model, n <= 1e4, 100 random kinematics."""
    conf = soft_harmonic(L0=1.0)
    u = conf.units
    n = np.arange(0, 10_001)
    rng = np.random.default_rng(_SEED)
    worst = 0.0
    for k in _random_kinematics(rng, 100):
        lhs = level_force(conf, n, k) * k.L - 2.0 * level_energy_ff(conf, n, k)
        rhs = (2 * n + 1) * (0.75 * u.mass * k.L * k.Lddot
                             - 0.5 * u.mass * k.Ldot**2)
        scale = np.maximum(np.abs(level_force(conf, n, k) * k.L),
                           np.maximum(np.abs(rhs), 1.0))
        worst = max(worst, float(np.max(np.abs(lhs - rhs) / scale)))
    return CheckResult(
        "c1", "per-level force-energy identity (soft, n<=1e4)",
        worst <= 1e-12, {"worst_rel": worst, "tol": 1e-12})


def check_poisson_invariance() -> CheckResult:
    """c2: adiabatic force times L^3 is independent of L to 1e-12, both models."""
    worst = 0.0
    Ls = np.geomspace(0.5, 4.0, 25)
    for conf, ns in ((soft_harmonic(L0=1.0), np.arange(0, 51)),
                     (hard_wall(), np.arange(1, 51))):
        u = conf.units
        if conf.kind.value == "soft":
            const = u.hbar**2 * (2 * ns + 1) / u.mass
        else:
            const = u.hbar**2 * np.pi**2 * ns**2 / u.mass
        for L in Ls:
            k = KinematicSample.static(L)
            val = level_force(conf, ns, k) * L**3
            worst = max(worst, float(np.max(np.abs(val - const) / const)))
    return CheckResult(
        "c2", "adiabatic force invariant F_ad L^3 over L in [0.5, 4]",
        worst <= 1e-12, {"worst_rel": worst, "tol": 1e-12})


def check_zero_T_sums() -> CheckResult:
    """c3: filled-sea sums: soft closed form exact for even N <= 200; hard
    leading-order deviation equal to 3/N within 10% at N in {20, 40, 80}."""
    rng = np.random.default_rng(_SEED + 1)
    soft = soft_harmonic(L0=1.0)
    u = soft.units
    worst_soft = 0.0
    for N in range(2, 201, 2):
        ens = build_ensemble(soft, N, 0.0, 1.0)
        k = _random_kinematics(rng, 1)[0]
        F, _ = mean_force(soft, ens, k)
        adiabatic = u.hbar**2 * N**2 / (2 * u.mass * k.L**3)
        closed = adiabatic + u.mass * N**2 * k.Lddot / 8.0
        # the two parts can cancel; gauge the identity against their scale
        worst_soft = max(worst_soft,
                         abs(F - closed) / max(abs(closed), adiabatic))
    hardc = hard_wall()
    ratios = {}
    ok_hard = True
    for N in (20, 40, 80):
        ens = build_ensemble(hardc, N, 0.0, 1.0)
        k = KinematicSample.static(1.0)
        F, _ = mean_force(hardc, ens, k)
        asym = np.pi**2 * u.hbar**2 * N**3 / (12.0 * u.mass)
        dev = F / asym - 1.0
        ratios[N] = dev / (3.0 / N)
        ok_hard &= abs(ratios[N] - 1.0) <= 0.10
    passed = bool(worst_soft <= 1e-12 and ok_hard)
    return CheckResult(
        "c3", "zero-temperature filled-sea sums (soft exact, hard 3/N trend)",
        passed, {"worst_soft_rel": float(worst_soft),
                 **{f"hard_dev_ratio_N{N}": r for N, r in ratios.items()}})


def check_variational() -> CheckResult:
    """c4: |F_n + dE_n/dL|/|F_n| < 1e-8, n <= 50, both models, 20 kinematics."""
    rng = np.random.default_rng(_SEED + 2)
    worst = 0.0
    ks = _random_kinematics(rng, 20)
    for conf in (soft_harmonic(L0=1.0), hard_wall()):
        for n in range(conf.n_min, 51):
            for k in ks:
                worst = max(worst, force_variational_check(conf, n, k))
    return CheckResult(
        "c4", "variational consistency F = -dE/dL (n<=50, both models)",
        worst < 1e-8, {"worst_rel": worst, "tol": 1e-8})


def check_quadrature_oracle() -> CheckResult:
    """c5: stencil expectation of the force operator on the driven state
    matches the closed form within 1e-6 relative at 4096 points, n <= 10."""
    traj = Trajectory(L0=1.0, v_bar=1.0, T_FF=1.0)
    t = 0.35
    k = traj.kinematics(t)
    worst = 0.0
    soft = soft_harmonic(L0=1.0)
    g = Grid.symmetric(soft_half_width(k.L, 10), 4096)
    for n in range(0, 11):
        psi = ff_wavefunction(soft, traj, n, t, g)
        est = expectation_force(soft, psi, k)
        closed = level_force(soft, n, k)
        worst = max(worst, abs(est - closed) / abs(closed))
    hardc = hard_wall()
    gh = Grid.box(k.L, 4096)
    for n in range(1, 11):
        psi = ff_wavefunction(hardc, traj, n, t, gh)
        est = expectation_force(hardc, psi, k)
        closed = level_force(hardc, n, k)
        worst = max(worst, abs(est - closed) / abs(closed))
    return CheckResult(
        "c5", "force-operator quadrature vs closed form (n<=10, mid-sweep)",
        worst <= 1e-6, {"worst_rel": worst, "tol": 1e-6})


def check_tdse_oracle(dt=1e-4, points=2048) -> CheckResult:
    """c6: propagation of levels 0 and 3 through the reference sweep keeps
    fidelity >= 0.9999 and level population >= 0.999, the fidelity deficit
    shrinks at least 3.5x per dt halving, and the run stays under 2 min."""
    started = time.perf_counter()
    conf = soft_harmonic(L0=1.0)
    traj = Trajectory(L0=1.0, v_bar=1.0, T_FF=1.0)
    g = Grid.symmetric(soft_half_width(traj.L_final, 3), points)
    measured = {}
    ok = True
    for n in (0, 3):
        psi = ff_wavefunction(conf, traj, n, 0.0, g).psi
        min_pop = 1.0
        t0 = 0.0
        for seg in range(1, 9):
            t1 = seg * traj.T_FF / 8.0
            res = propagate(conf, traj, psi / g.norm(psi), t0, t1,
                            PropagatorConfig(dt=dt, grid=g), track_n=n)
            psi = res.psi_final
            lo = max(conf.n_min, n - (2 * n + 10) // 2)
            min_pop = min(min_pop, res.populations[n - lo])
            t0 = t1
        measured[f"fidelity_n{n}"] = res.fidelity
        measured[f"min_population_n{n}"] = min_pop
        ok &= res.fidelity >= 0.9999 and min_pop >= 0.999
    deficits = []
    for dtc in (8e-3, 4e-3, 2e-3):
        psi0 = ff_wavefunction(conf, traj, 3, 0.0, g).psi
        res = propagate(conf, traj, psi0, 0.0, traj.T_FF,
                        PropagatorConfig(dt=dtc, grid=g), track_n=3)
        deficits.append(1.0 - res.fidelity)
    r1 = deficits[0] / deficits[1]
    r2 = deficits[1] / deficits[2]
    measured["deficit_ratio_8to4ms"] = r1
    measured["deficit_ratio_4to2ms"] = r2
    ok &= r1 >= 3.5 and r2 >= 3.5
    runtime = time.perf_counter() - started
    measured["runtime_s"] = runtime
    ok &= runtime <= 120.0
    return CheckResult(
        "c6", "propagator oracle: fidelity, populations, dt scaling, runtime",
        bool(ok), measured)


def check_chemical_potential() -> CheckResult:
    """c7: bisection chemical potential against the regime expansions."""
    measured = {}
    soft = soft_harmonic(L0=1.0)
    u = soft.units
    # degenerate soft: T0/T_F = 0.02 at N = 100
    N = 100
    TF = N / 2.0 * u.hbar**2 / (u.mass * 1.0**2) / u.kB
    mu = solve_mu_exact(soft, N, 0.02 * TF, 1.0)
    target = N / 2.0 * u.hbar**2 / u.mass
    measured["soft_mu_rel_dev"] = abs(mu - target) / target
    ok = measured["soft_mu_rel_dev"] <= 0.005
    # degenerate hard: T0/T_F = 0.05 at N = 20000; agreement within the
    # size of the quadratic-in-T correction term itself
    hardc = hard_wall()
    N = 20_000
    lead = np.pi**2 * u.hbar**2 / (8.0 * u.mass) * N**2
    T0 = 0.05 * lead / u.kB
    mu = solve_mu_exact(hardc, N, T0, 1.0)
    mu2 = mu_lowT(hardc, N, T0, 1.0)
    corr = mu2 - lead
    measured["hard_mu_gap_over_corr"] = abs(mu - mu2) / corr
    ok &= abs(mu - mu2) <= corr
    # quasi-classical fugacities at z < 0.05: match the two-term expansion
    # within twice the next-order term of the series inversion
    N, T0 = 2, 100.0
    a = u.hbar**2 * N / (2.0 * u.mass * u.kB * T0)
    z = np.exp(solve_mu_exact(soft, N, T0, 1.0) / (u.kB * T0))
    z2 = fugacity_highT(soft, N, T0, 1.0)
    measured["soft_fugacity_gap"] = abs(z - z2)
    measured["soft_fugacity_bound"] = a**3 / 3.0
    ok &= abs(z - z2) <= a**3 / 3.0
    N = 256
    b = 0.04
    kT = 2.0 * np.pi * u.hbar**2 / (u.mass * (2.0 * b / N) ** 2)
    z = np.exp(solve_mu_exact(hardc, N, kT / u.kB, 1.0) / kT)
    z2 = fugacity_highT(hardc, N, kT / u.kB, 1.0)
    measured["hard_fugacity_gap"] = abs(z - z2)
    measured["hard_fugacity_bound"] = 0.85 * b**3
    ok &= abs(z - z2) <= 0.85 * b**3
    return CheckResult(
        "c7", "chemical potential: bisection vs regime expansions",
        bool(ok), measured)


def _fit_exponent(xs, ys):
    return float(np.polyfit(np.log(xs), np.log(np.abs(ys)), 1)[0])


def check_state_equation_residuals_T0() -> CheckResult:
    """c8a: at T0 = 0 the soft degenerate-regime report closes exactly."""
    conf = soft_harmonic(L0=1.0)
    traj = Trajectory(L0=1.0, v_bar=1.0, T_FF=1.0)
    ens = build_ensemble(conf, 100, 0.0, 1.0)
    recs = eos_report(conf, ens, traj, [0.0, 0.2, 0.35, 0.5, 0.8], "lowT")
    worst = 0.0
    for r in recs:
        worst = max(worst,
                    abs(r.residual_poisson) / max(abs(r.poisson_lhs), 1.0),
                    abs(r.residual_bernoulli) / max(abs(r.bernoulli_lhs),
                                                    abs(r.bernoulli_rhs), 1.0))
    return CheckResult(
        "c8a", "state-equation residuals vanish at T0 = 0 (soft)",
        worst < 1e-10, {"worst_rel": worst, "tol": 1e-10})


def check_state_equation_lowT_order() -> CheckResult:
    """c8b: degenerate-regime residual decay order, hard model.

    Expected exponent 4 (first neglected Sommerfeld order). The exact sums
    instead leave a quadratic-in-T residual because the closed form keeps
    24/pi^2 as the quadratic bracket coefficient while the exact coefficient
    is 16/pi^2; the fitted exponent lands near 2 and the measured bracket
    gap near -8/pi^2. The check is kept at its nominal expectation and
    therefore fails; the measured numbers document the discrepancy.
    """
    conf = hard_wall()
    u = conf.units
    N = 20_000
    lead = np.pi**2 * u.hbar**2 / (8.0 * u.mass) * N**2  # degeneracy energy
    taus = np.array([0.03, 0.045, 0.0675])
    traj = Trajectory(L0=1.0, v_bar=1.0, T_FF=1.0)

    def residual(tau):
        ens = build_ensemble(conf, N, tau * lead / u.kB, 1.0)
        rec = eos_report(conf, ens, traj, [0.0], "lowT")[0]
        return rec.residual_poisson

    base = residual(0.003)
    res = np.array([residual(t) for t in taus]) - base
    slope = _fit_exponent(taus, res)
    # measured quadratic coefficient of the residual, in units of the
    # leading adiabatic term: exact-minus-kept bracket coefficient
    x2 = (u.mass * u.kB * (taus[0] * lead / u.kB) / u.hbar**2) ** 2 / N**4
    coeff = res[0] / (x2 * np.pi**2 * u.hbar**2 * N**3 / (12 * u.mass))
    expected = 4.0
    passed = abs(slope - expected) <= 0.5
    return CheckResult(
        "c8b", "degenerate-regime residual decay order (hard)",
        bool(passed),
        {"fitted_exponent": slope, "expected": expected, "tol": 0.5,
         "bracket_coefficient_gap": float(coeff),
         "minus_8_over_pi2": -8.0 / np.pi**2},
        detail="kept quadratic bracket coefficient 24/pi^2 disagrees with "
               "the exact-sum value 16/pi^2, leaving a quadratic residual")


def check_state_equation_highT_order() -> CheckResult:
    """c8c: quasi-classical residual shrinks with the next fugacity power."""
    conf = soft_harmonic(L0=1.0)
    u = conf.units
    traj = Trajectory(L0=1.0, v_bar=1.0, T_FF=1.0)
    N = 2
    rels, avals = [], []
    for T0 in (50.0, 100.0, 200.0):
        ens = build_ensemble(conf, N, T0, 1.0)
        rec = eos_report(conf, ens, traj, [0.35], "highT")[0]
        rels.append(abs(rec.residual_poisson) / abs(rec.poisson_rhs))
        avals.append(u.hbar**2 * N / (2.0 * u.mass * u.kB * T0))
    slope = _fit_exponent(np.array(avals), np.array(rels))
    passed = abs(slope - 2.0) <= 0.5
    return CheckResult(
        "c8c", "quasi-classical residual decay order (soft)",
        bool(passed), {"fitted_exponent": slope, "expected": 2.0, "tol": 0.5})


def check_effective_temperature() -> CheckResult:
    """c9: T_eff L^2 conserved and frozen occupations re-derivable, 1e-12."""
    traj = Trajectory(L0=1.0, v_bar=1.0, T_FF=1.0)
    ts = np.linspace(0.0, 1.2, 25)
    worst_T = 0.0
    for t in ts:
        L = traj.size(float(t))
        prod = effective_temperature(traj, 0.7, float(t)) * L**2
        worst_T = max(worst_T, abs(prod - 0.7 * traj.L0**2) / (0.7 * traj.L0**2))
    worst_f = 0.0
    for conf in (soft_harmonic(L0=1.0), hard_wall()):
        ens = build_ensemble(conf, 10, 0.5, 1.0)
        for t in (0.2, 0.5, 0.9):
            L = traj.size(t)
            T_eff = effective_temperature(traj, 0.5, t)
            f = occupations_at(conf, ens, L, T_eff)
            worst_f = max(worst_f, float(np.max(np.abs(f - ens.occupations))))
    passed = worst_T <= 1e-12 and worst_f <= 1e-12
    return CheckResult(
        "c9", "effective temperature invariant and frozen occupations",
        bool(passed), {"worst_TL2_rel": worst_T, "worst_occupation_dev": worst_f})


_CHECKS = (
    ("c1", check_level_identity),
    ("c2", check_poisson_invariance),
    ("c3", check_zero_T_sums),
    ("c4", check_variational),
    ("c5", check_quadrature_oracle),
    ("c6", check_tdse_oracle),
    ("c7", check_chemical_potential),
    ("c8a", check_state_equation_residuals_T0),
    ("c8b", check_state_equation_lowT_order),
    ("c8c", check_state_equation_highT_order),
    ("c9", check_effective_temperature),
)


def run_all(tdse_dt=1e-4, tdse_points=2048, only=None) -> list[CheckResult]:
    results = []
    for cid, fn in _CHECKS:
        if only and cid not in only:
            continue
        if cid == "c6":
            results.append(fn(dt=tdse_dt, points=tdse_points))
        else:
            results.append(fn())
    return results
