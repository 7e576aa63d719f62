import numpy as np
import pytest

from ffgas import (GridResolutionWarning, KinematicSample, Trajectory,
                   eigenfunction, expectation_energy, expectation_force,
                   ff_wavefunction, force_variational_check, level_energy_ff,
                   level_force, level_observables)
from ffgas.observables import _expectation_force_scaled

from conftest import box_grid, soft_grid


class TestLevelClosedForms:
    def test_soft_ground_static(self, soft):
        k = KinematicSample.static(1.0)
        assert level_force(soft, 0, k) == pytest.approx(1.0, rel=1e-15)
        assert level_energy_ff(soft, 0, k) == pytest.approx(0.5, rel=1e-15)

    def test_soft_decelerating(self, soft):
        k = KinematicSample(t=0.0, L=1.5, Ldot=0.0, Lddot=-0.2)
        assert level_force(soft, 2, k) == pytest.approx(
            5.0 / 3.375 - 0.25, rel=1e-12)

    def test_soft_energy_with_acceleration(self, soft):
        k = KinematicSample(t=0.0, L=1.0, Ldot=0.0, Lddot=0.4)
        assert level_energy_ff(soft, 1, k) == pytest.approx(1.2, rel=1e-12)

    def test_hard_accelerating(self, hard):
        k = KinematicSample(t=0.0, L=1.0, Ldot=0.0, Lddot=1.0)
        expected = np.pi**2 + (1 / 6 - 1 / (4 * np.pi**2))
        assert level_force(hard, 1, k) == pytest.approx(expected, rel=1e-12)

    def test_hard_energy_mid_sweep(self, hard):
        # 2 pi^2 + (1/6 - 1/(16 pi^2)); cross-checked by the stencil
        # expectation below in TestExpectationForce
        k = KinematicSample(t=0.0, L=1.0, Ldot=1.0, Lddot=0.0)
        expected = 2 * np.pi**2 + (1 / 6 - 1 / (16 * np.pi**2))
        assert level_energy_ff(hard, 2, k) == pytest.approx(expected, rel=1e-12)
        assert expected == pytest.approx(19.8995429, abs=5e-8)

    def test_bundle(self, soft):
        k = KinematicSample.static(2.0)
        obs = level_observables(soft, 4, k)
        assert obs.force == level_force(soft, 4, k)
        assert obs.energy_ff == level_energy_ff(soft, 4, k)


class TestPerLevelIdentities:
    @pytest.mark.parametrize("model", ["soft", "hard"])
    def test_force_energy_identity_to_large_n(self, model, soft, hard, rng):
        conf = soft if model == "soft" else hard
        u = conf.units
        n = np.arange(conf.n_min, 10_001)
        for _ in range(20):
            k = KinematicSample(t=0.0, L=rng.uniform(0.5, 3.0),
                                Ldot=rng.uniform(-2, 2),
                                Lddot=rng.uniform(-3, 3))
            lhs = level_force(conf, n, k) * k.L - 2 * level_energy_ff(conf, n, k)
            if model == "soft":
                rhs = (2 * n + 1) * (0.75 * u.mass * k.L * k.Lddot
                                     - 0.5 * u.mass * k.Ldot**2)
            else:
                c = 1 / 6 - 1 / (4 * np.pi**2 * n**2)
                rhs = c * (3 * u.mass * k.L * k.Lddot - 2 * u.mass * k.Ldot**2)
            scale = np.maximum(np.abs(level_force(conf, n, k) * k.L), 1.0)
            assert np.max(np.abs(lhs - rhs) / scale) < 1e-12

    @pytest.mark.parametrize("model", ["soft", "hard"])
    def test_adiabatic_part_poisson_invariant(self, model, soft, hard):
        conf = soft if model == "soft" else hard
        n = np.arange(conf.n_min, conf.n_min + 30)
        ref = level_force(conf, n, KinematicSample.static(1.0))
        for L in np.geomspace(0.5, 4.0, 9):
            val = level_force(conf, n, KinematicSample.static(L)) * L**3
            assert np.max(np.abs(val - ref) / ref) < 1e-12


class TestVariational:
    def test_soft_generic(self, soft):
        k = KinematicSample(t=0.0, L=1.4, Ldot=-0.6, Lddot=0.8)
        assert force_variational_check(soft, 3, k) < 1e-8

    def test_hard_generic(self, hard):
        k = KinematicSample(t=0.0, L=0.9, Ldot=1.1, Lddot=-1.7)
        assert force_variational_check(hard, 5, k) < 1e-8

    def test_static_reduces_to_adiabatic_force(self, soft):
        # with frozen wall kinetics this is the textbook F = -dE/dL
        assert force_variational_check(soft, 7, KinematicSample.static(1.3)) < 1e-9


class TestExpectationForce:
    def test_static_ground_state(self, soft):
        g = soft_grid(1.0, 0, 2048)
        psi = ff_wavefunction(
            soft, Trajectory(L0=1.0, v_bar=0.0, T_FF=1.0), 0, 0.0, g)
        est = expectation_force(soft, psi, KinematicSample.static(1.0))
        assert est == pytest.approx(1.0, abs=1e-7)

    def test_mid_sweep_matches_closed_form(self, soft, sweep):
        t = 0.4
        k = sweep.kinematics(t)
        g = soft_grid(k.L, 2, 4097)
        psi = ff_wavefunction(soft, sweep, 2, t, g)
        est = expectation_force(soft, psi, k)
        assert est == pytest.approx(level_force(soft, 2, k), rel=1e-6)

    def test_hard_energy_oracle(self, hard):
        # stencil route for the frozen example in TestLevelClosedForms
        k = KinematicSample(t=0.0, L=1.0, Ldot=1.0, Lddot=0.0)
        g = box_grid(1.0, 4097)
        phi = eigenfunction(hard, 2, 1.0, g).astype(np.complex128)
        psi = phi * np.exp(1j * k.Ldot / (2 * k.L) * g.x**2)
        psi /= g.norm(psi)
        est = expectation_energy(hard, psi, k, g)
        assert est == pytest.approx(level_energy_ff(hard, 2, k), rel=1e-8)

    def test_mixed_state_averages_and_cross_term_vanishes(self, soft):
        k = KinematicSample.static(1.0)
        g = soft_grid(1.0, 1, 4097)
        phi0 = eigenfunction(soft, 0, 1.0, g)
        phi1 = eigenfunction(soft, 1, 1.0, g)
        mix = ((phi0 + phi1) / np.sqrt(2)).astype(np.complex128)
        mix /= g.norm(mix)
        est = expectation_force(soft, mix, k, g)
        avg = 0.5 * (level_force(soft, 0, k) + level_force(soft, 1, k))
        assert est == pytest.approx(avg, rel=1e-7)
        # the off-diagonal matrix element is parity-odd between adjacent
        # levels, so only the diagonal average survives
        d2 = np.empty_like(phi1)
        dx = g.dx
        d2[1:-1] = (phi1[2:] - 2 * phi1[1:-1] + phi1[:-2]) / dx**2
        d2[0] = d2[1]
        d2[-1] = d2[-2]
        cross = np.sum(phi0 * (-d2 + 3.0 * g.x**2 * phi1)) * dx
        assert abs(cross) < 1e-8

    def test_time_reversal_symmetry(self, soft, sweep):
        t = 0.3
        k = sweep.kinematics(t)
        g = soft_grid(k.L, 1, 2049)
        psi = ff_wavefunction(soft, sweep, 1, t, g)
        fwd = expectation_force(soft, psi, k)
        k_rev = KinematicSample(t=k.t, L=k.L, Ldot=-k.Ldot, Lddot=k.Lddot)
        rev = expectation_force(
            soft, np.conj(psi.psi), k_rev, g)
        assert rev == pytest.approx(fwd, rel=1e-12)

    @pytest.mark.filterwarnings("ignore::ffgas.GridResolutionWarning")
    def test_refinement_improves_quadratically(self, soft, sweep):
        t = 0.4
        k = sweep.kinematics(t)
        closed = level_force(soft, 3, k)
        errs = []
        for pts in (513, 1025):
            g = soft_grid(k.L, 3, pts)
            psi = ff_wavefunction(soft, sweep, 3, t, g)
            errs.append(abs(expectation_force(soft, psi, k) - closed))
        assert errs[0] / errs[1] > 3.5

    def test_coarse_grid_warns(self, soft, sweep):
        t = 0.4
        k = sweep.kinematics(t)
        g = soft_grid(k.L, 9, 129)
        psi = ff_wavefunction(soft, sweep, 9, t, g)
        with pytest.warns(GridResolutionWarning):
            expectation_force(soft, psi, k)

    @pytest.mark.parametrize("model,n", [("soft", 2), ("hard", 3)])
    def test_scaled_frame_cross_check(self, model, n, soft, hard, sweep):
        conf = soft if model == "soft" else hard
        t = 0.45
        k = sweep.kinematics(t)
        g = soft_grid(k.L, n, 4097) if model == "soft" else box_grid(k.L, 4097)
        psi = ff_wavefunction(conf, sweep, n, t, g)
        direct = expectation_force(conf, psi, k)
        scaled = _expectation_force_scaled(conf, psi, k)
        closed = level_force(conf, n, k)
        assert direct == pytest.approx(closed, rel=1e-6)
        assert scaled == pytest.approx(closed, rel=1e-6)


class TestExpectationEnergy:
    @pytest.mark.parametrize("model,n", [("soft", 1), ("hard", 2)])
    def test_matches_closed_form_mid_sweep(self, model, n, soft, hard, sweep):
        conf = soft if model == "soft" else hard
        t = 0.6
        k = sweep.kinematics(t)
        g = soft_grid(k.L, n, 4097) if model == "soft" else box_grid(k.L, 4097)
        psi = ff_wavefunction(conf, sweep, n, t, g)
        est = expectation_energy(conf, psi, k)
        assert est == pytest.approx(level_energy_ff(conf, n, k), rel=1e-6)
