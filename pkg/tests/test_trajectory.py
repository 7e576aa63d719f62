import numpy as np
import pytest
from scipy.integrate import quad

from ffgas import CustomTrajectory, Trajectory


class TestVelocity:
    def test_starts_at_rest(self):
        traj = Trajectory(L0=1.0, v_bar=0.5, T_FF=1.0)
        assert traj.velocity(0.0) == 0.0

    def test_peak_is_twice_mean(self):
        traj = Trajectory(L0=1.0, v_bar=0.5, T_FF=1.0)
        assert traj.velocity(0.5) == pytest.approx(1.0, abs=1e-15)

    def test_zero_after_sweep(self):
        traj = Trajectory(L0=1.0, v_bar=0.5, T_FF=1.0)
        assert traj.velocity(2.0) == 0.0
        assert traj.velocity(1.0) == 0.0

    def test_negative_time_rejected(self):
        traj = Trajectory(L0=1.0, v_bar=0.5, T_FF=1.0)
        with pytest.raises(ValueError):
            traj.velocity(-0.1)

    def test_tiny_negative_time_clamped(self):
        traj = Trajectory(L0=1.0, v_bar=0.5, T_FF=1.0)
        assert traj.velocity(-1e-13) == 0.0


class TestKinematics:
    def test_end_of_sweep(self):
        traj = Trajectory(L0=1.0, v_bar=0.5, T_FF=2.0)
        k = traj.kinematics(2.0)
        assert k.L == pytest.approx(2.0, rel=1e-15)
        assert k.Ldot == 0.0
        assert k.Lddot == 0.0

    def test_acceleration_quarter_sweep(self):
        # Lddot = v_bar (2 pi / T_FF) sin(pi/2); cross-checked below by
        # finite differences of the velocity
        traj = Trajectory(L0=1.0, v_bar=0.5, T_FF=1.0)
        assert traj.kinematics(0.25).Lddot == pytest.approx(np.pi, rel=1e-15)
        h = 1e-6
        fd = (traj.velocity(0.25 + h) - traj.velocity(0.25 - h)) / (2 * h)
        assert fd == pytest.approx(np.pi, rel=1e-9)

    def test_static_schedule(self):
        traj = Trajectory(L0=1.0, v_bar=0.0, T_FF=1.0)
        for t in (0.0, 0.3, 5.0):
            k = traj.kinematics(t)
            assert (k.L, k.Ldot, k.Lddot) == (1.0, 0.0, 0.0)

    def test_array_input(self):
        traj = Trajectory(L0=1.0, v_bar=0.5, T_FF=1.0)
        t = np.array([0.0, 0.25, 0.5, 2.0])
        k = traj.kinematics(t)
        assert k.L.shape == (4,)
        assert k.Ldot[0] == 0.0 and k.Ldot[3] == 0.0
        assert k.L[3] == pytest.approx(1.5)

    def test_size_matches_kinematics(self):
        traj = Trajectory(L0=2.0, v_bar=-0.3, T_FF=1.5)
        for t in (0.0, 0.4, 1.1, 3.0):
            assert traj.size(t) == pytest.approx(traj.kinematics(t).L, rel=1e-15)


class TestConstruction:
    def test_rejects_nonpositive_L0(self):
        with pytest.raises(ValueError):
            Trajectory(L0=0.0, v_bar=0.5, T_FF=1.0)

    def test_rejects_nonpositive_T_FF(self):
        with pytest.raises(ValueError):
            Trajectory(L0=1.0, v_bar=0.5, T_FF=0.0)

    def test_rejects_contraction_through_zero(self):
        with pytest.raises(ValueError):
            Trajectory(L0=1.0, v_bar=-2.0, T_FF=1.0)

    def test_allows_contraction_above_zero(self):
        traj = Trajectory(L0=1.0, v_bar=-0.25, T_FF=2.0)
        assert traj.L_final == pytest.approx(0.5)


class TestProperties:
    def test_velocity_integrates_to_size(self, rng):
        for _ in range(100):
            v_bar = rng.uniform(-0.4, 2.0)
            T_FF = rng.uniform(0.2, 3.0)
            traj = Trajectory(L0=1.0, v_bar=v_bar, T_FF=T_FF)
            t = rng.uniform(0.0, 1.5 * T_FF)
            integral, _ = quad(traj.velocity, 0.0, t, limit=200,
                               points=[T_FF] if t > T_FF else None)
            assert integral == pytest.approx(traj.size(t) - traj.L0,
                                             rel=1e-10, abs=1e-12)

    def test_finite_differences_converge_quadratically(self):
        traj = Trajectory(L0=1.0, v_bar=0.7, T_FF=1.3)
        t = 0.37
        for exact, fn in ((traj.kinematics(t).Ldot, traj.size),
                          (traj.kinematics(t).Lddot, traj.velocity)):
            errs = []
            for h in (1e-3, 5e-4):
                errs.append(abs((fn(t + h) - fn(t - h)) / (2 * h) - exact))
            assert errs[0] / errs[1] >= 3.9

    def test_time_reversal_structure(self):
        fwd = Trajectory(L0=2.0, v_bar=0.5, T_FF=1.0)
        rev = Trajectory(L0=2.0, v_bar=-0.5, T_FF=1.0)
        for t in (0.1, 0.5, 0.9):
            kf, kr = fwd.kinematics(t), rev.kinematics(t)
            assert kr.L == pytest.approx(2 * fwd.L0 - kf.L, rel=1e-14)
            assert kr.Lddot == pytest.approx(-kf.Lddot, rel=1e-14)


class TestCustomTrajectory:
    @staticmethod
    def _smooth():
        # same family as the built-in, defined through callables
        w = 2 * np.pi
        return CustomTrajectory(
            L_fn=lambda t: 1.0 + 0.5 * (t - np.sin(w * t) / w),
            Ldot_fn=lambda t: 0.5 * (1 - np.cos(w * t)),
            Lddot_fn=lambda t: 0.5 * w * np.sin(w * t),
            T_FF=1.0)

    def test_valid_schedule_accepted(self):
        traj = self._smooth()
        ref = Trajectory(L0=1.0, v_bar=0.5, T_FF=1.0)
        for t in (0.0, 0.3, 0.8):
            assert traj.kinematics(t).L == pytest.approx(ref.kinematics(t).L,
                                                         rel=1e-12)

    def test_inconsistent_derivative_rejected(self):
        with pytest.raises(ValueError, match="inconsistent"):
            CustomTrajectory(L_fn=lambda t: 1.0 + t,
                             Ldot_fn=lambda t: 2.0,
                             Lddot_fn=lambda t: 0.0, T_FF=1.0)

    def test_zero_crossing_rejected(self):
        with pytest.raises(ValueError, match="zero"):
            CustomTrajectory(L_fn=lambda t: 1.0 - 2.0 * t,
                             Ldot_fn=lambda t: -2.0,
                             Lddot_fn=lambda t: 0.0, T_FF=1.0)
