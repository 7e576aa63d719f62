import numpy as np
import pytest
from scipy.linalg import eig_banded

from ffgas import (Grid, TruncationWarning, Units, UnsupportedModelError,
                   density_of_states, eigenfunction, energy, hard_wall,
                   omega_of_L, soft_half_width, soft_harmonic)


def diag_oracle(conf, L, npoints, n_top):
    """Five-point finite-difference eigenvalues, independent of energy().

    The hard wall folds the out-of-range stencil tail back with odd
    symmetry; the soft trap is truncated where the state is negligible.
    """
    u = conf.units
    if conf.kind.value == "soft":
        half = L * (np.sqrt(2 * n_top + 1) + 5.0)
        x = np.linspace(-half, half, npoints)
        V = 0.5 * u.mass * omega_of_L(conf, L) ** 2 * x**2
        sel = (0, n_top)
    else:
        x = np.linspace(0.0, L, npoints)[1:-1]
        V = np.zeros_like(x)
        sel = (0, n_top - 1)
    dx = x[1] - x[0]
    kin = u.hbar**2 / (2 * u.mass * dx**2)
    bands = np.zeros((3, x.size))
    bands[0] = 2.5 * kin + V
    bands[1, :] = -4.0 / 3.0 * kin
    bands[2, :] = kin / 12.0
    if conf.kind.value == "hard":
        bands[0, 0] -= kin / 12.0
        bands[0, -1] -= kin / 12.0
    return eig_banded(bands, lower=True, eigvals_only=True,
                      select="i", select_range=sel)


class TestUnitsAndConfinement:
    def test_units_must_be_positive(self):
        with pytest.raises(ValueError):
            Units(hbar=0.0)

    def test_soft_requires_frequency_or_size(self):
        with pytest.raises(ValueError):
            soft_harmonic()

    def test_size_frequency_tie(self):
        conf = soft_harmonic(omega0=4.0)
        assert conf.L0 == pytest.approx(0.5)
        assert soft_harmonic(L0=0.5).omega0 == pytest.approx(4.0)
        soft_harmonic(omega0=4.0, L0=0.5)  # consistent pair accepted
        with pytest.raises(ValueError, match="inconsistent"):
            soft_harmonic(omega0=4.0, L0=0.7)

    def test_hard_has_no_frequency(self):
        with pytest.raises(UnsupportedModelError):
            hard_wall().L0
        assert hard_wall().n_min == 1


class TestOmegaOfL:
    def test_identity_at_start(self, soft):
        assert omega_of_L(soft, 1.0) == pytest.approx(1.0)

    def test_inverse_square_law(self, soft):
        assert omega_of_L(soft, 2.0) == pytest.approx(0.25)
        assert omega_of_L(soft, 0.5) == pytest.approx(4.0)

    def test_hard_unsupported(self, hard):
        with pytest.raises(UnsupportedModelError):
            omega_of_L(hard, 1.0)


class TestEnergy:
    def test_soft_ground_state(self, soft):
        assert energy(soft, 0, 1.0) == pytest.approx(0.5, rel=1e-15)

    def test_hard_fundamental(self, hard):
        assert energy(hard, 1, 1.0) == pytest.approx(np.pi**2 / 2, rel=1e-15)

    def test_soft_excited_at_doubled_size(self, soft):
        # 3.5 * omega(2)/omega(1) * ... = 3.5/4
        assert energy(soft, 3, 2.0) == pytest.approx(0.875, rel=1e-15)
        w = diag_oracle(soft, 2.0, 2048, 3)
        assert w[3] == pytest.approx(0.875, rel=1e-8)

    def test_vectorized_quantum_numbers(self, soft):
        E = energy(soft, np.arange(0, 5), 1.0)
        assert np.allclose(E, np.arange(0, 5) + 0.5)

    def test_invalid_quantum_number(self, soft, hard):
        with pytest.raises(ValueError):
            energy(soft, -1, 1.0)
        with pytest.raises(ValueError):
            energy(hard, 0, 1.0)

    @pytest.mark.parametrize("model", ["soft", "hard"])
    def test_diagonalization_oracle_to_n20(self, model, soft, hard):
        conf = soft if model == "soft" else hard
        L = 1.3
        w = diag_oracle(conf, L, 2048, 20)
        ns = np.arange(conf.n_min, conf.n_min + w.size)
        exact = energy(conf, ns, L)
        assert np.max(np.abs(w - exact) / exact) < 1e-6


class TestEigenfunction:
    def test_hard_midpoint_of_fundamental(self, hard):
        g = Grid.box(1.0, 2049)
        phi = eigenfunction(hard, 1, 1.0, g)
        mid = np.argmin(np.abs(g.x - 0.5))
        assert phi[mid] == pytest.approx(np.sqrt(2.0), rel=1e-12)

    def test_hard_vanishes_at_walls(self, hard):
        g = Grid.box(1.5, 1025)
        for n in (1, 2, 7):
            phi = eigenfunction(hard, n, 1.5, g)
            assert phi[0] == 0.0
            assert abs(phi[-1]) < 1e-12

    def test_soft_ground_state_second_moment(self, soft):
        L = 1.0
        g = Grid.symmetric(soft_half_width(L, 0), 4097)
        phi = eigenfunction(soft, 0, L, g)
        x2 = np.sum(phi**2 * g.x**2) * g.dx
        assert x2 == pytest.approx(L**2 / 2, abs=1e-8)

    @pytest.mark.parametrize("model,n", [("soft", 0), ("soft", 7),
                                         ("hard", 1), ("hard", 12)])
    def test_discrete_norm(self, model, n, soft, hard):
        conf = soft if model == "soft" else hard
        if model == "soft":
            g = Grid.symmetric(soft_half_width(1.0, n), 4097)
        else:
            g = Grid.box(1.0, 4097)
        phi = eigenfunction(conf, n, 1.0, g)
        assert np.sum(phi**2) * g.dx == pytest.approx(1.0, abs=1e-10)

    @pytest.mark.parametrize("model", ["soft", "hard"])
    def test_orthonormality(self, model, soft, hard):
        conf = soft if model == "soft" else hard
        if model == "soft":
            g = Grid.symmetric(soft_half_width(1.0, 20), 4097)
            ns = range(0, 21)
        else:
            g = Grid.box(1.0, 4097)
            ns = range(1, 21)
        phis = np.array([eigenfunction(conf, n, 1.0, g) for n in ns])
        gram = phis @ phis.T * g.dx
        assert np.max(np.abs(gram - np.eye(len(phis)))) < 1e-8

    def test_truncation_warning(self, soft):
        g = Grid.symmetric(2.0, 257)  # turning point of n=8 sits at ~4.1
        with pytest.warns(TruncationWarning):
            eigenfunction(soft, 8, 1.0, g)

    def test_large_n_overflow_free(self, soft):
        # raw polynomial recurrences overflow near n ~ 150; the normalized
        # recurrence must stay bounded all the way up
        n = 10_000
        g = Grid.symmetric(soft_half_width(1.0, n), 8193)
        phi = eigenfunction(soft, n, 1.0, g)
        assert np.all(np.isfinite(phi))
        assert 0.05 < np.max(np.abs(phi)) < 1.0

    def test_large_n_norm_on_resolving_grid(self, soft):
        n = 2000
        g = Grid.symmetric(soft_half_width(1.0, n), 32769)
        phi = eigenfunction(soft, n, 1.0, g)
        assert np.sum(phi**2) * g.dx == pytest.approx(1.0, abs=1e-10)


class TestDensityOfStates:
    def test_soft_flat(self, soft):
        assert density_of_states(soft, 3.3, 1.0) == pytest.approx(1.0)

    def test_soft_scales_with_size(self, soft):
        # omega halves four-fold when L doubles
        assert density_of_states(soft, 1.0, 2.0) == pytest.approx(4.0)

    def test_hard_value_and_scaling(self, hard):
        D = density_of_states(hard, 1.0, 1.0)
        assert D == pytest.approx(np.sqrt(0.5) / np.pi, rel=1e-12)
        assert density_of_states(hard, 4.0, 1.0) == pytest.approx(D / 2)

    def test_hard_counting_oracle(self, hard):
        # D(E) equals the slope of the level-counting staircase
        L, E = 1.0, 200.0
        n_of = lambda e: L * np.sqrt(2 * e) / np.pi
        h = 1e-4 * E
        slope = (n_of(E + h) - n_of(E - h)) / (2 * h)
        assert density_of_states(hard, E, L) == pytest.approx(slope, rel=1e-8)

    def test_hard_rejects_nonpositive_energy(self, hard):
        with pytest.raises(ValueError):
            density_of_states(hard, 0.0, 1.0)


class TestGrid:
    def test_rejects_nonuniform(self):
        with pytest.raises(ValueError):
            Grid(x=np.array([0.0, 0.1, 0.3]), dx=0.1)

    def test_norm_helper(self):
        g = Grid.symmetric(5.0, 1001)
        psi = np.exp(-g.x**2)
        assert g.norm(psi) == pytest.approx(
            np.sqrt(np.sum(psi**2) * g.dx))
