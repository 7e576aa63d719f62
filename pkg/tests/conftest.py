import numpy as np
import pytest

from ffgas import Grid, Trajectory, hard_wall, soft_half_width, soft_harmonic


@pytest.fixture(scope="session")
def soft():
    return soft_harmonic(L0=1.0)


@pytest.fixture(scope="session")
def hard():
    return hard_wall()


@pytest.fixture(scope="session")
def sweep():
    """Reference sweep: size 1 -> 2 over unit time."""
    return Trajectory(L0=1.0, v_bar=1.0, T_FF=1.0)


@pytest.fixture()
def rng():
    return np.random.default_rng(987654321)


def soft_grid(L, n_max, npoints=4097):
    return Grid.symmetric(soft_half_width(L, n_max), npoints)


def box_grid(L, npoints=4097):
    return Grid.box(L, npoints)
