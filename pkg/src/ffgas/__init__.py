"""Fast-forward expansion of an ideal 1D Fermi gas.

Per-level forces and energies of soft-harmonic and hard-wall confinements
driven through an accelerated adiabatic sweep, the frozen Fermi-Dirac
ensemble on top of them, nonequilibrium equation-of-state reports, and an
independent Crank-Nicolson propagator to verify all of it.
"""

from .errors import (ConfigError, GridResolutionWarning, NumericsError,
                     RegimeWarning, TruncationWarning, UnsupportedModelError)
from .fastforward import (FFFields, FFWavefunction, ThetaReconstruction,
                          dynamical_phase, ff_fields, ff_potential,
                          ff_wavefunction, theta_from_integral, theta_phase)
from .kernels import NUMBA_ENABLED
from .observables import (LevelObservables, expectation_energy,
                          expectation_force, force_variational_check,
                          level_energy_ff, level_force, level_observables)
from .spectra import (Confinement, Grid, Kind, Units, density_of_states,
                      eigenfunction, energy, hard_wall, omega_of_L,
                      soft_half_width, soft_harmonic)
from .statmech import (Ensemble, EosRecord, build_ensemble,
                       degeneracy_temperature, effective_temperature,
                       eos_report, fugacity_highT, mean_energy, mean_force,
                       mu_lowT, occupations_at, solve_mu_exact)
from .tdse import PropagationResult, PropagatorConfig, populations, propagate
from .trajectory import CustomTrajectory, KinematicSample, Trajectory

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "GridResolutionWarning", "NumericsError", "RegimeWarning",
    "TruncationWarning", "UnsupportedModelError",
    "FFFields", "FFWavefunction", "ThetaReconstruction", "dynamical_phase",
    "ff_fields", "ff_potential", "ff_wavefunction", "theta_from_integral",
    "theta_phase",
    "NUMBA_ENABLED",
    "LevelObservables", "expectation_energy", "expectation_force",
    "force_variational_check", "level_energy_ff", "level_force",
    "level_observables",
    "Confinement", "Grid", "Kind", "Units", "density_of_states",
    "eigenfunction", "energy", "hard_wall", "omega_of_L", "soft_half_width",
    "soft_harmonic",
    "Ensemble", "EosRecord", "build_ensemble", "degeneracy_temperature",
    "effective_temperature", "eos_report", "fugacity_highT", "mean_energy",
    "mean_force", "mu_lowT", "occupations_at", "solve_mu_exact",
    "PropagationResult", "PropagatorConfig", "populations", "propagate",
    "CustomTrajectory", "KinematicSample", "Trajectory",
    "__version__",
]
