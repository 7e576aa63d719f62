"""Run configuration: one JSON file, strict validation.

Unknown keys are rejected with their dotted path; every numeric field must
be finite. The soft model ties the trap frequency to the initial size;
supplying both checks their consistency.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .errors import ConfigError
from .spectra import Grid, Units, hard_wall, soft_half_width, soft_harmonic
from .trajectory import Trajectory

_ALLOWED = {
    "model": {"kind", "omega0"},
    "units": {"hbar", "mass", "kB"},
    "trajectory": {"L0", "v_bar", "T_FF"},
    "gas": {"N", "T0", "regime"},
    "grid": {"points", "x_max_factor"},
    "tdse": {"dt", "points", "wall_height", "frame"},
    "sweep": {"times"},
    "levels": {"n_max"},
    "output": {"path", "format"},
}


@dataclass
class RunConfig:
    model_kind: str = "soft"
    model_omega0: float | None = None
    units: Units = field(default_factory=Units)
    L0: float = 1.0
    v_bar: float = 1.0
    T_FF: float = 1.0
    N: int = 10
    T0: float = 0.0
    regime: str = "auto"
    grid_points: int = 2048
    x_max_factor: float = 1.5
    tdse_dt: float = 1e-4
    tdse_points: int = 2048
    wall_height: float = 1e8
    frame: str = "fixed"
    times: tuple | None = None
    n_max: int = 5
    out_path: str | None = None
    out_format: str = "csv"

    def confinement(self):
        if self.model_kind == "soft":
            return soft_harmonic(omega0=self.model_omega0, L0=self.L0,
                                 units=self.units)
        return hard_wall(units=self.units)

    def grid(self, L, n_max):
        """Coordinate grid per the grid.* settings, for the given size."""
        if self.model_kind == "soft":
            half = soft_half_width(L, n_max, factor=self.x_max_factor)
            return Grid.symmetric(half, self.grid_points)
        return Grid.box(L, self.grid_points)

    def trajectory(self):
        return Trajectory(L0=self.L0, v_bar=self.v_bar, T_FF=self.T_FF)

    def sweep_times(self):
        if self.times is not None:
            return list(self.times)
        return [0.0, 0.5 * self.T_FF, self.T_FF]


def _require_finite(path, value):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}: expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(f"{path}: must be finite, got {value!r}")
    return float(value)


def _require_int(path, value):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{path}: expected an integer, got {value!r}")
    return value


def _require_choice(path, value, choices):
    if value not in choices:
        raise ConfigError(f"{path}: expected one of {sorted(choices)}, "
                          f"got {value!r}")
    return value


def from_dict(raw: dict) -> RunConfig:
    if not isinstance(raw, dict):
        raise ConfigError("top level must be an object")
    for section, keys in raw.items():
        if section not in _ALLOWED:
            raise ConfigError(f"unknown config section {section!r}")
        if not isinstance(keys, dict):
            raise ConfigError(f"{section}: expected an object")
        for key in keys:
            if key not in _ALLOWED[section]:
                raise ConfigError(f"unknown config key {section}.{key}")
    cfg = RunConfig()
    model = raw.get("model", {})
    if "kind" in model:
        cfg.model_kind = _require_choice("model.kind", model["kind"],
                                         {"soft", "hard"})
    if "omega0" in model and model["omega0"] is not None:
        cfg.model_omega0 = _require_finite("model.omega0", model["omega0"])
        if cfg.model_omega0 <= 0:
            raise ConfigError("model.omega0 must be positive")
        if cfg.model_kind == "hard":
            raise ConfigError("model.omega0 applies to the soft model only")
    units = raw.get("units", {})
    vals = {k: _require_finite(f"units.{k}", units[k]) for k in units}
    try:
        cfg.units = Units(**{**{"hbar": 1.0, "mass": 1.0, "kB": 1.0}, **vals})
    except ValueError as exc:
        raise ConfigError(f"units: {exc}") from exc
    tr = raw.get("trajectory", {})
    for name in ("L0", "v_bar", "T_FF"):
        if name in tr:
            setattr(cfg, name, _require_finite(f"trajectory.{name}", tr[name]))
    if cfg.L0 <= 0:
        raise ConfigError("trajectory.L0 must be positive")
    if cfg.T_FF <= 0:
        raise ConfigError("trajectory.T_FF must be positive")
    gas = raw.get("gas", {})
    if "N" in gas:
        cfg.N = _require_int("gas.N", gas["N"])
        if cfg.N < 2 or cfg.N % 2:
            raise ConfigError("gas.N must be even and >= 2")
    if "T0" in gas:
        cfg.T0 = _require_finite("gas.T0", gas["T0"])
        if cfg.T0 < 0:
            raise ConfigError("gas.T0 must be >= 0")
    if "regime" in gas:
        cfg.regime = _require_choice("gas.regime", gas["regime"],
                                     {"lowT", "highT", "auto"})
    if cfg.regime == "highT" and cfg.T0 == 0:
        raise ConfigError("gas.regime=highT needs gas.T0 > 0")
    grid = raw.get("grid", {})
    if "points" in grid:
        cfg.grid_points = _require_int("grid.points", grid["points"])
        if cfg.grid_points < 16:
            raise ConfigError("grid.points must be >= 16")
    if "x_max_factor" in grid:
        cfg.x_max_factor = _require_finite("grid.x_max_factor",
                                           grid["x_max_factor"])
        if cfg.x_max_factor <= 0:
            raise ConfigError("grid.x_max_factor must be positive")
    td = raw.get("tdse", {})
    if "dt" in td:
        cfg.tdse_dt = _require_finite("tdse.dt", td["dt"])
        if cfg.tdse_dt <= 0:
            raise ConfigError("tdse.dt must be positive")
    if "points" in td:
        cfg.tdse_points = _require_int("tdse.points", td["points"])
        if cfg.tdse_points < 16:
            raise ConfigError("tdse.points must be >= 16")
    if "wall_height" in td:
        cfg.wall_height = _require_finite("tdse.wall_height", td["wall_height"])
        if cfg.wall_height <= 0:
            raise ConfigError("tdse.wall_height must be positive")
    if "frame" in td:
        cfg.frame = _require_choice("tdse.frame", td["frame"],
                                    {"fixed", "scaled"})
    sweep = raw.get("sweep", {})
    if "times" in sweep:
        ts = sweep["times"]
        if not isinstance(ts, list) or not ts:
            raise ConfigError("sweep.times: expected a non-empty list")
        vals = [_require_finite(f"sweep.times[{i}]", t) for i, t in enumerate(ts)]
        if any(t < 0 for t in vals):
            raise ConfigError("sweep.times must be >= 0")
        cfg.times = tuple(vals)
    levels = raw.get("levels", {})
    if "n_max" in levels:
        cfg.n_max = _require_int("levels.n_max", levels["n_max"])
        if cfg.n_max < 0:
            raise ConfigError("levels.n_max must be >= 0")
    out = raw.get("output", {})
    if "path" in out:
        if out["path"] is not None and not isinstance(out["path"], str):
            raise ConfigError("output.path: expected a string")
        cfg.out_path = out["path"]
    if "format" in out:
        cfg.out_format = _require_choice("output.format", out["format"],
                                         {"csv", "json"})
    # the soft tie omega0 = hbar/(m L0^2) is enforced by the constructor
    try:
        cfg.confinement()
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return cfg


def load_config(path) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return from_dict(raw)
