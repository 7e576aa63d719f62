"""Fast-forward size schedules L(t) with exact first and second derivatives.

The built-in schedule interpolates between L0 and L0 + v_bar*T_FF with a
velocity profile v(t) = v_bar*(1 - cos(2 pi t / T_FF)) that starts and ends
at rest, and stays frozen for t > T_FF. User-supplied smooth schedules are
accepted as three callables and cross-validated at construction.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

#: times within this distance below zero are clamped to zero (sweep endpoints)
NEGATIVE_T_SLACK = 1e-12


@dataclass(frozen=True)
class KinematicSample:
    """Size, velocity and acceleration of the confinement at one time."""

    t: float
    L: float
    Ldot: float
    Lddot: float

    @classmethod
    def static(cls, L, t=0.0):
        return cls(t=t, L=L, Ldot=0.0, Lddot=0.0)


def _clamp_time(t):
    t = np.asarray(t, dtype=float)
    if np.any(t < -NEGATIVE_T_SLACK):
        raise ValueError(f"negative time: t={t}")
    return np.maximum(t, 0.0)


@dataclass(frozen=True)
class Trajectory:
    """Built-in schedule (L0, v_bar, T_FF); immutable and pure."""

    L0: float
    v_bar: float
    T_FF: float

    def __post_init__(self):
        if not (self.L0 > 0):
            raise ValueError(f"L0 must be positive, got {self.L0}")
        if not (self.T_FF > 0):
            raise ValueError(f"T_FF must be positive, got {self.T_FF}")
        # v(t) carries the sign of v_bar, so L is monotone and its minimum
        # sits at an endpoint of [0, T_FF]
        if min(self.L0, self.L_final) <= 0:
            raise ValueError(
                f"schedule crosses zero size: L(T_FF)={self.L_final}")

    @property
    def L_final(self):
        return self.L0 + self.v_bar * self.T_FF

    def velocity(self, t):
        """dL/dt; zero at t=0, t=T_FF and beyond."""
        t = _clamp_time(t)
        inside = t < self.T_FF
        v = self.v_bar * (1.0 - np.cos(2.0 * np.pi * t / self.T_FF))
        out = np.where(inside, v, 0.0)
        return float(out) if out.ndim == 0 else out

    def size(self, t):
        """L(t); scalar fast path used by quadrature integrands."""
        if t >= self.T_FF:
            return self.L_final
        if t < 0.0:
            if t < -NEGATIVE_T_SLACK:
                raise ValueError(f"negative time: t={t}")
            t = 0.0
        w = 2.0 * np.pi / self.T_FF
        return self.L0 + self.v_bar * (t - np.sin(w * t) / w)

    def kinematics(self, t):
        """(L, Ldot, Lddot) at time t; accepts scalars or arrays."""
        t = _clamp_time(t)
        inside = t < self.T_FF
        w = 2.0 * np.pi / self.T_FF
        phase = w * t
        L = np.where(inside,
                     self.L0 + self.v_bar * (t - np.sin(phase) / w),
                     self.L_final)
        Ldot = np.where(inside, self.v_bar * (1.0 - np.cos(phase)), 0.0)
        Lddot = np.where(inside, self.v_bar * w * np.sin(phase), 0.0)
        if L.ndim == 0:
            return KinematicSample(float(t), float(L), float(Ldot), float(Lddot))
        return KinematicSample(t, L, Ldot, Lddot)


@dataclass(frozen=True)
class CustomTrajectory:
    """User-supplied schedule: callables for L, dL/dt, d2L/dt2.

    Construction cross-validates the derivative callables against central
    finite differences of their antiderivatives at 32 sample points
    (relative tolerance 1e-6) and rejects schedules whose size is not
    strictly positive on [0, T_FF].
    """

    L_fn: Callable[[float], float]
    Ldot_fn: Callable[[float], float]
    Lddot_fn: Callable[[float], float]
    T_FF: float
    L0: float = field(init=False)

    _CHECK_POINTS = 32
    _CHECK_RTOL = 1e-6

    def __post_init__(self):
        if not (self.T_FF > 0):
            raise ValueError(f"T_FF must be positive, got {self.T_FF}")
        object.__setattr__(self, "L0", float(self.L_fn(0.0)))
        ts = np.linspace(0.0, self.T_FF, 4097)
        Ls = np.array([self.L_fn(t) for t in ts])
        if Ls.min() <= 0:
            raise ValueError("schedule crosses zero size on [0, T_FF]")
        self._cross_validate(self.L_fn, self.Ldot_fn, "Ldot")
        self._cross_validate(self.Ldot_fn, self.Lddot_fn, "Lddot")

    def _cross_validate(self, f, dfdt, name):
        h = self.T_FF * 1e-6
        ts = np.linspace(2 * h, self.T_FF - 2 * h, self._CHECK_POINTS)
        fd = np.array([(f(t + h) - f(t - h)) / (2 * h) for t in ts])
        stated = np.array([dfdt(t) for t in ts])
        scale = np.max(np.abs(stated)) + np.max(np.abs(fd)) + 1e-30
        err = np.max(np.abs(fd - stated)) / scale
        if err > self._CHECK_RTOL:
            raise ValueError(
                f"user schedule inconsistent: finite differences disagree "
                f"with {name} by {err:.3e} relative (tolerance {self._CHECK_RTOL})")

    @property
    def L_final(self):
        return float(self.L_fn(self.T_FF))

    def velocity(self, t):
        t = _clamp_time(t)
        if t.ndim == 0:
            return float(self.Ldot_fn(float(t)))
        return np.array([self.Ldot_fn(ti) for ti in t])

    def size(self, t):
        if t < 0.0:
            if t < -NEGATIVE_T_SLACK:
                raise ValueError(f"negative time: t={t}")
            t = 0.0
        return float(self.L_fn(t))

    def kinematics(self, t):
        t = _clamp_time(t)
        if t.ndim == 0:
            tf = float(t)
            return KinematicSample(tf, float(self.L_fn(tf)),
                                   float(self.Ldot_fn(tf)),
                                   float(self.Lddot_fn(tf)))
        return KinematicSample(
            t,
            np.array([self.L_fn(ti) for ti in t]),
            np.array([self.Ldot_fn(ti) for ti in t]),
            np.array([self.Lddot_fn(ti) for ti in t]),
        )
