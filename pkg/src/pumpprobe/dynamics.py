"""Resonant two-level system in the rotating frame.

Amplitudes obey

    dc_g/dt = (i/2) conj(Omega(t)) c_x
    dc_x/dt = (i/2) Omega(t) c_g

and are integrated with fixed-step classical RK4.  The envelope is
evaluated at t, t + dt/2 and t + dt for every step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._kernels import rk4_coherence_batch, rk4_trajectory

Envelope = Callable[[np.ndarray], np.ndarray]


MAX_STEPS = 10**9


class NumericalError(RuntimeError):
    """Raised when the integration cannot proceed (non-finite field, etc.)."""


@dataclass(frozen=True)
class TwoLevelState:
    c_g: complex = 1.0 + 0.0j
    c_x: complex = 0.0j

    @property
    def norm(self) -> float:
        return abs(self.c_g) ** 2 + abs(self.c_x) ** 2

    @property
    def occupation(self) -> float:
        """Excited-state occupation |c_x|^2."""
        return abs(self.c_x) ** 2


GROUND = TwoLevelState(1.0 + 0.0j, 0.0j)


@dataclass(frozen=True)
class SimGrid:
    """Uniform time grid; the step is adjusted so t_end is hit exactly."""

    t_start: float
    t_end: float
    dt: float = 1e-3

    def __post_init__(self):
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not self.t_end > self.t_start:
            raise ValueError(f"t_end ({self.t_end}) must exceed t_start ({self.t_start})")
        if (self.t_end - self.t_start) / self.dt > MAX_STEPS:
            raise NumericalError(
                f"grid [{self.t_start:.4g}, {self.t_end:.4g}] ps at dt = {self.dt:.3g} ps "
                f"exceeds {MAX_STEPS:.0e} steps"
            )

    @property
    def n_steps(self) -> int:
        return max(1, round((self.t_end - self.t_start) / self.dt))

    @property
    def step(self) -> float:
        return (self.t_end - self.t_start) / self.n_steps

    def times(self) -> np.ndarray:
        t = self.t_start + self.step * np.arange(self.n_steps + 1)
        t[-1] = self.t_end
        return t

    def half_times(self) -> np.ndarray:
        """Stage evaluation points t_0, t_0 + dt/2, t_1, ..., t_N."""
        t = self.t_start + 0.5 * self.step * np.arange(2 * self.n_steps + 1)
        t[-1] = self.t_end
        return t


@dataclass(frozen=True)
class PolarizationTrace:
    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if len(self.times) != len(self.values):
            raise ValueError("times and values differ in length")

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0])


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    c_g: np.ndarray
    c_x: np.ndarray

    def state(self, index: int) -> TwoLevelState:
        return TwoLevelState(complex(self.c_g[index]), complex(self.c_x[index]))

    @property
    def final(self) -> TwoLevelState:
        return self.state(-1)

    @property
    def occupation(self) -> np.ndarray:
        return np.abs(self.c_x) ** 2

    @property
    def norm(self) -> np.ndarray:
        return np.abs(self.c_g) ** 2 + np.abs(self.c_x) ** 2

    def coherence(self) -> np.ndarray:
        return self.c_x * np.conj(self.c_g)


def rhs(state: TwoLevelState, omega: complex) -> tuple[complex, complex]:
    """Time derivative (dc_g/dt, dc_x/dt) for the instantaneous envelope omega."""
    omega = complex(omega)
    return 0.5j * omega.conjugate() * state.c_x, 0.5j * omega * state.c_g


def coherence(state: TwoLevelState) -> complex:
    return state.c_x * state.c_g.conjugate()


def sample_envelope(envelope: Envelope, t: np.ndarray) -> np.ndarray:
    w = np.broadcast_to(np.asarray(envelope(t), dtype=np.complex128), t.shape)
    bad = ~np.isfinite(w)
    if bad.any():
        t_bad = float(t[np.argmax(bad)])
        raise NumericalError(f"non-finite envelope value at t = {t_bad!r} ps")
    return np.ascontiguousarray(w)


def _check_finite(values: np.ndarray, dt: float, t0: float = 0.0) -> None:
    bad = ~np.isfinite(values)
    if bad.any():
        k = np.argwhere(bad)[0]
        raise NumericalError(
            f"state diverged at t = {float(t0 + k[-1] * dt):.6g} ps; the step {dt:.3g} ps is too large for the drive"
        )


def evolve(initial: TwoLevelState, envelope: Envelope, grid: SimGrid) -> Trajectory:
    """Integrate from ``initial`` over ``grid`` and return the states at all grid times."""
    w = sample_envelope(envelope, grid.half_times())
    cg, cx = rk4_trajectory(complex(initial.c_g), complex(initial.c_x), w, grid.step)
    _check_finite(cx + cg, grid.step, grid.t_start)
    return Trajectory(grid.times(), cg, cx)


def evolve_samples(initial: TwoLevelState, samples: np.ndarray, dt: float) -> Trajectory:
    """Like :func:`evolve` but with the envelope already sampled on the half-step lattice."""
    cg, cx = rk4_trajectory(complex(initial.c_g), complex(initial.c_x), samples, dt)
    _check_finite(cx + cg, dt)
    return Trajectory(np.arange(len(cg)) * dt, cg, cx)


def coherence_batch(initial: TwoLevelState, samples: np.ndarray, dt: float) -> np.ndarray:
    """Coherence traces for a stack of half-step-sampled envelopes, shape (rows, steps + 1)."""
    samples = np.ascontiguousarray(samples, dtype=np.complex128)
    if not np.isfinite(samples).all():
        row, col = np.argwhere(~np.isfinite(samples))[0]
        raise NumericalError(f"non-finite envelope value in row {row} at half-step {col}")
    out = rk4_coherence_batch(complex(initial.c_g), complex(initial.c_x), samples, dt)
    _check_finite(out, dt)
    return out
