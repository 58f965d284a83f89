"""Pump and probe envelope families.

Every envelope is a real function of time (rad/ps) multiplied by a phase
factor exp(i*phase) and shifted by ``delay``.  Instances are immutable and
evaluate vectorized over numpy arrays.  Heaviside edges are inclusive.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import ClassVar, Sequence

import numpy as np

log = logging.getLogger(__name__)

SQRT_2PI = math.sqrt(2.0 * math.pi)
# exp(-GAUSS_CUT**2 / 2) ~ 5e-32: beyond this a Gaussian is numerically absent
GAUSS_CUT = 12.0


@dataclass(frozen=True, kw_only=True)
class PulseEnvelope:
    phase: float = 0.0
    delay: float = 0.0

    shape: ClassVar[str] = ""

    def envelope(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        value = self.envelope(t - self.delay)
        if self.phase == 0.0:
            return value.astype(np.complex128)
        return value * np.exp(1j * self.phase)

    def _support(self) -> tuple[float, float]:
        raise NotImplementedError

    def support(self) -> tuple[float, float]:
        """Interval outside which the envelope vanishes (or is below ~1e-31 of its peak)."""
        lo, hi = self._support()
        return lo + self.delay, hi + self.delay

    def with_phase(self, phase: float) -> "PulseEnvelope":
        return replace(self, phase=phase)

    def params(self) -> dict:
        d = {k: getattr(self, k) for k in self.__dataclass_fields__}
        d["shape"] = self.shape
        return d


@dataclass(frozen=True, kw_only=True)
class Gaussian(PulseEnvelope):
    area: float
    sigma: float
    center: float = 0.0

    shape: ClassVar[str] = "gaussian"

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")

    @property
    def peak(self) -> float:
        return self.area / (SQRT_2PI * self.sigma)

    def envelope(self, t):
        return self.peak * np.exp(-((t - self.center) ** 2) / (2.0 * self.sigma**2))

    def _support(self):
        return self.center - GAUSS_CUT * self.sigma, self.center + GAUSS_CUT * self.sigma


@dataclass(frozen=True, kw_only=True)
class CwStep(PulseEnvelope):
    omega: float
    t_on: float

    shape: ClassVar[str] = "cw_step"

    def __post_init__(self):
        if self.omega < 0:
            raise ValueError("cw amplitude must be non-negative")

    def envelope(self, t):
        return np.where(t >= self.t_on, self.omega, 0.0)

    def _support(self):
        return self.t_on, math.inf

    @property
    def area(self) -> float:
        return math.inf if self.omega > 0 else 0.0


@dataclass(frozen=True, kw_only=True)
class Rectangular(PulseEnvelope):
    omega: float
    t_on: float
    t_off: float

    shape: ClassVar[str] = "rectangular"

    def __post_init__(self):
        if not self.t_off > self.t_on:
            raise ValueError("t_off must exceed t_on")

    def envelope(self, t):
        return np.where((t >= self.t_on) & (t <= self.t_off), self.omega, 0.0)

    def _support(self):
        return self.t_on, self.t_off

    @property
    def area(self) -> float:
        return self.omega * (self.t_off - self.t_on)


@dataclass(frozen=True, kw_only=True)
class SoftenedRect(PulseEnvelope):
    """Rectangle whose switch-off is a cos^2 half period of length ``delta_T``.

    The plateau ends at t_off - delta_T/2 and the cos^2 edge reaches zero at
    t_off + delta_T/2, so the total area omega * (t_off - t_on) does not depend
    on delta_T.
    """

    omega: float
    t_on: float
    t_off: float
    delta_T: float = 0.0

    shape: ClassVar[str] = "softened_rect"

    def __post_init__(self):
        if not self.t_off > self.t_on:
            raise ValueError("t_off must exceed t_on")
        if not 0.0 <= self.delta_T <= self.t_off - self.t_on:
            raise ValueError(
                f"delta_T must lie in [0, {self.t_off - self.t_on}], got {self.delta_T}"
            )

    def envelope(self, t):
        if self.delta_T == 0.0:
            return np.where((t >= self.t_on) & (t <= self.t_off), self.omega, 0.0)
        edge = self.t_off - 0.5 * self.delta_T
        plateau = np.where((t >= self.t_on) & (t < edge), self.omega, 0.0)
        in_tail = (t >= edge) & (t < self.t_off + 0.5 * self.delta_T)
        tail = self.omega * np.cos(0.5 * math.pi / self.delta_T * (t - edge)) ** 2
        return plateau + np.where(in_tail, tail, 0.0)

    def _support(self):
        return self.t_on, self.t_off + 0.5 * self.delta_T

    @property
    def area(self) -> float:
        return self.omega * (self.t_off - self.t_on)


@dataclass(frozen=True, kw_only=True)
class AreaSweepPiecewise(PulseEnvelope):
    """Constant preparation segment of area ``alpha_prep`` ending at ``t_probe``,
    followed by the falling half of a Gaussian of area ``2*alpha`` (tail area ``alpha``).
    """

    alpha: float
    t_probe: float = 0.0
    sigma_P: float = 5.0
    alpha_prep: float = 2.0 * math.pi

    shape: ClassVar[str] = "area_sweep_piecewise"

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if not self.sigma_P > 0:
            raise ValueError("sigma_P must be positive")
        if self.alpha_prep < 0:
            raise ValueError("alpha_prep must be non-negative")

    @property
    def omega_area(self) -> float:
        return self.alpha / (SQRT_2PI * self.sigma_P)

    @property
    def t_on(self) -> float:
        return self.t_probe - self.alpha_prep / self.omega_area

    @property
    def tail_peak(self) -> float:
        return 2.0 * self.alpha / (SQRT_2PI * self.sigma_P)

    @property
    def jump_at_probe(self) -> float:
        """Discontinuity tail(t_probe) - head(t_probe-) of the printed formulas."""
        return self.tail_peak - (self.omega_area if self.alpha_prep > 0 else 0.0)

    def envelope(self, t):
        head = np.where((t >= self.t_on) & (t < self.t_probe), self.omega_area, 0.0)
        if self.alpha_prep == 0:
            head = np.zeros_like(t)
        dt = t - self.t_probe
        tail = self.tail_peak * np.exp(-(dt**2) / (2.0 * self.sigma_P**2))
        return np.where(t >= self.t_probe, tail, head)

    def _support(self):
        return self.t_on, self.t_probe + GAUSS_CUT * self.sigma_P

    @property
    def area(self) -> float:
        return self.alpha_prep + self.alpha


@dataclass(frozen=True)
class CompositeField:
    """Sum of envelope terms, evaluated left to right."""

    terms: tuple[PulseEnvelope, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if len(self.terms) == 0:
            raise ValueError("a composite field needs at least one term")

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        total = self.terms[0](t)
        for term in self.terms[1:]:
            total = total + term(t)
        return total

    def support(self) -> tuple[float, float]:
        spans = [term.support() for term in self.terms]
        return min(s[0] for s in spans), max(s[1] for s in spans)


def gaussian(area: float, sigma: float, center: float = 0.0, **kw) -> Gaussian:
    return Gaussian(area=area, sigma=sigma, center=center, **kw)


def cw_step(omega: float, t_on: float, **kw) -> CwStep:
    return CwStep(omega=omega, t_on=t_on, **kw)


def rectangular(omega: float, t_on: float, t_off: float, **kw) -> Rectangular:
    return Rectangular(omega=omega, t_on=t_on, t_off=t_off, **kw)


def softened_rect(omega: float, t_on: float, t_off: float, delta_T: float, **kw) -> SoftenedRect:
    return SoftenedRect(omega=omega, t_on=t_on, t_off=t_off, delta_T=delta_T, **kw)


def area_sweep_piecewise(
    alpha: float, t_probe: float, sigma_P: float, alpha_prep: float = 2.0 * math.pi, **kw
) -> AreaSweepPiecewise:
    pulse = AreaSweepPiecewise(alpha=alpha, t_probe=t_probe, sigma_P=sigma_P, alpha_prep=alpha_prep, **kw)
    if pulse.jump_at_probe != 0.0:
        log.info(
            "area-sweep pulse (alpha=%.4g) jumps by %.4g rad/ps at t_probe=%.4g ps",
            alpha, pulse.jump_at_probe, t_probe,
        )
    return pulse


def compose(terms: Sequence[PulseEnvelope]) -> CompositeField:
    return CompositeField(tuple(terms))


SHAPES: dict[str, type[PulseEnvelope]] = {
    cls.shape: cls for cls in (Gaussian, CwStep, Rectangular, SoftenedRect, AreaSweepPiecewise)
}
