"""Physical constants and unit conversions (meV, ps, rad/ps)."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class PhysConstants:
    hbar: float = 0.6582119569  # meV * ps

    def mev_to_rad_ps(self, energy_mev: float) -> float:
        return energy_mev / self.hbar

    def rad_ps_to_mev(self, omega: float) -> float:
        return omega * self.hbar


PHYS = PhysConstants()
HBAR = PHYS.hbar


def rabi_period(omega: float) -> float:
    """Period 2*pi/omega (ps) of resonant Rabi oscillations at rate omega (rad/ps)."""
    return 2.0 * math.pi / omega


def fwhm_to_sigma(fwhm: float) -> float:
    return fwhm / (2.0 * math.sqrt(2.0 * math.log(2.0)))
