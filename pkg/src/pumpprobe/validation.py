"""Oracle suite: analytic and brute-force cross-checks of the numerical pipeline."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.integrate import quad

from . import experiments as ex
from .dynamics import GROUND, SimGrid, evolve
from .phase_cycle import PhaseCycleConfig, convergence_check
from .pulses import area_sweep_piecewise, cw_step, gaussian, softened_rect
from .spectroscopy import Spectrum, SpectrumConfig
from .constants import HBAR, fwhm_to_sigma


@dataclass
class Check:
    name: str
    measured: float
    bound: float
    passed: bool
    warnings: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.measured = float(self.measured)
        self.passed = bool(self.passed)

    def as_dict(self) -> dict:
        return asdict(self)


def half_width(spectrum: Spectrum) -> float:
    """Half width at half maximum of the peak at 0 meV, linearly interpolated."""
    e, v = spectrum.energies, spectrum.values
    i0 = int(np.argmin(np.abs(e)))
    half = 0.5 * v[i0]
    edges = []
    for step in (1, -1):
        i = i0
        while 0 <= i + step < len(v) and v[i + step] > half:
            i += step
        j = i + step
        if not 0 <= j < len(v):
            return math.inf
        edges.append(e[i] + (half - v[i]) * (e[j] - e[i]) / (v[j] - v[i]))
    return 0.5 * abs(edges[0] - edges[1])


def rabi_check(dt: float = ex.DT, periods: int = 20) -> tuple[float, float]:
    """(max occupation error vs sin^2(Omega t / 2), max norm drift) for cw drive from t = 0."""
    omega = ex.OMEGA_2MEV
    traj = evolve(GROUND, cw_step(omega, 0.0), SimGrid(0.0, periods * ex.T_R, dt))
    exact = np.sin(0.5 * omega * traj.times) ** 2
    return float(np.max(np.abs(traj.occupation - exact))), float(np.max(np.abs(traj.norm - 1.0)))


def _area(fn, lo: float, hi: float, breaks=()) -> float:
    pts = sorted({lo, hi, *[b for b in breaks if lo < b < hi]})
    return sum(quad(lambda t: float(fn(t).real), a, b, limit=200, epsabs=1e-13, epsrel=1e-12)[0]
               for a, b in zip(pts[:-1], pts[1:]))


def area_errors() -> dict[str, float]:
    """Relative error between quadrature area and declared area for each closed form."""
    out = {}
    g = gaussian(6 * math.pi, fwhm_to_sigma(12.0), 1.0)
    out["gaussian"] = abs(_area(g, g.center - 8 * g.sigma, g.center + 8 * g.sigma) - g.area) / g.area
    omega, t_on, t_off = ex.OMEGA_2MEV, -20.0 * ex.T_R / 2, 20.0 * ex.T_R / 2
    for d in (0.0, 2.0, 6.3, 12.6):
        p = softened_rect(omega, t_on, t_off, d)
        lo, hi = p.support()
        a = _area(p, lo - 1.0, hi + 1.0, (t_on, t_off - d / 2, t_off + d / 2))
        out[f"softened_{d:g}"] = abs(a - p.area) / p.area
    p = area_sweep_piecewise(3 * math.pi, 0.0, fwhm_to_sigma(12.0))
    out["area_sweep_head"] = abs(_area(p, p.t_on - 1.0, 0.0, (p.t_on,)) - p.alpha_prep) / p.alpha_prep
    out["area_sweep_tail"] = abs(_area(p, 0.0, 8 * p.sigma_P) - p.alpha) / p.alpha
    return out


def run_suite(dt: float = ex.DT, gamma: float | None = None) -> list[Check]:
    spectrum = SpectrumConfig() if gamma is None else SpectrumConfig(gamma=gamma)
    checks = []

    occ_err, norm_err = rabi_check(dt)
    checks.append(Check("rabi_analytic", occ_err, 1e-8, occ_err < 1e-8))
    checks.append(Check("norm_drift", norm_err, 1e-8, norm_err < 1e-8))

    free = ex.pump_free_spectrum(spectrum=spectrum, dt=dt)
    hwhm = half_width(free)
    target = HBAR * spectrum.gamma
    err = abs(hwhm - target) if math.isfinite(hwhm) else math.inf
    checks.append(Check("lorentzian_hwhm", err, 2e-3, err <= 2e-3 and free.central > 0, list(free.warnings)))

    pump = cw_step(ex.OMEGA_2MEV, -2 * ex.T_R)
    grid = SimGrid(-2 * ex.T_R, 10.0, dt)
    disc = convergence_check(pump, PhaseCycleConfig(delay=1.0), grid)
    checks.append(Check("phase_cycle_convergence", disc, 1e-9, disc < 1e-9))

    worst = max(area_errors().values())
    checks.append(Check("area_conservation", worst, 1e-6, worst < 1e-6))

    tau = 0.3
    res = ex.exp_cw([tau, tau + ex.T_R], spectrum=spectrum, dt=dt, normalize="none")
    scale = np.max(np.abs(res.values))
    diff = float(np.max(np.abs(res.values[0] - res.values[1])) / scale) if scale > 0 else math.inf
    checks.append(Check("cw_periodicity", diff, 1e-6, diff < 1e-6, res.metadata["warnings"]))
    return checks
