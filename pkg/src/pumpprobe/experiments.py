"""Pump-probe experiment families and delay / area / edge sweeps."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .constants import HBAR, fwhm_to_sigma, rabi_period
from .dynamics import GROUND, PolarizationTrace, SimGrid, Trajectory, TwoLevelState, evolve
from .phase_cycle import PROBE_AREA, PROBE_SIGMA, PhaseCycleConfig, run_phase_cycle
from .pulses import (
    GAUSS_CUT,
    PulseEnvelope,
    area_sweep_piecewise,
    cw_step,
    gaussian,
    rectangular,
    softened_rect,
)
from .spectroscopy import Spectrum, SpectrumConfig, compute_spectrum

log = logging.getLogger(__name__)

DT = 1e-3  # ps
OMEGA_2MEV = 2.0 / HBAR  # rad/ps
T_R = rabi_period(OMEGA_2MEV)

NORMALIZE_MODES = ("reference", "global", "row", "none")


@dataclass(frozen=True)
class ProbeSettings:
    area: float = PROBE_AREA
    sigma: float = PROBE_SIGMA
    n_phases: int = 8


@dataclass
class SweepResult:
    axis_name: str
    axis_values: np.ndarray
    energies: np.ndarray
    values: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.axis_values = np.asarray(self.axis_values, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (len(self.axis_values), len(self.energies)):
            raise ValueError(
                f"values shape {self.values.shape} does not match axes "
                f"({len(self.axis_values)}, {len(self.energies)})"
            )

    def spectrum(self, i: int) -> Spectrum:
        return Spectrum(self.energies, self.values[i])

    def cut(self, axis_value: float) -> Spectrum:
        return self.spectrum(int(np.argmin(np.abs(self.axis_values - axis_value))))


def _map(fn, items: list, workers: int) -> list:
    """Ordered map; results are stored by input index whatever the completion order."""
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


class DelayScanner:
    """Runs phase-cycled probe measurements at arbitrary delays for one pump.

    The pump-only trajectory is integrated once on a global grid.  For a delay
    tau the probe runs start from that trajectory at tau - M*dt (one short RK4
    step bridges the sub-step offset), so every probe run is sampled at
    tau + k*dt exactly.
    """

    def __init__(
        self,
        pump: PulseEnvelope | None,
        delays: Sequence[float],
        probe: ProbeSettings = ProbeSettings(),
        spectrum: SpectrumConfig = SpectrumConfig(),
        dt: float = DT,
    ):
        self.pump = pump
        self.probe = probe
        self.spectrum_cfg = spectrum
        self.dt = dt
        self.lead = int(math.ceil(GAUSS_CUT * probe.sigma / dt))
        delays = np.asarray(delays, dtype=float)
        t_lo = float(delays.min()) - (self.lead + 1) * dt
        if pump is not None:
            t_lo = min(t_lo, pump.support()[0])
        t_hi = float(delays.max()) + spectrum.window + dt
        n = int(math.ceil((t_hi - t_lo) / dt))
        self.grid = SimGrid(t_lo, t_lo + n * dt, dt)
        envelope = pump if pump is not None else (lambda t: np.zeros_like(t))
        self.pump_only: Trajectory = evolve(GROUND, envelope, self.grid)

    def state_at(self, t: float) -> TwoLevelState:
        """Pump-only state at an arbitrary time inside the grid."""
        g = self.grid
        j = int(math.floor((t - g.t_start) / g.step + 1e-9))
        j = min(max(j, 0), g.n_steps)
        state = self.pump_only.state(j)
        gap = t - self.pump_only.times[j]
        if gap > 1e-9 * g.step and self.pump is not None:
            state = evolve(state, self.pump, SimGrid(self.pump_only.times[j], t, gap)).final
        return state

    def occupation_at(self, t: float) -> float:
        return self.state_at(t).occupation

    def trace(self, tau: float, order: int = 1, n_phases: int | None = None) -> PolarizationTrace:
        t_s = tau - self.lead * self.dt
        n = self.lead + int(round(self.spectrum_cfg.window / self.dt))
        grid = SimGrid(t_s, t_s + n * self.dt, self.dt)
        cfg = PhaseCycleConfig(
            delay=tau,
            n_phases=n_phases or self.probe.n_phases,
            order=order,
            probe_area=self.probe.area,
            probe_sigma=self.probe.sigma,
        )
        return run_phase_cycle(self.pump, cfg, grid, initial=self.state_at(t_s))

    def spectrum(self, tau: float) -> Spectrum:
        return compute_spectrum(self.trace(tau), self.spectrum_cfg, t_ref=tau)

    def spectra(self, delays: Sequence[float], workers: int = 1) -> list[Spectrum]:
        return _map(self.spectrum, [float(d) for d in delays], workers)


def pump_free_spectrum(
    probe: ProbeSettings = ProbeSettings(), spectrum: SpectrumConfig = SpectrumConfig(), dt: float = DT
) -> Spectrum:
    return DelayScanner(None, [0.0], probe, spectrum, dt).spectrum(0.0)


def _normalize_rows(rows: np.ndarray, mode: str, reference: float | None) -> tuple[np.ndarray, dict]:
    if mode == "none":
        return rows, {"mode": "none"}
    if mode == "reference":
        if not reference:
            raise ValueError("reference peak amplitude is zero")
        return rows / reference, {"mode": "peak_at_reference", "reference": float(reference)}
    if mode == "global":
        scale = float(np.max(np.abs(rows)))
        if scale == 0.0:
            raise ValueError("map is identically zero")
        return rows / scale, {"mode": "global_max", "reference": scale}
    if mode == "row":
        scales = np.max(np.abs(rows), axis=1)
        if np.any(scales == 0.0):
            raise ValueError("a spectrum in the map is identically zero")
        return rows / scales[:, None], {"mode": "row_max", "reference": scales.tolist()}
    raise ValueError(f"unknown normalization {mode!r}; expected one of {NORMALIZE_MODES}")


def _run_config(probe: ProbeSettings, spectrum: SpectrumConfig, dt: float) -> dict:
    return {"probe": asdict(probe), "spectrum": asdict(spectrum), "dt_ps": dt}


def delay_sweep(
    pump: PulseEnvelope | None,
    delays: Sequence[float],
    *,
    probe: ProbeSettings = ProbeSettings(),
    spectrum: SpectrumConfig = SpectrumConfig(),
    dt: float = DT,
    normalize: str = "reference",
    reference_delay: float | None = None,
    workers: int = 1,
    experiment: str = "delay_sweep",
    extra: dict | None = None,
) -> SweepResult:
    """Spectra for each delay.

    ``normalize="reference"`` divides by the 0 meV amplitude of the spectrum at
    ``reference_delay`` when given, otherwise by the pump-free probe spectrum.
    """
    delays = np.asarray(delays, dtype=float)
    if delays.size == 0:
        raise ValueError("empty delay axis")
    scan_delays = list(delays) + ([reference_delay] if reference_delay is not None else [])
    scanner = DelayScanner(pump, scan_delays, probe, spectrum, dt)
    specs = scanner.spectra(delays, workers)
    rows = np.array([s.values for s in specs])
    reference = None
    if normalize == "reference":
        if reference_delay is not None:
            reference = scanner.spectrum(reference_delay).central
        else:
            reference = pump_free_spectrum(probe, spectrum, dt).central
    values, norm = _normalize_rows(rows, normalize, reference)
    metadata = {
        "experiment": experiment,
        "pump": pump.params() if pump is not None else None,
        "normalization": norm | ({"reference_delay_ps": reference_delay} if reference_delay is not None else {}),
        "occupation_at_delay": [scanner.occupation_at(float(d)) for d in delays],
        "warnings": list(specs[0].warnings),
        **_run_config(probe, spectrum, dt),
        **(extra or {}),
    }
    return SweepResult("delay_ps", delays, specs[0].energies, values, metadata)


def cw_pump(omega: float = OMEGA_2MEV, n_periods: int = 250) -> PulseEnvelope:
    """cw drive switched on n_periods Rabi periods before t = 0."""
    return cw_step(omega, -n_periods * rabi_period(omega))


def exp_cw(delays: Sequence[float], omega: float = OMEGA_2MEV, n_periods: int = 250, **kw) -> SweepResult:
    kw.setdefault("normalize", "reference")
    return delay_sweep(
        cw_pump(omega, n_periods), delays, reference_delay=0.0, experiment="cw",
        extra={"n_periods": n_periods}, **kw,
    )


def exp_delta(delays: Sequence[float], area: float = math.pi, sigma: float = PROBE_SIGMA, **kw) -> SweepResult:
    return delay_sweep(gaussian(area, sigma, 0.0), delays, experiment="delta", **kw)


def rect_pump(omega: float = OMEGA_2MEV, n_periods: int = 20) -> PulseEnvelope:
    half = 0.5 * n_periods * rabi_period(omega)
    return rectangular(omega, -half, half)


def exp_rect(delays: Sequence[float], omega: float = OMEGA_2MEV, n_periods: int = 20, **kw) -> SweepResult:
    return delay_sweep(rect_pump(omega, n_periods), delays, experiment="rect",
                       extra={"n_periods": n_periods}, **kw)


def exp_gaussian_delay(
    delays: Sequence[float], area: float = 20 * math.pi, sigma: float = 7.0, **kw
) -> SweepResult:
    return delay_sweep(gaussian(area, sigma, 0.0), delays, experiment="gaussian_delay", **kw)


def snap_to_ground_maximum(scanner: DelayScanner, t: float, search: float) -> float:
    """Time of the largest ground-state occupation within t +- search/2."""
    traj = scanner.pump_only
    sel = np.abs(traj.times - t) <= 0.5 * search
    i = np.flatnonzero(sel)[np.argmax(1.0 - traj.occupation[sel])]
    return float(traj.times[i])


def exp_softened(
    delta_Ts: Sequence[float],
    omega: float = OMEGA_2MEV,
    t_on: float | None = None,
    t_off: float | None = None,
    probe_after_on: float = 30.9,
    *,
    n_periods: int = 20,
    probe: ProbeSettings = ProbeSettings(),
    spectrum: SpectrumConfig = SpectrumConfig(),
    dt: float = DT,
    normalize: str = "reference",
    workers: int = 1,
) -> SweepResult:
    """Probe spectra for softened switch-off edges of a rectangular pump.

    Without explicit edges the pump spans ``n_periods`` Rabi periods centred at 0.
    The probe delay is t_on + ``probe_after_on`` snapped to the nearest
    ground-state occupation maximum of the pump-only dynamics.
    """
    delta_Ts = np.asarray(delta_Ts, dtype=float)
    if delta_Ts.size == 0:
        raise ValueError("empty delta_T axis")
    period = rabi_period(omega)
    if t_on is None or t_off is None:
        t_on, t_off = -0.5 * n_periods * period, 0.5 * n_periods * period
    requested = t_on + probe_after_on

    def one(d: float) -> tuple[Spectrum, float]:
        pump = softened_rect(omega, t_on, t_off, d)
        scanner = DelayScanner(pump, [requested - period, requested + period], probe, spectrum, dt)
        tau = snap_to_ground_maximum(scanner, requested, period)
        log.info("softened edge %.3g ps: probe snapped %.4g ps -> %.4g ps", d, requested, tau)
        return scanner.spectrum(tau), tau

    results = _map(one, [float(d) for d in delta_Ts], workers)
    rows = [r[0] for r in results]
    delays = [r[1] for r in results]
    reference = pump_free_spectrum(probe, spectrum, dt).central if normalize == "reference" else None
    values, norm = _normalize_rows(np.array([s.values for s in rows]), normalize, reference)
    metadata = {
        "experiment": "softened",
        "pump": {"shape": "softened_rect", "omega": omega, "t_on": t_on, "t_off": t_off},
        "probe_delay_requested_ps": requested,
        "probe_delay_ps": delays,
        "snap_distance_ps": [d - requested for d in delays],
        "normalization": norm,
        "warnings": list(rows[0].warnings),
        **_run_config(probe, spectrum, dt),
    }
    return SweepResult("delta_T_ps", delta_Ts, rows[0].energies, values, metadata)


def exp_area_sweep(
    areas: Sequence[float],
    sigma_P: float = fwhm_to_sigma(12.0),
    t_probe: float = 0.0,
    alpha_prep: float = 2 * math.pi,
    *,
    probe: ProbeSettings = ProbeSettings(),
    spectrum: SpectrumConfig = SpectrumConfig(),
    dt: float = DT,
    normalize: str = "reference",
    workers: int = 1,
) -> SweepResult:
    """Spectra versus the pump area after the probe (axis stored in units of pi)."""
    areas = np.asarray(areas, dtype=float)
    if areas.size == 0:
        raise ValueError("empty pulse-area axis")

    def one(alpha: float) -> tuple[Spectrum, float, float]:
        pump = area_sweep_piecewise(alpha, t_probe, sigma_P, alpha_prep)
        scanner = DelayScanner(pump, [t_probe], probe, spectrum, dt)
        return scanner.spectrum(t_probe), scanner.occupation_at(t_probe), pump.jump_at_probe

    results = _map(one, [float(a) for a in areas], workers)
    specs = [r[0] for r in results]
    reference = pump_free_spectrum(probe, spectrum, dt).central if normalize == "reference" else None
    values, norm = _normalize_rows(np.array([s.values for s in specs]), normalize, reference)
    metadata = {
        "experiment": "area_sweep",
        "pump": {"shape": "area_sweep_piecewise", "sigma_P": sigma_P, "t_probe": t_probe,
                 "alpha_prep": alpha_prep},
        "occupation_at_probe": [r[1] for r in results],
        "jump_at_probe_rad_per_ps": [r[2] for r in results],
        "normalization": norm,
        "warnings": list(specs[0].warnings),
        **_run_config(probe, spectrum, dt),
    }
    return SweepResult("pulse_area_pi", areas / math.pi, specs[0].energies, values, metadata)


def probe_dynamics_trace(
    pump: PulseEnvelope | None,
    tau: float,
    *,
    probe: ProbeSettings = ProbeSettings(),
    spectrum: SpectrumConfig = SpectrumConfig(),
    dt: float = DT,
) -> tuple[PolarizationTrace, PolarizationTrace]:
    """P_1(t) around and after the probe, raw and with the exp(-gamma (t - tau)) damping."""
    raw = DelayScanner(pump, [tau], probe, spectrum, dt).trace(tau)
    damping = np.where(raw.times >= tau, np.exp(-spectrum.gamma * (raw.times - tau)), 1.0)
    return raw, PolarizationTrace(raw.times, raw.values * damping)
