"""Run configuration: strict schema, unit conversion and dispatch to experiments.

Areas are given in units of pi, amplitudes as hbar*Omega in meV, times in ps.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Annotated, Literal, Union

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, model_validator

from . import experiments as ex
from .constants import HBAR, fwhm_to_sigma, rabi_period
from .pulses import (
    PulseEnvelope,
    area_sweep_piecewise,
    cw_step,
    gaussian,
    rectangular,
    softened_rect,
)
from .spectroscopy import SpectrumConfig


class Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class _PulseBase(Strict):
    phase_pi: float = 0.0
    delay_ps: float = 0.0

    def _common(self) -> dict:
        return {"phase": self.phase_pi * math.pi, "delay": self.delay_ps}


class GaussianPulse(_PulseBase):
    shape: Literal["gaussian"] = "gaussian"
    area_pi: float = 1.0
    sigma_ps: float | None = Field(default=None, gt=0)
    fwhm_ps: float | None = Field(default=None, gt=0)
    center_ps: float = 0.0

    @model_validator(mode="after")
    def _width(self):
        if (self.sigma_ps is None) == (self.fwhm_ps is None):
            raise ValueError("give exactly one of sigma_ps, fwhm_ps")
        return self

    @property
    def sigma(self) -> float:
        return self.sigma_ps if self.sigma_ps is not None else fwhm_to_sigma(self.fwhm_ps)

    def build(self) -> PulseEnvelope:
        return gaussian(self.area_pi * math.pi, self.sigma, self.center_ps, **self._common())


class CwPulse(_PulseBase):
    shape: Literal["cw_step"] = "cw_step"
    omega_meV: float = Field(default=2.0, ge=0)
    t_on_ps: float | None = None
    n_periods: int = Field(default=250, ge=0)

    def build(self) -> PulseEnvelope:
        omega = self.omega_meV / HBAR
        t_on = self.t_on_ps if self.t_on_ps is not None else -self.n_periods * rabi_period(omega)
        return cw_step(omega, t_on, **self._common())


class RectPulse(_PulseBase):
    shape: Literal["rectangular"] = "rectangular"
    omega_meV: float = 2.0
    t_on_ps: float | None = None
    t_off_ps: float | None = None
    n_periods: int = Field(default=20, ge=1)

    def edges(self) -> tuple[float, float]:
        half = 0.5 * self.n_periods * rabi_period(self.omega_meV / HBAR)
        t_on = self.t_on_ps if self.t_on_ps is not None else -half
        t_off = self.t_off_ps if self.t_off_ps is not None else half
        return t_on, t_off

    def build(self) -> PulseEnvelope:
        return rectangular(self.omega_meV / HBAR, *self.edges(), **self._common())


class SoftenedPulse(RectPulse):
    shape: Literal["softened_rect"] = "softened_rect"
    delta_T_ps: float = Field(default=0.0, ge=0)

    def build(self) -> PulseEnvelope:
        return softened_rect(self.omega_meV / HBAR, *self.edges(), self.delta_T_ps, **self._common())


class AreaSweepPulse(_PulseBase):
    shape: Literal["area_sweep_piecewise"] = "area_sweep_piecewise"
    alpha_pi: float = Field(default=6.0, gt=0)
    t_probe_ps: float = 0.0
    fwhm_ps: float = Field(default=12.0, gt=0)
    alpha_prep_pi: float = Field(default=2.0, ge=0)

    def build(self) -> PulseEnvelope:
        return area_sweep_piecewise(
            self.alpha_pi * math.pi, self.t_probe_ps, fwhm_to_sigma(self.fwhm_ps),
            self.alpha_prep_pi * math.pi, **self._common(),
        )


PulseRecord = Annotated[
    Union[GaussianPulse, CwPulse, RectPulse, SoftenedPulse, AreaSweepPulse],
    Field(discriminator="shape"),
]


class ProbeRecord(Strict):
    area_pi: float = Field(default=0.02, ge=0)
    sigma_ps: float = Field(default=0.01, gt=0)
    n_phases: int = Field(default=8, ge=4)


class SweepRecord(Strict):
    axis: Literal["delay_ps", "pulse_area_pi", "delta_T_ps"] = "delay_ps"
    values: list[float] | None = None
    start: float | None = None
    stop: float | None = None
    num: int | None = None

    @model_validator(mode="after")
    def _axis(self):
        if self.values is not None:
            if self.start is not None or self.stop is not None or self.num is not None:
                raise ValueError("give either values or start/stop/num, not both")
            if len(self.values) == 0:
                raise ValueError("sweep axis is empty")
        else:
            if self.start is None or self.stop is None or self.num is None:
                raise ValueError("give values or all of start, stop, num")
            if self.num < 1:
                raise ValueError("sweep axis is empty")
        return self

    def points(self) -> np.ndarray:
        if self.values is not None:
            return np.asarray(self.values, dtype=float)
        return np.linspace(self.start, self.stop, self.num)


class SpectrumRecord(Strict):
    gamma_per_ps: float = Field(default=0.139, ge=0)
    window_ps: float = Field(default=60.0, gt=0)
    zero_pad_factor: int = Field(default=8, ge=1)
    energy_min_meV: float = -5.0
    energy_max_meV: float = 5.0
    sample_spacing_ps: float = Field(default=0.01, gt=0)

    def build(self) -> SpectrumConfig:
        return SpectrumConfig(
            gamma=self.gamma_per_ps,
            window=self.window_ps,
            zero_pad_factor=self.zero_pad_factor,
            energy_range=(self.energy_min_meV, self.energy_max_meV),
            sample_spacing=self.sample_spacing_ps,
        )


class OutputRecord(Strict):
    path: str = "results"
    name: str | None = None
    format: Literal["csv", "json"] = "csv"


Experiment = Literal["cw", "delta", "rect", "softened", "gaussian_delay", "area_sweep", "delay_sweep"]

_AXIS = {"softened": "delta_T_ps", "area_sweep": "pulse_area_pi"}
_DEFAULT_PUMP = {
    "cw": CwPulse,
    "delta": lambda: GaussianPulse(area_pi=1.0, sigma_ps=0.01),
    "rect": RectPulse,
    "softened": SoftenedPulse,
    "gaussian_delay": lambda: GaussianPulse(area_pi=20.0, sigma_ps=7.0),
    "area_sweep": AreaSweepPulse,
}
_PUMP_SHAPE = {"softened": "softened_rect", "area_sweep": "area_sweep_piecewise"}


class RunConfig(Strict):
    experiment: Experiment
    pump: PulseRecord | None = None
    probe: ProbeRecord = ProbeRecord()
    sweep: SweepRecord
    spectrum: SpectrumRecord = SpectrumRecord()
    normalize: Literal["reference", "global", "row", "none"] = "reference"
    probe_after_on_ps: float = 30.9
    dt_fs: float = Field(default=1.0, gt=0)
    workers: int = Field(default=1, ge=1)
    output: OutputRecord = OutputRecord()

    @model_validator(mode="after")
    def _consistent(self):
        axis = _AXIS.get(self.experiment, "delay_ps")
        if self.sweep.axis != axis:
            raise ValueError(f"experiment {self.experiment!r} sweeps {axis!r}, not {self.sweep.axis!r}")
        need = _PUMP_SHAPE.get(self.experiment)
        if need and self.pump is not None and self.pump.shape != need:
            raise ValueError(f"experiment {self.experiment!r} needs a {need!r} pump")
        if self.experiment == "delay_sweep" and self.pump is None:
            raise ValueError("experiment 'delay_sweep' needs an explicit pump")
        return self

    def with_defaults(self) -> "RunConfig":
        """Copy with the preset pump filled in, so the echo documents every parameter."""
        if self.pump is not None:
            return self
        return self.model_copy(update={"pump": _DEFAULT_PUMP[self.experiment]()})

    @property
    def stem(self) -> str:
        return self.output.name or self.experiment


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    text = path.read_text()
    data = yaml.safe_load(text) if path.suffix in (".yaml", ".yml") else json.loads(text)
    return RunConfig.model_validate(data)


def execute(cfg: RunConfig) -> ex.SweepResult:
    """Run the experiment a config describes."""
    cfg = cfg.with_defaults()
    probe = ex.ProbeSettings(cfg.probe.area_pi * math.pi, cfg.probe.sigma_ps, cfg.probe.n_phases)
    spectrum = cfg.spectrum.build()
    dt = cfg.dt_fs * 1e-3
    common = dict(probe=probe, spectrum=spectrum, dt=dt, normalize=cfg.normalize, workers=cfg.workers)
    points = cfg.sweep.points()
    pump = cfg.pump

    if cfg.experiment == "softened":
        t_on, t_off = pump.edges()
        result = ex.exp_softened(points, pump.omega_meV / HBAR, t_on, t_off, cfg.probe_after_on_ps, **common)
    elif cfg.experiment == "area_sweep":
        result = ex.exp_area_sweep(
            points * math.pi, fwhm_to_sigma(pump.fwhm_ps), pump.t_probe_ps, pump.alpha_prep_pi * math.pi,
            **common,
        )
    else:
        reference_delay = 0.0 if cfg.experiment == "cw" else None
        result = ex.delay_sweep(
            pump.build(), points, reference_delay=reference_delay, experiment=cfg.experiment, **common
        )
    result.metadata["config"] = cfg.model_dump(mode="json")
    return result
