"""Pump-probe spectra of a resonantly driven two-level emitter under finite pump pulses."""

from .constants import HBAR, PHYS, PhysConstants
from .dynamics import (
    GROUND,
    NumericalError,
    PolarizationTrace,
    SimGrid,
    Trajectory,
    TwoLevelState,
    coherence,
    evolve,
    rhs,
)
from .experiments import (
    SweepResult,
    delay_sweep,
    exp_area_sweep,
    exp_cw,
    exp_delta,
    exp_gaussian_delay,
    exp_rect,
    exp_softened,
    probe_dynamics_trace,
)
from .phase_cycle import PhaseCycleConfig, convergence_check, run_phase_cycle
from .pulses import (
    area_sweep_piecewise,
    compose,
    cw_step,
    gaussian,
    rectangular,
    softened_rect,
)
from .spectroscopy import Spectrum, SpectrumConfig, compute_spectrum, normalize, peak_analysis

__version__ = "0.1.0"

__all__ = [
    "HBAR", "PHYS", "PhysConstants",
    "GROUND", "NumericalError", "PolarizationTrace", "SimGrid", "Trajectory", "TwoLevelState",
    "coherence", "evolve", "rhs",
    "SweepResult", "delay_sweep", "exp_area_sweep", "exp_cw", "exp_delta", "exp_gaussian_delay",
    "exp_rect", "exp_softened", "probe_dynamics_trace",
    "PhaseCycleConfig", "convergence_check", "run_phase_cycle",
    "area_sweep_piecewise", "compose", "cw_step", "gaussian", "rectangular", "softened_rect",
    "Spectrum", "SpectrumConfig", "compute_spectrum", "normalize", "peak_analysis",
]
