"""Absorption spectra from the probe polarization.

    alpha(omega) = Im sum_t P_1(t) exp(-gamma (t - t_ref)) exp(+i omega (t - t_ref)) dt

over t_ref <= t <= t_ref + window.  With this sign convention a pump-free
probe polarization i*A gives the positive Lorentzian A*gamma/(gamma^2 + omega^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import find_peaks

from .constants import HBAR
from .dynamics import PolarizationTrace

GAMMA = 0.139  # 1/ps


@dataclass(frozen=True)
class SpectrumConfig:
    gamma: float = GAMMA
    window: float = 60.0  # ps after t_ref
    zero_pad_factor: int = 8
    energy_range: tuple[float, float] = (-5.0, 5.0)  # meV
    sample_spacing: float = 0.01  # ps, decimation target
    t_ref: float | None = None  # None: the probe delay

    def __post_init__(self):
        if self.gamma < 0 or not math.isfinite(self.gamma):
            raise ValueError("gamma must be finite and non-negative")
        if not self.window > 0:
            raise ValueError("window must be positive")
        if int(self.zero_pad_factor) != self.zero_pad_factor or self.zero_pad_factor < 1:
            raise ValueError("zero_pad_factor must be an integer >= 1")
        lo, hi = self.energy_range
        if not hi > lo:
            raise ValueError("energy_range must be increasing")

    def warnings(self) -> list[str]:
        out = []
        if self.gamma * self.window < 3.0:
            out.append(
                f"window truncation: gamma*window = {self.gamma * self.window:.3g} < 3, "
                "undamped tail produces ripple"
            )
        return out


@dataclass(frozen=True)
class Spectrum:
    energies: np.ndarray  # meV
    values: np.ndarray
    normalization: dict = field(default_factory=lambda: {"mode": "none", "reference": 1.0})
    warnings: tuple[str, ...] = ()

    @property
    def spacing(self) -> float:
        return float(self.energies[1] - self.energies[0])

    def value_at(self, energy: float) -> float:
        return float(np.interp(energy, self.energies, self.values))

    @property
    def central(self) -> float:
        """Amplitude at 0 meV."""
        return self.value_at(0.0)


@dataclass(frozen=True)
class Peak:
    energy: float
    amplitude: float

    @property
    def sign(self) -> int:
        return 1 if self.amplitude > 0 else -1


def compute_spectrum(
    trace: PolarizationTrace, cfg: SpectrumConfig, t_ref: float | None = None
) -> Spectrum:
    t_ref = cfg.t_ref if t_ref is None else t_ref
    if t_ref is None:
        raise ValueError("no damping origin: pass t_ref or set SpectrumConfig.t_ref")
    times = np.asarray(trace.times, dtype=float)
    values = np.asarray(trace.values, dtype=np.complex128)
    steps = np.diff(times)
    dt = steps.mean()
    if not np.allclose(steps, dt, rtol=1e-6, atol=0.0):
        raise ValueError("polarization trace is not uniformly sampled")

    warnings = cfg.warnings()
    t_end = t_ref + cfg.window
    i0 = int(np.searchsorted(times, t_ref - 1e-6 * dt))
    if i0 >= len(times) or times[-1] < t_end - 1e-6 * dt:
        raise ValueError(
            f"trace [{times[0]:.4g}, {times[-1]:.4g}] ps does not cover [{t_ref:.4g}, {t_end:.4g}] ps"
        )
    stride = max(1, int(round(cfg.sample_spacing / dt)))
    n_keep = int(math.floor((t_end - times[i0]) / (stride * dt) + 1e-6)) + 1
    idx = i0 + stride * np.arange(n_keep)
    t = times[idx]
    delta = stride * dt
    offset = t[0] - t_ref

    f = values[idx] * np.exp(-cfg.gamma * (t - t_ref))
    n_fft = cfg.zero_pad_factor * len(f)
    # sum_m f_m exp(+i w m delta) for w_k = 2 pi k / (n_fft delta)
    transform = np.fft.ifft(f, n=n_fft) * n_fft * delta
    omega = 2.0 * math.pi * np.fft.fftfreq(n_fft, d=delta)
    transform = np.fft.fftshift(transform * np.exp(1j * omega * offset))
    energies = HBAR * np.fft.fftshift(omega)

    lo, hi = cfg.energy_range
    keep = (energies >= lo) & (energies <= hi)
    return Spectrum(energies[keep], transform.imag[keep].copy(), warnings=tuple(warnings))


def normalize(spectrum: Spectrum, reference: Spectrum | None = None, mode: str = "peak_at_reference") -> Spectrum:
    """Scale ``spectrum`` by the reference's 0 meV amplitude or its largest |value|."""
    if mode == "none":
        return spectrum
    ref = spectrum if reference is None else reference
    if mode == "peak_at_reference":
        scale = ref.central
    elif mode == "global_max":
        scale = float(np.max(np.abs(ref.values)))
    else:
        raise ValueError(f"unknown normalization mode {mode!r}")
    if scale == 0.0 or not math.isfinite(scale):
        raise ValueError(f"cannot normalize by a reference amplitude of {scale}")
    return Spectrum(
        spectrum.energies,
        spectrum.values / scale,
        {"mode": mode, "reference": scale},
        spectrum.warnings,
    )


def peak_analysis(spectrum: Spectrum, threshold: float = 0.01) -> list[Peak]:
    """Local maxima above +thr and minima below -thr, thr = threshold * max|value|.

    Positions and amplitudes are refined with a three-point parabola.
    """
    v = np.asarray(spectrum.values)
    scale = np.max(np.abs(v)) if len(v) else 0.0
    if scale == 0.0:
        return []
    thr = threshold * scale
    e = spectrum.energies
    de = e[1] - e[0]
    peaks = []
    for sgn in (1.0, -1.0):
        idx, _ = find_peaks(sgn * v, height=thr)
        for i in idx:
            a, b, c = v[i - 1], v[i], v[i + 1]
            denom = a - 2.0 * b + c
            shift = 0.5 * (a - c) / denom if denom != 0 else 0.0
            peaks.append(Peak(float(e[i] + shift * de), float(b - 0.25 * (a - c) * shift)))
    return sorted(peaks, key=lambda p: p.energy)
