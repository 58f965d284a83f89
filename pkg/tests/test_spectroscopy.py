import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pumpprobe.constants import HBAR
from pumpprobe.dynamics import PolarizationTrace
from pumpprobe.spectroscopy import (
    GAMMA,
    Spectrum,
    SpectrumConfig,
    compute_spectrum,
    normalize,
    peak_analysis,
)


def constant_trace(amplitude=1j, t0=0.0, t1=61.0, dt=1e-3):
    n = int(round((t1 - t0) / dt)) + 1
    t = t0 + dt * np.arange(n)
    return PolarizationTrace(t, np.full(n, amplitude, dtype=complex))


def discrete_sum(energy, gamma, delta, m):
    """Closed form of sum_{k<m} exp((i w - gamma) k delta) delta."""
    z = np.exp((1j * energy / HBAR - gamma) * delta)
    return delta * (1 - z**m) / (1 - z)


def test_matches_closed_form_geometric_sum():
    cfg = SpectrumConfig()
    spec = compute_spectrum(constant_trace(0.7j), cfg, t_ref=0.0)
    m = int(round(cfg.window / cfg.sample_spacing)) + 1
    expected = 0.7 * discrete_sum(spec.energies, cfg.gamma, cfg.sample_spacing, m).real
    assert np.allclose(spec.values, expected, rtol=0, atol=1e-10)


def test_constant_trace_is_lorentzian():
    spec = compute_spectrum(constant_trace(1j), SpectrumConfig(), t_ref=0.0)
    # continuum limit 1/gamma at resonance, within the discretization and truncation error
    assert spec.central == pytest.approx(1 / GAMMA, rel=1e-3)
    assert spec.central > 0
    half = spec.values >= 0.5 * spec.values.max()
    hwhm = 0.5 * (spec.energies[half].max() - spec.energies[half].min())
    assert hwhm == pytest.approx(HBAR * GAMMA, abs=2 * spec.spacing)


def test_energy_grid_and_range():
    cfg = SpectrumConfig()
    spec = compute_spectrum(constant_trace(), cfg, t_ref=0.0)
    n_fft = cfg.zero_pad_factor * (int(round(cfg.window / cfg.sample_spacing)) + 1)
    assert spec.spacing == pytest.approx(2 * math.pi * HBAR / (n_fft * cfg.sample_spacing), rel=1e-9)
    assert spec.energies.min() >= -5.0 and spec.energies.max() <= 5.0
    assert np.any(spec.energies == 0.0)


@settings(max_examples=20, deadline=None)
@given(st.floats(-3.0, 3.0), st.floats(0.1, 1.5))
def test_oscillating_trace_peaks_at_its_frequency(energy, width):
    t = 1e-2 * np.arange(6200)
    trace = PolarizationTrace(t, 1j * np.exp(-1j * energy / HBAR * t))
    spec = compute_spectrum(trace, SpectrumConfig(gamma=width), t_ref=0.0)
    peaks = [p for p in peak_analysis(spec) if p.amplitude > 0]
    top = max(peaks, key=lambda p: p.amplitude)
    assert top.energy == pytest.approx(energy, abs=spec.spacing)


def test_time_shift_changes_only_phase_origin():
    a = compute_spectrum(constant_trace(1j, 0.0), SpectrumConfig(), t_ref=0.0)
    b = compute_spectrum(constant_trace(1j, -3.0, 58.0), SpectrumConfig(), t_ref=-3.0)
    assert np.allclose(a.values, b.values, atol=1e-9)


def test_offset_between_grid_and_reference_is_compensated():
    # samples start half a fine step after t_ref; the factor exp(i w offset) restores the phase
    t = 0.0005 + 1e-3 * np.arange(61000)
    energy = 1.5
    trace = PolarizationTrace(t, 1j * np.exp(-1j * energy / HBAR * t))
    spec = compute_spectrum(trace, SpectrumConfig(), t_ref=0.0)
    ref = compute_spectrum(
        PolarizationTrace(t - 0.0005, 1j * np.exp(-1j * energy / HBAR * (t - 0.0005))),
        SpectrumConfig(),
        t_ref=0.0,
    )
    assert np.max(np.abs(spec.values - ref.values)) < 1e-2 * np.max(np.abs(ref.values))


def test_zero_gamma_warns():
    spec = compute_spectrum(constant_trace(), SpectrumConfig(gamma=0.0), t_ref=0.0)
    assert any("truncation" in w for w in spec.warnings)
    assert not SpectrumConfig().warnings()


def test_invalid_configs():
    with pytest.raises(ValueError):
        SpectrumConfig(gamma=-0.1)
    with pytest.raises(ValueError):
        SpectrumConfig(window=0.0)
    with pytest.raises(ValueError):
        SpectrumConfig(energy_range=(1.0, -1.0))
    with pytest.raises(ValueError):
        SpectrumConfig(zero_pad_factor=0)


def test_short_or_irregular_trace_rejected():
    with pytest.raises(ValueError, match="cover"):
        compute_spectrum(constant_trace(t1=30.0), SpectrumConfig(), t_ref=0.0)
    t = np.sort(np.random.default_rng(1).uniform(0, 61, 5000))
    with pytest.raises(ValueError, match="uniform"):
        compute_spectrum(PolarizationTrace(t, np.ones_like(t, dtype=complex)), SpectrumConfig(), t_ref=0.0)
    with pytest.raises(ValueError):
        compute_spectrum(constant_trace(), SpectrumConfig())


def test_normalization_modes():
    spec = compute_spectrum(constant_trace(2j), SpectrumConfig(), t_ref=0.0)
    ref = compute_spectrum(constant_trace(1j), SpectrumConfig(), t_ref=0.0)
    assert normalize(spec, ref).central == pytest.approx(2.0)
    assert normalize(spec, mode="global_max").values.max() == pytest.approx(1.0)
    assert normalize(spec, mode="none") is spec
    flat = Spectrum(spec.energies, np.zeros_like(spec.values))
    with pytest.raises(ValueError):
        normalize(spec, flat)
    with pytest.raises(ValueError):
        normalize(spec, ref, mode="bogus")


def test_peak_analysis_signs_and_threshold():
    e = np.linspace(-5, 5, 2001)
    v = 1 / (1 + (e / 0.1) ** 2) - 0.5 / (1 + ((e - 2) / 0.1) ** 2) + 0.005 / (1 + ((e + 2) / 0.1) ** 2)
    peaks = peak_analysis(Spectrum(e, v))
    assert [(round(p.energy, 3), p.sign) for p in peaks] == [(0.0, 1), (2.0, -1)]
    exact = -0.5 + 1 / (1 + 20.0**2) + 0.005 / (1 + 40.0**2)
    assert peaks[1].amplitude == pytest.approx(exact, rel=1e-4)
    assert peak_analysis(Spectrum(e, np.zeros_like(e))) == []


@settings(max_examples=15, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.integers(0, 2**31 - 1))
def test_linearity(re, im, seed):
    rng = np.random.default_rng(seed)
    t = 1e-2 * np.arange(6100)
    base = rng.normal(size=t.size) + 1j * rng.normal(size=t.size)
    a = complex(re, im)
    one = compute_spectrum(PolarizationTrace(t, base), SpectrumConfig(), t_ref=0.0)
    both = compute_spectrum(PolarizationTrace(t, a * base), SpectrumConfig(), t_ref=0.0)
    imag_part = compute_spectrum(PolarizationTrace(t, 1j * base), SpectrumConfig(), t_ref=0.0)
    expected = a.real * one.values + a.imag * imag_part.values
    assert np.allclose(both.values, expected, rtol=0, atol=1e-9 * (1 + np.max(np.abs(expected))))


def test_zero_padding_moves_peaks_less_than_half_a_bin():
    t = 1e-2 * np.arange(6100)
    trace = PolarizationTrace(t, 1j * (1 + 0.4 * np.cos(2.0 / HBAR * t)))
    coarse = compute_spectrum(trace, SpectrumConfig(zero_pad_factor=1), t_ref=0.0)
    fine = compute_spectrum(trace, SpectrumConfig(zero_pad_factor=4), t_ref=0.0)
    a = sorted(p.energy for p in peak_analysis(coarse, 0.05))
    b = sorted(p.energy for p in peak_analysis(fine, 0.05))
    assert len(a) == len(b) == 3
    assert np.max(np.abs(np.subtract(a, b))) < 0.5 * coarse.spacing


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_imaginary_times_real_is_even(seed):
    rng = np.random.default_rng(seed)
    t = 1e-2 * np.arange(6100)
    spec = compute_spectrum(PolarizationTrace(t, 1j * rng.normal(size=t.size)), SpectrumConfig(), t_ref=0.0)
    sym = spec.values[::-1]
    assert np.allclose(spec.energies, -spec.energies[::-1])
    assert np.max(np.abs(spec.values - sym)) < 1e-10 * (1 + np.max(np.abs(spec.values)))
