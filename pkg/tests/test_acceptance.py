"""Acceptance criteria at their stated tolerances; one PASS/FAIL line each in the summary."""

import math

import numpy as np
import pytest
from scipy.signal import find_peaks

from pumpprobe.constants import HBAR, rabi_period
from pumpprobe.dynamics import GROUND, SimGrid, evolve
from pumpprobe.experiments import (
    T_R,
    DelayScanner,
    cw_pump,
    exp_area_sweep,
    exp_cw,
    exp_delta,
    exp_rect,
    exp_softened,
    pump_free_spectrum,
    rect_pump,
)
from pumpprobe.pulses import cw_step
from pumpprobe.spectroscopy import GAMMA, peak_analysis

HWHM = HBAR * GAMMA


@pytest.fixture
def record(acceptance_report):
    def _record(number, name, passed, detail):
        line = f"{'PASS' if passed else 'FAIL'} [{number:2d}] {name}: {detail}"
        acceptance_report.append(line)
        print(line)
        assert passed, line

    return _record


def positive(spec, lo=-np.inf, hi=np.inf, threshold=0.01):
    return [p for p in peak_analysis(spec, threshold) if p.amplitude > 0 and lo < p.energy < hi]


def test_01_rabi_oracle(record):
    omega = 3.0385
    grid = SimGrid(0.0, 20 * rabi_period(omega), 1e-3)
    traj = evolve(GROUND, cw_step(omega, 0.0), grid)
    err = np.max(np.abs(traj.occupation - np.sin(0.5 * omega * traj.times) ** 2))
    drift = np.max(np.abs(traj.norm - 1.0))
    record(1, "Rabi oracle", err < 1e-8 and drift < 1e-8,
           f"max |c_x|^2 error {err:.2e}, norm drift {drift:.2e} (bounds 1e-8)")


def test_02_lorentzian_calibration(record):
    spec = pump_free_spectrum()
    top = max(peak_analysis(spec), key=lambda p: p.amplitude)
    half = spec.values >= 0.5 * top.amplitude
    # linear interpolation of the half-maximum crossing on the positive side
    e, v = spec.energies, spec.values
    i = np.flatnonzero(half & (e >= 0))[-1]
    hwhm = e[i] + (v[i] - 0.5 * top.amplitude) / (v[i] - v[i + 1]) * (e[i + 1] - e[i])
    ok = top.amplitude > 0 and abs(top.energy) <= spec.spacing and abs(hwhm - 0.0915) <= 0.002
    record(2, "Lorentzian calibration", ok,
           f"peak {top.amplitude:+.4g} at {top.energy:+.4f} meV, HWHM {hwhm:.4f} meV (0.0915 +- 0.002)")


@pytest.fixture(scope="module")
def cw_map():
    delays = [0.0, T_R / 4, -0.7, -0.7 + T_R, 0.45, 0.45 + T_R]
    return exp_cw(delays, workers=2)


def test_03_mollow_positions(record, cw_map):
    peaks = positive(cw_map.spectrum(0), threshold=0.05)
    energies = [p.energy for p in peaks]
    ok = len(energies) == 3 and np.allclose(energies, [-2.0, 0.0, 2.0], atol=0.05)
    record(3, "Mollow positions", ok, "peaks at " + ", ".join(f"{x:+.3f}" for x in energies) + " meV (tol 0.05)")


def test_04_middle_peak_vanishing(record, cw_map):
    ratio = abs(cw_map.spectrum(1).central) / abs(cw_map.spectrum(0).central)
    record(4, "middle-peak vanishing", ratio < 0.05, f"|central(T_R/4)| / central(0) = {ratio:.4f} (< 0.05)")


def test_05_gain_absorption_symmetry(record):
    central = exp_delta([1.0]).spectrum(0).central
    record(5, "gain/absorption symmetry", abs(central + 1.0) <= 0.02,
           f"central amplitude {central:+.4f} relative to the pump-free peak (-1 +- 0.02)")


def test_06_periodicity(record, cw_map):
    scale = np.max(np.abs(cw_map.values))
    diffs = [np.max(np.abs(cw_map.values[i] - cw_map.values[i + 1])) / scale for i in (2, 4)]
    record(6, "periodicity", max(diffs) < 1e-6, f"max L-inf difference {max(diffs):.2e} of map max (< 1e-6)")


def test_07_pfid_fringes(record):
    spec = exp_delta([-5.0]).spectrum(0)
    ripples = [p for p in peak_analysis(spec) if abs(p.energy) > 3 * HWHM]
    maxima = np.array([p.energy for p in ripples if p.amplitude > 0])
    minima = np.array([p.energy for p in ripples if p.amplitude < 0])
    # fringe period: spacing of consecutive extrema of the same kind on each side
    gaps = [np.diff(np.sort(x[x > 0])) for x in (maxima, minima)]
    gaps += [np.diff(np.sort(x[x < 0])) for x in (maxima, minima)]
    period = float(np.mean(np.concatenate(gaps)))
    adjacent = float(np.mean(np.diff([p.energy for p in ripples if p.energy > 0])))
    target = 2 * math.pi * HBAR / 5.0
    record(7, "PFID fringes", abs(period / target - 1) <= 0.10,
           f"fringe period {period:.4f} meV vs {target:.4f} (+-10%); adjacent max/min spacing {adjacent:.4f} meV")


@pytest.fixture(scope="module")
def rect_cuts():
    return exp_rect([26.9, -16.5, 16.5, -26.9], workers=2)


def test_08_rect_regimes(record, rect_cuts):
    after, early, late, before = (rect_cuts.spectrum(i) for i in range(4))
    checks = {}
    p = peak_analysis(after, 0.05)
    checks["26.9 single absorption line"] = len(p) == 1 and p[0].sign == 1 and abs(p[0].energy) <= after.spacing
    p = peak_analysis(early)
    checks["-16.5 clean triplet"] = [q.sign for q in p] == [1, 1, 1] and np.allclose(
        [q.energy for q in p], [-2, 0, 2], atol=0.05)

    def mollow(spec):
        lo, hi = positive(spec, -2.2, -1.8), positive(spec, 1.8, 2.2)
        return max((q.amplitude for q in lo + hi), default=0.0) if lo and hi else 0.0

    checks["16.5 triplet + ripples, reduced"] = (
        late.central > 0 and len(peak_analysis(late)) > 3 and 0 < mollow(late) < mollow(early))
    checks["-26.9 central + ripples + triplet"] = (
        before.central > 0 and len(peak_analysis(before)) > 3 and mollow(before) > 0)
    record(8, "rect-pulse regimes", all(checks.values()),
           "; ".join(f"{k} {'ok' if v else 'no'}" for k, v in checks.items()))


def minor_peaks(spec):
    e, v = spec.energies, spec.values
    idx, _ = find_peaks(v, height=0.01 * np.max(np.abs(v)))
    upper = max((j for j in idx if e[j] > 1.5), key=lambda j: v[j])
    return [e[j] for j in idx if 3 * HWHM + spec.spacing < e[j] < e[upper]]


def test_09_softened_edge(record):
    result = exp_softened([0.0, 12.6], workers=2)
    sharp, soft = result.spectrum(0), result.spectrum(1)
    a, b = minor_peaks(sharp), minor_peaks(soft)
    pairs = list(zip(b[::-1], a[::-1]))
    shifted = len(pairs) > 0 and all(abs(x) < abs(y) for x, y in pairs)

    def outside(spec):
        mask = np.abs(spec.energies) > 2.1
        return float(np.sum(np.abs(spec.values[mask])) * spec.spacing)

    ratio = outside(sharp) / outside(soft)
    record(9, "softened edge", shifted and ratio >= 5.0,
           f"minor peaks {[round(float(x), 3) for x in a]} -> {[round(float(x), 3) for x in b]} "
           f"(shift inward {'ok' if shifted else 'no'}); outside-2.1 meV weight ratio {ratio:.2f} (>= 5)")


def test_10_area_sweep_law(record):
    result = exp_area_sweep(np.array([2.0, 4.0, 6.0, 8.0]) * math.pi, workers=2)
    counts, outer = [], []
    for i in range(4):
        spec = result.spectrum(i)
        peaks = positive(spec, 0.0, 5.0)
        top = max(peaks, key=lambda p: p.energy)
        outer.append(top.energy)
        counts.append(sum(1 for p in peaks if spec.spacing < p.energy < top.energy))
    x = result.axis_values
    fit = np.polyval(np.polyfit(x, outer, 1), x)
    r2 = 1 - np.sum((outer - fit) ** 2) / np.sum((outer - np.mean(outer)) ** 2)
    ok = np.diff(counts).tolist() == [1, 1, 1] and r2 > 0.98
    record(10, "area-sweep law", ok,
           f"inner peak counts {counts}; outer peak {[round(e, 3) for e in outer]} meV, R^2 {r2:.4f} (> 0.98)")


def test_11_phase_cycle_convergence(record):
    worst = 0.0
    for pump, tau in ((cw_pump(), 0.0), (rect_pump(), -16.5), (rect_pump(), 16.5)):
        scanner = DelayScanner(pump, [tau])
        coarse = scanner.trace(tau, n_phases=8).values
        fine = scanner.trace(tau, n_phases=64).values
        worst = max(worst, float(np.max(np.abs(coarse - fine)) / np.max(np.abs(fine))))
    record(11, "phase-cycling convergence", worst < 1e-9, f"max relative discrepancy {worst:.2e} (< 1e-9)")


def test_12_sign_rule(record):
    result = exp_rect(np.linspace(-30.0, 30.0, 121), workers=2)
    scale = np.max(np.abs(result.values))
    occupation = np.array(result.metadata["occupation_at_delay"])
    central = np.array([result.spectrum(i).central for i in range(len(result.axis_values))])
    tested = np.abs(central) > 0.05 * scale
    wrong = tested & (np.sign(central) != np.sign(1 - 2 * occupation))
    bad = ", ".join(f"{t:g}" for t in result.axis_values[wrong])
    record(12, "sign rule", not wrong.any(),
           f"{int(wrong.sum())} of {int(tested.sum())} tested delays violate" + (f" (tau = {bad} ps)" if bad else ""))
