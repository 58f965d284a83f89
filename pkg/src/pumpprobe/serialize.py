"""File formats: spectrum CSV, polarization-trace CSV, sweep matrix CSV/JSON + metadata sidecar."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from .dynamics import PolarizationTrace
from .experiments import SweepResult
from .spectroscopy import Spectrum

CONVENTIONS = (
    "# units: energy meV, time ps, pulse area in units of pi",
    "# transform: alpha(w) = Im sum_t P1(t) exp(-gamma (t - t_ref)) exp(+i w (t - t_ref)) dt",
    "# damping origin t_ref: probe delay",
)

AXIS_UNITS = {"delay_ps": "ps", "pulse_area_pi": "pi", "delta_T_ps": "ps"}


def _fmt(x: float) -> str:
    return repr(float(x))


def result_hash(values: np.ndarray) -> str:
    return hashlib.sha256(np.ascontiguousarray(values, dtype=np.float64).tobytes()).hexdigest()


def write_spectrum_csv(spectrum: Spectrum, path: str | Path, label: str = "") -> Path:
    path = Path(path)
    lines = list(CONVENTIONS)
    if label:
        lines.append(f"# {label}")
    lines.append("# normalization: " + json.dumps(spectrum.normalization))
    lines += [f"# warning: {w}" for w in spectrum.warnings]
    lines.append("energy_meV,alpha")
    lines += [f"{_fmt(e)},{_fmt(v)}" for e, v in zip(spectrum.energies, spectrum.values)]
    path.write_text("\n".join(lines) + "\n")
    return path


def read_spectrum_csv(path: str | Path) -> Spectrum:
    lines = [ln for ln in Path(path).read_text().splitlines() if ln and not ln.startswith("#")]
    body = np.array([[float(x) for x in ln.split(",")] for ln in lines[1:]])
    return Spectrum(body[:, 0], body[:, 1])


def write_trace_csv(trace: PolarizationTrace, path: str | Path, damped: PolarizationTrace | None = None) -> Path:
    path = Path(path)
    header = "t_ps,re_P1,im_P1" + (",re_P1_damped,im_P1_damped" if damped is not None else "")
    lines = ["# units: time ps, P1 dimensionless coherence", header]
    for i, (t, v) in enumerate(zip(trace.times, trace.values)):
        row = [_fmt(t), _fmt(v.real), _fmt(v.imag)]
        if damped is not None:
            row += [_fmt(damped.values[i].real), _fmt(damped.values[i].imag)]
        lines.append(",".join(row))
    path.write_text("\n".join(lines) + "\n")
    return path


def write_sweep(result: SweepResult, out_dir: str | Path, stem: str, fmt: str = "csv") -> list[Path]:
    """Write the matrix (CSV or JSON), a metadata sidecar and, if present, the config echo."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    metadata = dict(result.metadata)
    metadata["axis_name"] = result.axis_name
    metadata["sha256"] = result_hash(result.values)
    paths = []
    if fmt == "csv":
        path = out_dir / f"{stem}.csv"
        unit = AXIS_UNITS.get(result.axis_name, "")
        lines = list(CONVENTIONS) + [
            f"# rows: {result.axis_name} ({unit}); columns: energy (meV)",
            "# first row: column count, then energies; following rows: axis value, then alpha",
            "# normalization: " + json.dumps(metadata.get("normalization", {})),
        ]
        lines.append(",".join([str(len(result.energies))] + [_fmt(e) for e in result.energies]))
        for a, row in zip(result.axis_values, result.values):
            lines.append(",".join([_fmt(a)] + [_fmt(v) for v in row]))
        path.write_text("\n".join(lines) + "\n")
    elif fmt == "json":
        path = out_dir / f"{stem}.json"
        path.write_text(json.dumps({
            "axis_name": result.axis_name,
            "axis_values": result.axis_values.tolist(),
            "energies_meV": result.energies.tolist(),
            "values": result.values.tolist(),
            "metadata": metadata,
        }))
    else:
        raise ValueError(f"unknown format {fmt!r}")
    paths.append(path)
    meta_path = out_dir / f"{stem}.meta.json"
    meta_path.write_text(json.dumps(metadata, indent=2, default=float))
    paths.append(meta_path)
    if "config" in metadata:
        cfg_path = out_dir / f"{stem}.config.json"
        cfg_path.write_text(json.dumps(metadata["config"], indent=2))
        paths.append(cfg_path)
    return paths


def read_sweep(path: str | Path) -> SweepResult:
    path = Path(path)
    meta_path = path.with_name(path.stem + ".meta.json")
    metadata = json.loads(meta_path.read_text()) if meta_path.exists() else {}
    if path.suffix == ".json":
        d = json.loads(path.read_text())
        return SweepResult(d["axis_name"], d["axis_values"], np.array(d["energies_meV"]),
                           np.array(d["values"]), d["metadata"])
    rows = np.loadtxt(path, delimiter=",", comments="#")
    rows = np.atleast_2d(rows)
    return SweepResult(metadata.get("axis_name", "delay_ps"), rows[1:, 0], rows[0, 1:], rows[1:, 1:], metadata)
