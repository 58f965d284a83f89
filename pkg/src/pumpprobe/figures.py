"""Preset runs for the standard figure panels, with plot-ready output."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from . import experiments as ex
from .config import RunConfig, execute
from .constants import HBAR
from .serialize import write_spectrum_csv, write_sweep, write_trace_csv
from .spectroscopy import Spectrum

FIGURES = ("fig2a", "fig2b", "fig3", "fig4", "fig6", "fig7a")

# delays at which labelled cut files are written
CUTS = {
    "fig2a": {"c": ex.T_R / 4, "d": 0.0},
    "fig2b": {"e": 1.0, "f": -5.0},
    "fig3": {"b": 26.9, "c": 16.5, "d": -16.5, "e": -26.9},
}

PRESETS = {
    "fig2a": {"experiment": "cw", "sweep": {"start": -ex.T_R, "stop": ex.T_R, "num": 81}},
    "fig2b": {"experiment": "delta", "sweep": {"start": -10.0, "stop": 10.0, "num": 81}},
    "fig3": {"experiment": "rect", "sweep": {"start": -30.0, "stop": 30.0, "num": 121}},
    "fig4": {"experiment": "softened", "sweep": {"axis": "delta_T_ps", "values": [0.0, 12.6]}},
    "fig6": {"experiment": "gaussian_delay", "sweep": {"start": -30.0, "stop": 30.0, "num": 121}},
    "fig7a": {
        "experiment": "area_sweep",
        "normalize": "row",
        "sweep": {"axis": "pulse_area_pi", "start": 0.5, "stop": 8.0, "num": 31},
    },
}

GNUPLOT = """# {name}: {title}
set datafile separator ','
set xlabel 'energy (meV)'
set ylabel '{ylabel}'
set cblabel 'normalized absorption'
set palette defined (-1 'blue', 0 'white', 1 'red')
set cbrange [-1:1]
set view map
plot '{matrix}' matrix nonuniform with image notitle
"""

TITLES = {
    "fig2a": ("cw pump switched on 250 Rabi periods earlier", "delay (ps)"),
    "fig2b": ("ultrashort pi pump at t = 0", "delay (ps)"),
    "fig3": ("rectangular pump, 20 Rabi periods", "delay (ps)"),
    "fig4": ("softened switch-off edge", "edge duration (ps)"),
    "fig6": ("Gaussian pump", "delay (ps)"),
    "fig7a": ("pump area after the probe", "pulse area (pi)"),
}


def preset(name: str, out_dir: str | Path = "figures", **overrides) -> RunConfig:
    if name not in PRESETS:
        raise ValueError(f"unknown figure {name!r}; choose from {', '.join(FIGURES)}")
    data = {**PRESETS[name], "output": {"name": name, "path": str(out_dir)}}
    data.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig.model_validate(data)


def make_figure(name: str, out_dir: str | Path, **overrides) -> list[Path]:
    """Run a figure preset and write matrix, sidecars, cuts and a gnuplot script."""
    out_dir = Path(out_dir)
    cfg = preset(name, out_dir, **overrides).with_defaults()
    result = execute(cfg)
    paths = write_sweep(result, out_dir, name, cfg.output.format)

    if name in CUTS:
        labels = CUTS[name]
        taus = list(labels.values())
        cut_cfg = cfg.model_copy(update={"sweep": cfg.sweep.model_copy(
            update={"values": taus, "start": None, "stop": None, "num": None})})
        cuts = execute(cut_cfg)
        for (panel, tau), row in zip(labels.items(), cuts.values):
            spec = Spectrum(cuts.energies, row, cuts.metadata["normalization"])
            paths.append(write_spectrum_csv(spec, out_dir / f"{name}_{panel}.csv", f"cut at delay {tau:.4g} ps"))
    if name == "fig3":
        raw, damped = ex.probe_dynamics_trace(ex.rect_pump(), 14.47)
        paths.append(write_trace_csv(raw, out_dir / "fig3_probe_dynamics.csv", damped))
    if name == "fig4":
        t = np.arange(-30.0, 35.0, 0.01)
        pump = cfg.pump
        lines = ["# pump envelopes hbar*Omega (meV) vs time (ps)",
                 "t_ps," + ",".join(f"delta_T_{d:g}" for d in result.axis_values)]
        shapes = [pump.model_copy(update={"delta_T_ps": float(d)}).build()(t).real * HBAR
                  for d in result.axis_values]
        lines += [",".join([repr(float(ti))] + [repr(float(s[i])) for s in shapes]) for i, ti in enumerate(t)]
        envelope_path = out_dir / "fig4_envelopes.csv"
        envelope_path.write_text("\n".join(lines) + "\n")
        paths.append(envelope_path)

    title, ylabel = TITLES[name]
    script = out_dir / f"{name}.gp"
    script.write_text(GNUPLOT.format(name=name, title=title, ylabel=ylabel, matrix=paths[0].name))
    paths.append(script)
    return paths
