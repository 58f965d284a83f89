"""Command-line front end: ``pumpprobe run | validate | figure``.

Exit codes: 0 ok, 1 validation failure, 2 configuration error, 3 numerical error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import yaml
from pydantic import ValidationError

from .config import RunConfig, execute, load_config
from .dynamics import NumericalError
from .figures import FIGURES, make_figure
from .serialize import write_sweep
from .spectroscopy import Spectrum, peak_analysis
from .validation import run_suite

log = logging.getLogger("pumpprobe")

EXIT_OK, EXIT_VALIDATION, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


def _config_error(err: ValidationError | Exception) -> int:
    if isinstance(err, ValidationError):
        for e in err.errors():
            loc = ".".join(str(x) for x in e["loc"]) or "<root>"
            print(f"config error at {loc}: {e['msg']}", file=sys.stderr)
    else:
        print(f"config error: {err}", file=sys.stderr)
    return EXIT_CONFIG


def _overrides(cfg: RunConfig, args) -> RunConfig:
    update = {}
    if args.workers is not None:
        update["workers"] = args.workers
    if args.dt_fs is not None:
        log.warning("time step overridden: dt = %g fs", args.dt_fs)
        update["dt_fs"] = args.dt_fs
    if args.normalize is not None:
        update["normalize"] = args.normalize
    if args.out is not None:
        update["output"] = cfg.output.model_copy(update={"path": str(args.out)})
    # re-validate so overrides obey the same schema
    return RunConfig.model_validate({**cfg.model_dump(), **update})


def peak_summary(spectrum: Spectrum) -> str:
    peaks = [p for p in peak_analysis(spectrum) if abs(p.amplitude) >= 0.05 * max(abs(spectrum.values))]
    return " ".join(f"{p.energy:+.2f}meV:{p.amplitude:+.3f}" for p in peaks)


def cmd_run(args) -> int:
    try:
        cfg = _overrides(load_config(args.config), args)
    except ValidationError as err:
        return _config_error(err)
    except (OSError, json.JSONDecodeError, yaml.YAMLError) as err:
        return _config_error(err)
    try:
        result = execute(cfg)
    except (NumericalError, FloatingPointError, ValueError) as err:
        print(f"numerical error: {err}", file=sys.stderr)
        return EXIT_NUMERIC
    paths = write_sweep(result, cfg.output.path, cfg.stem, cfg.output.format)
    first = Spectrum(result.energies, result.values[0])
    print(
        f"{cfg.experiment}: {len(result.axis_values)} spectra, {result.axis_name}="
        f"{result.axis_values[0]:.4g} peaks [{peak_summary(first)}] -> {paths[0]}"
    )
    return EXIT_OK


def cmd_validate(args) -> int:
    dt = args.dt_fs * 1e-3 if args.dt_fs is not None else 1e-3
    if args.dt_fs is not None:
        log.warning("time step overridden: dt = %g fs", args.dt_fs)
    checks = run_suite(dt=dt, gamma=args.gamma)
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        print(f"{status} {c.name:<26} measured={c.measured:.3e} bound={c.bound:.1e}")
        for w in c.warnings:
            print(f"     warning: {w}")
    report = {"passed": all(c.passed for c in checks), "checks": [c.as_dict() for c in checks]}
    if args.out is not None:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "validation.json").write_text(json.dumps(report, indent=2))
    if args.json:
        print(json.dumps(report))
    return EXIT_OK if report["passed"] else EXIT_VALIDATION


def cmd_figure(args) -> int:
    out = args.out if args.out is not None else Path("figures")
    try:
        paths = make_figure(
            args.name, out, workers=args.workers,
            dt_fs=args.dt_fs, normalize=args.normalize,
        )
    except ValidationError as err:
        return _config_error(err)
    except (NumericalError, FloatingPointError) as err:
        print(f"numerical error: {err}", file=sys.stderr)
        return EXIT_NUMERIC
    for p in paths:
        print(p)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pumpprobe", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", type=Path, default=None, help="output directory")
        p.add_argument("--workers", type=int, default=None)
        p.add_argument("--dt-fs", type=float, default=None, help="override the RK4 step (fs)")
        p.add_argument("--normalize", choices=["reference", "global", "row", "none"], default=None)

    p = sub.add_parser("run", help="run an experiment from a config file")
    p.add_argument("--config", required=True, type=Path)
    common(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("validate", help="run the oracle suite")
    common(p)
    p.add_argument("--gamma", type=float, default=None, help="override the damping rate (1/ps)")
    p.add_argument("--json", action="store_true", help="print the report as JSON")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("figure", help="run a figure preset")
    p.add_argument("name", choices=FIGURES)
    common(p)
    p.set_defaults(func=cmd_figure)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
