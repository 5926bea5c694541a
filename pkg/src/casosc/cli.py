"""Command line interface: config-driven sweeps with delimited output.

    casosc <tm3|te3|bath|dipole> --config cfg.json [--out table.csv]
           [--format csv|json] [--plot figure.png]
    casosc verify [--quick]

Failures print a single-line JSON error record to stderr and exit
nonzero (2 for configuration problems, 1 for computation problems).
Output for a fixed config is byte-identical between runs.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

from . import dipole as dipole_field
from . import models, thermo, verify
from .config import ConfigError, RunConfig, parse_config, sweep_grid
from .models import StabilityError
from .thermo import ConvergenceError


def _fmt(value: float) -> str:
    return "%.12g" % (value + 0.0)  # +0.0 folds negative zero


def _round12(value: float) -> float:
    return float(_fmt(value))


def build_model(config: RunConfig) -> models.OscillatorModel:
    """The oscillator model requested by a tm3/te3/bath config."""
    block = config.model
    if config.command in ("tm3", "te3"):
        factory = models.tm3 if config.command == "tm3" else models.te3
        return factory(block["a1"], block["a2"], block["a3"], block["c"])
    return models.uniform_bath(block["kind"] + "_bath", block["a1"], block["a2"],
                               block["N"], block["k_max"], block["coupling"])


def _thermo_tables(config: RunConfig):
    model = build_model(config)
    curve = thermo.sweep(model, sweep_grid(config),
                         rel_tol=config.tolerances["rel_tol"],
                         n_max_cap=config.tolerances["n_max_cap"])
    csv_lines = ["T,F,U,S"]
    csv_lines += [",".join(_fmt(v) for v in (row.T, row.F, row.U, row.S))
                  for row in curve.rows]
    payload = {
        "model": curve.model_descriptor,
        "rows": [{"T": _round12(row.T), "F": _round12(row.F),
                  "U": _round12(row.U), "S": _round12(row.S)} for row in curve.rows],
        "negative_entropy_intervals": [[_round12(iv.t_low), _round12(iv.t_high)]
                                       for iv in curve.intervals],
    }
    return csv_lines, payload, curve


def _dipole_tables(config: RunConfig):
    block, temperature = config.model, config.sweep["temperature"]
    rs = sweep_grid(config)
    fs = [dipole_field.pair_free_energy(
        dipole_field.DipolePair(block["g1"], block["g2"], block["a1"], block["a2"], r),
        temperature,
        rel_tol=config.tolerances["rel_tol"],
        n_max_cap=config.tolerances["n_max_cap"]) for r in rs]
    csv_lines = ["r,F"] + [f"{_fmt(r)},{_fmt(f)}" for r, f in zip(rs, fs)]
    payload = {
        "model": {"kind": "dipole", "g1": block["g1"], "g2": block["g2"],
                  "a1": block["a1"], "a2": block["a2"], "temperature": temperature},
        "rows": [{"r": _round12(r), "F": _round12(f)} for r, f in zip(rs, fs)],
        "negative_entropy_intervals": [],
    }
    return csv_lines, payload, (rs, fs, temperature)


def run(config: RunConfig) -> int:
    """Execute a parsed config: compute, emit the table, render any plot."""
    if config.command == "dipole":
        csv_lines, payload, plot_data = _dipole_tables(config)
    else:
        csv_lines, payload, plot_data = _thermo_tables(config)
    if config.output["format"] == "json":
        text = json.dumps(payload, indent=2) + "\n"
    else:
        text = "\n".join(csv_lines) + "\n"
    path = config.output["path"]
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    plot_path = config.output["plot"]
    if plot_path is not None:
        from . import plotting  # deferred: pulls in matplotlib

        if config.command == "dipole":
            plotting.render_dipole_plot(*plot_data, plot_path)
        else:
            plotting.render_thermo_plot(plot_data, plot_path,
                                        log_t=config.sweep["spacing"] == "log")
    return 0


def run_verify(quick: bool) -> int:
    results = verify.run_all(quick)
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        sys.stdout.write(f"[{result.number:2d}] {status}  {result.name}: {result.detail}\n")
    passed = sum(r.passed for r in results)
    sys.stdout.write(f"result: {passed}/{len(results)} checks passed\n")
    sys.stdout.flush()
    return 0 if passed == len(results) else 1


def _error(kind: str, message: str, key: str | None = None) -> None:
    record = {"error": kind, "message": message}
    if key:
        record["key"] = key
    sys.stderr.write(json.dumps(record) + "\n")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="casosc",
        description="interaction thermodynamics of mediated oscillator pairs")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, blurb in (("tm3", "coordinate-coupled pair, one mediator"),
                        ("te3", "momentum-coupled pair, one mediator"),
                        ("bath", "pair coupled through a mediator ladder"),
                        ("dipole", "retarded dipole pair, separation sweep")):
        cmd = sub.add_parser(name, help=blurb)
        cmd.add_argument("--config", help="JSON config file (defaults apply if omitted)")
        cmd.add_argument("--out", help="write the table here instead of stdout")
        cmd.add_argument("--format", choices=("csv", "json"), help="table format")
        cmd.add_argument("--plot", help="also render a figure to this image path")
    ver = sub.add_parser("verify", help="run the acceptance checks and print a table")
    ver.add_argument("--quick", action="store_true", help="smaller grids, same checks")
    args = parser.parse_args(argv)

    if args.command == "verify":
        return run_verify(args.quick)
    try:
        text = ""
        if args.config is not None:
            try:
                with open(args.config, encoding="utf-8") as handle:
                    text = handle.read()
            except OSError as exc:
                raise ConfigError("", f"cannot read config file: {exc}") from None
        config = parse_config(text, args.command)
        output = dict(config.output)
        if args.out is not None:
            output["path"] = args.out
        if args.format is not None:
            output["format"] = args.format
        if args.plot is not None:
            output["plot"] = args.plot
        config = dataclasses.replace(config, output=output)
    except ConfigError as exc:
        _error("config", str(exc), exc.key)
        return 2
    try:
        return run(config)
    except StabilityError as exc:
        _error("stability", str(exc))
        return 1
    except ConvergenceError as exc:
        _error("convergence", str(exc))
        return 1
    except (ValueError, RuntimeError, OSError) as exc:
        _error("compute", str(exc))
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
