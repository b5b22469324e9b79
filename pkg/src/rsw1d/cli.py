"""Command-line front end: config parsing, runs and file outputs.

Subcommands:

    rsw1d run <config-path> [--out DIR]
    rsw1d converge <case> <order> <N1,N2,...> [--out DIR]
    rsw1d cases

Config files are flat ``key = value`` lines with ``#`` comments; see
SCHEMA.md for the keys and the output file formats.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import cases as cases_mod
from . import scheme
from .cases import (BUILTIN_CASES, TestCase, convergence_rates,
                    l1_space_error, l1_time_error, make_snapshot)
from .core import SolverParams, State, build_mesh


@dataclass
class RunConfig:
    case: str
    order: int = 1
    n_cells: int | None = None
    t_max: float | None = None
    cfl: float | None = None
    g: float | None = None
    f: float | None = None
    eps_cutoff: float | None = None
    eq_tol: float | None = None
    speed_floor: float | None = None
    snapshot_every: int = 0
    out_dir: str = "."
    # custom-case fields
    x_min: float | None = None
    x_max: float | None = None
    bc: str | None = None
    ic_preset: str | None = None


_FIELD_TYPES = {
    "case": str, "order": int, "n_cells": int, "t_max": float,
    "cfl": float, "g": float, "f": float, "eps_cutoff": float,
    "eq_tol": float, "speed_floor": float, "snapshot_every": int,
    "out_dir": str, "x_min": float, "x_max": float, "bc": str,
    "ic_preset": str,
}


class ConfigError(ValueError):
    pass


def parse_config(text: str) -> RunConfig:
    """Parse key = value lines; unknown keys and bad values are rejected."""
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in _FIELD_TYPES:
            raise ConfigError(
                f"line {lineno}: unknown key {key!r}; valid keys: "
                + ", ".join(sorted(_FIELD_TYPES)))
        try:
            values[key] = _FIELD_TYPES[key](val)
        except ValueError:
            raise ConfigError(
                f"line {lineno}: cannot parse {val!r} as "
                f"{_FIELD_TYPES[key].__name__} for key {key!r}") from None
    if "case" not in values:
        raise ConfigError("missing required key 'case'")
    cfg = RunConfig(**values)
    if cfg.case not in BUILTIN_CASES and cfg.case != "custom":
        raise ConfigError(
            f"unknown case {cfg.case!r}; valid values: "
            + ", ".join(sorted(BUILTIN_CASES)) + ", custom")
    if cfg.order not in (1, 2):
        raise ConfigError("order must be 1 or 2")
    if cfg.n_cells is not None and cfg.n_cells < 2:
        raise ConfigError("n_cells must be at least 2")
    if cfg.snapshot_every < 0:
        raise ConfigError("snapshot_every must be >= 0")
    return cfg


_IC_PRESETS = {
    "uniform": lambda x: (np.ones_like(x), np.zeros_like(x),
                          np.zeros_like(x)),
    "dam_break": lambda x: (np.where(x < 0.5 * (x[0] + x[-1]), 2.0, 1.0),
                            np.zeros_like(x), np.zeros_like(x)),
}

_BC_KINDS = {
    "periodic": scheme.periodic,
    "transmissive": scheme.transmissive,
}


def _custom_case(cfg: RunConfig) -> TestCase:
    if cfg.x_min is None or cfg.x_max is None:
        raise ConfigError("custom case needs x_min and x_max")
    if cfg.ic_preset not in _IC_PRESETS:
        raise ConfigError(
            f"unknown ic_preset {cfg.ic_preset!r}; valid values: "
            + ", ".join(sorted(_IC_PRESETS)))
    bc_kind = cfg.bc or "transmissive"
    if bc_kind not in _BC_KINDS:
        raise ConfigError(
            f"unknown bc {bc_kind!r}; valid values: "
            + ", ".join(sorted(_BC_KINDS)))
    return TestCase(
        "custom", cfg.x_min, cfg.x_max, cfg.n_cells or 100,
        SolverParams(g=cfg.g if cfg.g is not None else 9.81,
                     f=cfg.f if cfg.f is not None else 0.0),
        lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        _IC_PRESETS[cfg.ic_preset], _BC_KINDS[bc_kind](),
        cfg.t_max if cfg.t_max is not None else 1.0)


def resolve_case(cfg: RunConfig) -> tuple[TestCase, SolverParams]:
    """The test case and parameters selected by a config, overrides applied."""
    case = _custom_case(cfg) if cfg.case == "custom" \
        else BUILTIN_CASES[cfg.case]()
    overrides = {k: getattr(cfg, k) for k in
                 ("g", "f", "cfl", "eps_cutoff", "eq_tol", "speed_floor")
                 if getattr(cfg, k) is not None}
    params = dataclasses.replace(case.params, **overrides)
    if cfg.n_cells is not None:
        case = dataclasses.replace(case, n_cells=cfg.n_cells)
    if cfg.t_max is not None:
        case = dataclasses.replace(case, t_max=cfg.t_max)
    return dataclasses.replace(case, params=params), params


def _fmt(x: float) -> str:
    return repr(float(x))


def write_snapshot(path: Path, snap: scheme.FieldSnapshot):
    """Columns x, h, hu, hv, u, v, z; round-trip exact decimal floats."""
    w = snap.states
    with open(path, "w") as fh:
        fh.write("x,h,hu,hv,u,v,z\n")
        for i in range(snap.mesh.n_cells):
            fh.write(",".join(_fmt(v) for v in (
                snap.mesh.centers[i], w.h[i], w.hu[i], w.hv[i],
                w.hu[i] / w.h[i], w.hv[i] / w.h[i], snap.mesh.z[i])) + "\n")


def read_snapshot(path) -> dict[str, np.ndarray]:
    """Read a snapshot CSV back as a column dict."""
    data = np.genfromtxt(path, delimiter=",", names=True)
    data = np.atleast_1d(data)
    return {name: data[name].copy() for name in data.dtype.names}


def run_command(cfg: RunConfig, out_dir: str | None = None) -> int:
    """Execute a run and write snapshots, diagnostics and a report."""
    out = Path(out_dir if out_dir is not None else cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    case, params = resolve_case(cfg)
    t0 = time.perf_counter()
    try:
        report = cases_mod.run_case(case, cfg.order,
                                    snapshot_every=cfg.snapshot_every)
    except FloatingPointError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    files = []
    stride = cfg.snapshot_every or 0
    for k, snap in enumerate(report.snapshots):
        step = k * stride if (stride and k < len(report.snapshots) - 1) \
            else (0 if k == 0 else report.steps)
        name = f"snap_{step:06d}.csv"
        write_snapshot(out / name, snap)
        files.append(name)
    with open(out / "diag.csv", "w") as fh:
        fh.write("t,dt,E_inf,mass\n")
        for row in zip(report.times, report.dts, report.e_inf, report.mass):
            fh.write(",".join(_fmt(v) for v in row) + "\n")
    with open(out / "history.csv", "w") as fh:
        fh.write("t,h,hu,hv\n")
        for row in zip(report.times, report.probe.h, report.probe.hu,
                       report.probe.hv):
            fh.write(",".join(_fmt(v) for v in row) + "\n")
    meta = {
        "config": {k: v for k, v in dataclasses.asdict(cfg).items()
                   if v is not None},
        "params": dataclasses.asdict(params),
        "steps": report.steps,
        "final_time": float(report.final.time),
        "final_E_inf": float(report.e_inf[-1]),
        "wall_time_s": time.perf_counter() - t0,
        "snapshots": files,
        "probe_cell": report.probe_cell,
    }
    with open(out / "report.json", "w") as fh:
        json.dump(meta, fh, indent=2)
        fh.write("\n")
    return 0


def convergence_command(case_name: str, order: int, resolutions,
                        out_dir: str = ".",
                        t_max: float | None = None) -> Path:
    """Run a case at doubling resolutions and tabulate L1 errors and rates.

    Steady cases are measured in space against the initial profile; the
    uniform oscillation is measured in time against its exact solution.
    """
    resolutions = [int(n) for n in resolutions]
    if len(resolutions) < 1:
        raise ConfigError("need at least one resolution")
    for a, b in zip(resolutions, resolutions[1:]):
        if b != 2 * a:
            raise ConfigError(
                f"resolutions must double: got {b} after {a}")
    if case_name not in BUILTIN_CASES:
        raise ConfigError(f"unknown case {case_name!r}")
    case = BUILTIN_CASES[case_name]()
    variables = ("h", "hu", "hv")
    errors: dict[str, list[float]] = {v: [] for v in variables}
    for n in resolutions:
        report = cases_mod.run_case(case, order, n_cells=n, t_max=t_max)
        if case.exact is not None:
            x = report.final.mesh.centers[report.probe_cell]
            err = l1_time_error(report.times, report.probe, case.exact, x)
        else:
            err = l1_space_error(report.final, case.initial)
        for v in variables:
            errors[v].append(err[v])
    def safe_rates(errs):
        # a variable the case never perturbs has identically zero error;
        # report its rates as nan instead of failing the whole table
        try:
            return convergence_rates(errs)
        except ValueError:
            return [float("nan")] * (len(errs) - 1)

    rates = {v: safe_rates(errors[v]) if len(resolutions) > 1 else []
             for v in variables}

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"convergence_{case_name}_order{order}.csv"
    header = ["N"]
    for v in variables:
        header += [f"{v}_error", f"{v}_rate"]
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for k, n in enumerate(resolutions):
            row = [str(n)]
            for v in variables:
                row.append(_fmt(errors[v][k]))
                row.append(_fmt(rates[v][k - 1]) if k > 0 else "")
            fh.write(",".join(row) + "\n")
    return path


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="rsw1d",
        description="1D rotating shallow-water finite-volume solver")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a config file")
    p_run.add_argument("config", type=Path)
    p_run.add_argument("--out", default=None)

    p_conv = sub.add_parser("converge", help="convergence table for a case")
    p_conv.add_argument("case")
    p_conv.add_argument("order", type=int, choices=(1, 2))
    p_conv.add_argument("resolutions",
                        help="comma-separated doubling list, e.g. 200,400,800")
    p_conv.add_argument("--out", default=".")
    p_conv.add_argument("--t-max", type=float, default=None)

    sub.add_parser("cases", help="list built-in cases")

    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            cfg = parse_config(args.config.read_text())
            return run_command(cfg, out_dir=args.out)
        if args.command == "converge":
            path = convergence_command(
                args.case, args.order, args.resolutions.split(","),
                out_dir=args.out, t_max=args.t_max)
            print(path)
            return 0
        if args.command == "cases":
            for name in sorted(BUILTIN_CASES):
                print(name)
            return 0
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
