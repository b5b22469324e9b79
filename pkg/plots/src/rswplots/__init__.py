"""Post-processing for rsw1d CSV outputs.

Turns the solver's documented CSV files (see SCHEMA.md at the repository
root) into figures and markdown tables.  This package never recomputes any
physics: it is a pure reader of those schemas, so any numeric discrepancy
in a figure is an upstream problem.

Three plot kinds are provided:

- ``steady``      -- E_inf(t) on a log scale, one curve per diag.csv;
- ``convergence`` -- log-log L1 error vs N with slope-1 and slope-2
                     reference lines, plus a markdown error/rate table;
- ``snapshot``    -- free surface h+z over the topography, discharge hu
                     and transverse velocity v from one snapshot CSV.
"""

import argparse
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

__all__ = [
    "SchemaError", "read_csv_columns", "plot_steady_distance",
    "render_convergence", "convergence_markdown", "plot_snapshot", "main",
]


class SchemaError(ValueError):
    """An input file does not match the documented CSV schema."""


def read_csv_columns(path, required=()) -> dict[str, np.ndarray]:
    """Read a headered CSV into a column dict, checking required columns.

    Empty fields (the blank first-row rate entries of convergence tables)
    come back as nan.
    """
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"{path}: no such file")
    with open(path) as fh:
        header = fh.readline().strip()
        has_rows = bool(fh.readline().strip())
    if not header:
        raise SchemaError(f"{path}: empty file")
    if not has_rows:
        raise SchemaError(f"{path}: no data rows")
    names = header.split(",")
    data = np.genfromtxt(path, delimiter=",", skip_header=1,
                         ndmin=2, dtype=float)
    if data.shape[1] != len(names):
        raise SchemaError(
            f"{path}: {data.shape[1]} columns of data under "
            f"{len(names)} header names")
    cols = {name: data[:, j] for j, name in enumerate(names)}
    for name in required:
        if name not in cols:
            raise SchemaError(f"{path}: missing column {name!r}")
    return cols


# --- steady-state distance -------------------------------------------------

def plot_steady_distance(diag_paths, out_path):
    """E_inf versus time on a log scale, one curve per diagnostics file."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for path in diag_paths:
        cols = read_csv_columns(path, required=("t", "E_inf"))
        label = Path(path).parent.name or Path(path).stem
        ax.semilogy(cols["t"], np.maximum(cols["E_inf"], 1e-300),
                    label=label)
    ax.set_xlabel("t")
    ax.set_ylabel(r"$E_\infty$")
    ax.set_title("Distance to the local steady state")
    ax.grid(True, which="both", alpha=0.3)
    if len(diag_paths) > 1:
        ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


# --- convergence tables ----------------------------------------------------

_CONV_VARS = ("h", "hu", "hv")


def _read_convergence(path):
    required = ["N"]
    for v in _CONV_VARS:
        required += [f"{v}_error", f"{v}_rate"]
    return read_csv_columns(path, required=required)


def convergence_markdown(path) -> str:
    """Markdown table mirroring a convergence CSV.

    Errors are quoted in scientific notation with 3 significant digits,
    rates with 2 decimals; absent rates (first row, all-zero variables)
    show as a dash.
    """
    cols = _read_convergence(path)
    header = ["N"]
    for v in _CONV_VARS:
        header += [f"{v} error", f"{v} rate"]
    lines = ["| " + " | ".join(header) + " |",
             "|" + "---|" * len(header)]
    for k in range(len(cols["N"])):
        row = [str(int(cols["N"][k]))]
        for v in _CONV_VARS:
            row.append(f"{cols[f'{v}_error'][k]:.2e}")
            rate = cols[f"{v}_rate"][k]
            row.append("--" if np.isnan(rate) else f"{rate:.2f}")
        lines.append("| " + " | ".join(row) + " |")
    return "\n".join(lines) + "\n"


def render_convergence(csv_path, out_path):
    """Log-log error plot plus a markdown table next to it.

    The table lands at ``out_path`` with its suffix replaced by ``.md``.
    With a single data row no fit is possible, so only the table is
    written and the returned figure path is None.
    """
    cols = _read_convergence(csv_path)
    table_path = Path(out_path).with_suffix(".md")
    table_path.write_text(convergence_markdown(csv_path))
    if len(cols["N"]) < 2:
        return None, table_path

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    n = cols["N"]
    for v, marker in zip(_CONV_VARS, "os^"):
        err = cols[f"{v}_error"]
        if np.all(err > 0):
            ax.loglog(n, err, marker=marker, label=v)
    anchor = max(np.max(cols[f"{v}_error"]) for v in _CONV_VARS)
    for slope, style in ((1, "--"), (2, ":")):
        ax.loglog(n, anchor * (n[0] / n) ** slope, style, color="gray",
                  label=f"slope {slope}")
    ax.set_xlabel("N")
    ax.set_ylabel("L1 error")
    ax.set_title("Convergence")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return Path(out_path), table_path


# --- snapshots ---------------------------------------------------------------

def plot_snapshot(snap_path, out_path):
    """Three panels from a snapshot: surface h+z over z, hu, and v."""
    cols = read_csv_columns(
        snap_path, required=("x", "h", "hu", "hv", "u", "v", "z"))
    x = cols["x"]
    fig, axes = plt.subplots(3, 1, figsize=(6.0, 7.5), sharex=True)
    axes[0].plot(x, cols["h"] + cols["z"], label="h + z")
    axes[0].fill_between(x, cols["z"], np.min(cols["z"]) - 0.05,
                         color="0.7", label="z")
    axes[0].set_ylabel("h + z")
    axes[0].legend()
    axes[1].plot(x, cols["hu"])
    axes[1].set_ylabel("hu")
    axes[2].plot(x, cols["v"])
    axes[2].set_ylabel("v")
    axes[2].set_xlabel("x")
    for ax in axes:
        ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


# --- command line ------------------------------------------------------------

def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plots",
        description="Render figures from rsw1d CSV outputs")
    parser.add_argument("kind", choices=("steady", "convergence", "snapshot"))
    parser.add_argument("inputs", nargs="+", type=Path)
    parser.add_argument("--out", required=True, type=Path)
    args = parser.parse_args(argv)

    try:
        if args.kind == "steady":
            plot_steady_distance(args.inputs, args.out)
        elif args.kind == "convergence":
            if len(args.inputs) != 1:
                parser.error("convergence takes exactly one CSV")
            render_convergence(args.inputs[0], args.out)
        else:
            if len(args.inputs) != 1:
                parser.error("snapshot takes exactly one CSV")
            plot_snapshot(args.inputs[0], args.out)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
