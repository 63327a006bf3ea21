"""Render tracking, error, and rate-sweep figures from polytrack CSV exports.

This is a pure reader: it consumes the CSV schemas written by the simulation
and analysis commands (`t,err,x_*,xstar_*` traces, `compare.csv` with
per-algorithm `err_<name>` / `x_<name>_*` columns, and
`lambda,spectral_radius` sweeps), performs no computation of its own, and
never modifies its inputs.  Each invocation writes both an SVG and a 150 dpi
PNG next to the requested output path.

Usage:
    trackfig --input compare.csv --kind tracking --out fig_tracking.png
    trackfig --input compare.csv --kind error --out fig_error.png
    trackfig --input rate_samples.csv --kind rate-sweep --out fig_sweep.png
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

ERROR_FLOOR = 1e-16
KINDS = ("tracking", "error", "rate-sweep")


class RenderError(Exception):
    pass


@dataclass
class FigureSpec:
    input: Path
    kind: str
    out: Path
    xlabel: str = "t"
    ylabel: str | None = None
    log_scale: bool = True  # error plots only
    bound: float | None = None  # rate-sweep horizontal rule

    def __post_init__(self):
        self.input = Path(self.input)
        self.out = Path(self.out)
        if self.kind not in KINDS:
            raise RenderError(f"unknown figure kind {self.kind!r}; "
                              f"expected one of {', '.join(KINDS)}")


def load_columns(path: Path) -> dict[str, np.ndarray]:
    text = Path(path).read_text()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) < 2:
        raise RenderError(f"{path}: empty CSV (need a header and data rows)")
    header = lines[0].split(",")
    data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    if data.shape[1] != len(header):
        raise RenderError(f"{path}: ragged CSV rows")
    return {name: data[:, i] for i, name in enumerate(header)}


def _require_columns(cols: dict, needed: list[str], path: Path) -> None:
    missing = [c for c in needed if c not in cols]
    if missing:
        raise RenderError(
            f"{path}: missing column(s) {', '.join(missing)}; "
            f"available: {', '.join(cols)}"
        )


def _save(fig, out: Path) -> list[Path]:
    out.parent.mkdir(parents=True, exist_ok=True)
    stem = out.with_suffix("")
    paths = [stem.with_suffix(".svg"), stem.with_suffix(".png")]
    fig.savefig(paths[0])
    fig.savefig(paths[1], dpi=150)
    plt.close(fig)
    return paths


def render_tracking(spec: FigureSpec) -> dict[str, np.ndarray]:
    """Overlaid optimum and iterate trajectories; legend from column headers.

    Returns the plotted series keyed by column name.
    """
    cols = load_columns(spec.input)
    _require_columns(cols, ["t"], spec.input)
    xstar = [c for c in cols if c.startswith("xstar_")]
    iterates = [c for c in cols if c.startswith("x_") and not c.startswith("xstar_")]
    if not xstar:
        raise RenderError(f"{spec.input}: no xstar_* columns to plot")
    if not iterates:
        raise RenderError(f"{spec.input}: no iterate x_* columns to plot")
    t = cols["t"]
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    series: dict[str, np.ndarray] = {}
    for name in xstar:
        ax.plot(t, cols[name], "*", markersize=4, markevery=max(1, len(t) // 60),
                label=name, color="goldenrod", zorder=3)
        series[name] = cols[name]
    for name in iterates:
        ax.plot(t, cols[name], label=name, linewidth=1.2)
        series[name] = cols[name]
    ax.set_xlabel(spec.xlabel)
    ax.set_ylabel(spec.ylabel or "value")
    ax.legend(loc="best", fontsize=8)
    ax.grid(True, alpha=0.3)
    _save(fig, spec.out)
    return series


def render_error(spec: FigureSpec) -> dict[str, np.ndarray]:
    """Tracking-error curves on a logarithmic vertical axis.

    Geometric convergence appears as a straight line of slope log10(rate).
    Zero or negative values are clipped to 1e-16 and the clip is annotated.
    Returns the plotted (clipped) series keyed by column name.
    """
    cols = load_columns(spec.input)
    _require_columns(cols, ["t"], spec.input)
    err_cols = [c for c in cols if c == "err" or c.startswith("err_")]
    if not err_cols:
        raise RenderError(f"{spec.input}: no err or err_* columns to plot")
    t = cols["t"]
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    clipped_any = False
    series: dict[str, np.ndarray] = {}
    for name in err_cols:
        vals = cols[name]
        clipped = np.maximum(vals, ERROR_FLOOR)
        clipped_any |= bool(np.any(vals < ERROR_FLOOR))
        ax.plot(t, clipped, label=name, linewidth=1.2)
        series[name] = clipped
    if spec.log_scale:
        ax.set_yscale("log")
    ax.set_xlabel(spec.xlabel)
    ax.set_ylabel(spec.ylabel or "tracking error")
    ax.legend(loc="best", fontsize=8)
    ax.grid(True, which="both", alpha=0.3)
    if clipped_any:
        fig.text(0.01, 0.01, f"values below {ERROR_FLOOR:g} clipped",
                 fontsize=7, color="gray")
    _save(fig, spec.out)
    return series


def render_rate_sweep(spec: FigureSpec) -> dict[str, np.ndarray]:
    """Spectral radius across the curvature sector, with the design-rate
    bound drawn as a horizontal rule when available.

    The bound comes from spec.bound or, failing that, from a rate.json file
    sitting next to the input CSV.
    """
    cols = load_columns(spec.input)
    _require_columns(cols, ["lambda", "spectral_radius"], spec.input)
    bound = spec.bound
    if bound is None:
        side = spec.input.parent / "rate.json"
        if side.exists():
            doc = json.loads(side.read_text())
            bound = doc.get("bound")
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    ax.plot(cols["lambda"], cols["spectral_radius"], linewidth=1.2,
            label="spectral_radius")
    if bound is not None:
        ax.axhline(bound, color="crimson", linestyle="--", linewidth=1.0,
                   label=f"rate bound {bound:.6g}")
    ax.set_xlabel("lambda")
    ax.set_ylabel(spec.ylabel or "spectral radius")
    ax.legend(loc="best", fontsize=8)
    ax.grid(True, alpha=0.3)
    _save(fig, spec.out)
    return {"lambda": cols["lambda"], "spectral_radius": cols["spectral_radius"]}


RENDERERS = {
    "tracking": render_tracking,
    "error": render_error,
    "rate-sweep": render_rate_sweep,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="trackfig",
        description="Render figures from polytrack CSV exports.",
    )
    parser.add_argument("--input", required=True, help="input CSV path")
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument("--out", required=True,
                        help="output image path; .svg and .png are written")
    parser.add_argument("--xlabel", default="t")
    parser.add_argument("--ylabel", default=None)
    parser.add_argument("--bound", type=float, default=None,
                        help="horizontal rule for rate-sweep figures")
    parser.add_argument("--linear", action="store_true",
                        help="linear vertical axis for error figures")
    args = parser.parse_args(argv)
    try:
        spec = FigureSpec(input=args.input, kind=args.kind, out=Path(args.out),
                          xlabel=args.xlabel, ylabel=args.ylabel,
                          log_scale=not args.linear, bound=args.bound)
        RENDERERS[spec.kind](spec)
    except (RenderError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
