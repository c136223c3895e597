"""Plot-data files and their rendered figures.

Every figure is written twice: the delimited data (``.csv``) that fully
determines it, and a PNG rendered from that data with matplotlib's Agg
backend.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Sequence

import numpy as np

from .energy import interval_energy_profile
from .optimizer import MinimizerResult
from .potential import Potential


def _write_csv(path: Path, header: Sequence[str], rows) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return path


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def profile_rows(p: Potential, result: MinimizerResult, n: int = 401):
    """h(a) and its slope g(a+m) - g(a) on [alpha - m, alpha + m]."""
    m = result.mass
    a_grid = np.linspace(result.representative_alpha - m, result.representative_alpha + m, n)
    return [(float(a), interval_energy_profile(p, m, float(a)), p.eval(a + m) - p.eval(a)) for a in a_grid]


def write_profile(p: Potential, result: MinimizerResult, out_dir, stem: str = "profile") -> list:
    out_dir = Path(out_dir)
    rows = profile_rows(p, result)
    csv_path = _write_csv(out_dir / f"{stem}.csv", ["a", "h", "slope"], rows)

    plt = _pyplot()
    a, h, s = (np.array(col) for col in zip(*rows))
    fig, (ax1, ax2) = plt.subplots(2, 1, sharex=True, figsize=(6, 5))
    ax1.plot(a, h, color="k", lw=1.5)
    ax1.axvspan(result.alpha_lo, result.alpha_hi, color="tab:blue", alpha=0.25, lw=0)
    ax1.axvline(result.representative_alpha, color="tab:blue", ls="--", lw=1)
    ax1.set_ylabel("potential energy of (a, a+m)")
    ax2.plot(a, s, color="tab:red", lw=1.2)
    ax2.axhline(0.0, color="0.5", lw=0.8)
    ax2.axvline(result.representative_alpha, color="tab:blue", ls="--", lw=1)
    ax2.set_ylabel("g(a+m) - g(a)")
    ax2.set_xlabel("translation a")
    ax1.set_title(f"m = {result.mass:g}, alpha = {result.representative_alpha:.6g}")
    fig.tight_layout()
    png_path = out_dir / f"{stem}.png"
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    return [csv_path, png_path]


SWEEP_COLUMNS = ["mass", "alpha", "alpha_lo", "alpha_hi", "lo", "hi", "surface", "potential", "total", "residual"]


def sweep_row(r: MinimizerResult) -> list:
    iv = r.minimizer.intervals[0]
    return [r.mass, r.representative_alpha, r.alpha_lo, r.alpha_hi, iv.lo, iv.hi,
            r.energy.surface, r.energy.potential, r.energy.total, r.stationarity_residual]


def write_sweep(results: Sequence[MinimizerResult], out_dir, stem: str = "sweep") -> list:
    out_dir = Path(out_dir)
    csv_path = _write_csv(out_dir / f"{stem}.csv", SWEEP_COLUMNS, [sweep_row(r) for r in results])

    plt = _pyplot()
    ms = np.array([r.mass for r in results])
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.6))
    ax1.plot(ms, [r.energy.total for r in results], "o-", color="k")
    ax1.set_xlabel("mass m")
    ax1.set_ylabel("minimal free energy")
    ax2.fill_between(ms, [r.alpha_lo for r in results], [r.alpha_hi for r in results],
                     color="tab:blue", alpha=0.25, lw=0)
    ax2.plot(ms, [r.representative_alpha for r in results], "o-", color="tab:blue")
    ax2.plot(ms, -ms, ":", color="0.5", lw=1)
    ax2.axhline(0.0, color="0.5", lw=0.8)
    ax2.set_xlabel("mass m")
    ax2.set_ylabel("optimal translation alpha")
    fig.tight_layout()
    png_path = out_dir / f"{stem}.png"
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    return [csv_path, png_path]
