"""Render CSV output of the `pce` command line as figures.

    python3 demos/plot_sweeps.py static.csv dynamic.csv heatmap.csv

Needs matplotlib, which the library itself does not depend on.
"""

import csv
import sys
from pathlib import Path

import matplotlib.pyplot as plt
import numpy as np


def load(path):
    lines = [x for x in Path(path).read_text().splitlines() if not x.startswith("#")]
    rows = list(csv.DictReader(lines))
    return {k: np.array([float(r[k]) if r[k] not in ("NA", "true", "false") else np.nan for r in rows])
            for k in rows[0] if k not in ("artifact_version", "constants_version", "log_base", "flags")}


def plot_static(t, ax):
    for d in np.unique(t["d_m"]):
        sel = t["d_m"] == d
        ax.loglog(t["omega_rad_s"][sel], t["S_C"][sel], "--", label=f"C, d={d:.0e} m")
        ax.loglog(t["omega_rad_s"][sel], t["S_CD"][sel], label=f"C+D, d={d:.0e} m")
    ax.set(xlabel="omega (rad/s)", ylabel="S (bits)")
    ax.legend(fontsize=7)


def plot_dynamic(t, ax):
    ax.plot(t["t_s"] * 1e9, t["S_C"], "--", label="C")
    ax.plot(t["t_s"] * 1e9, t["S_CD"], label="C+D")
    ax.set(xlabel="t (ns)", ylabel="S (bits)")
    ax.legend()


def plot_heatmap(t, ax):
    ds, xis = np.unique(t["d_m"]), np.unique(t["xi"])
    grid = t["S_max_CD"].reshape(ds.size, xis.size)
    mesh = ax.pcolormesh(ds, xis, np.log10(grid.T + 1e-300), shading="auto", vmin=-12)
    ax.plot(ds, t["xi_p"][:: xis.size], "c")
    ax.plot(ds, t["xi_x"][:: xis.size], "c")
    ax.plot(ds, t["xi_dip"][:: xis.size], "g")
    ax.set(xscale="log", xlabel="d (m)", ylabel="xi", ylim=(xis[0], xis[-1]))
    plt.colorbar(mesh, ax=ax, label="log10 S_max")


def main(paths):
    fig, axes = plt.subplots(1, len(paths), figsize=(5 * len(paths), 4), squeeze=False)
    for path, ax in zip(paths, axes[0]):
        t = load(path)
        if "omega_rad_s" in t and "S_C" in t:
            plot_static(t, ax)
        elif "t_s" in t:
            plot_dynamic(t, ax)
        elif "S_max_CD" in t:
            plot_heatmap(t, ax)
    fig.tight_layout()
    fig.savefig("sweeps.png", dpi=150)


if __name__ == "__main__":
    main(sys.argv[1:])
