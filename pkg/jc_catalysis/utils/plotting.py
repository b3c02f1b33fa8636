"""
Figures rendered from the emitted CSV files only.
"""
import csv
import logging
from pathlib import Path
from typing import Dict, List

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .errors import IoError  # noqa: E402

logger = logging.getLogger(__name__)


def read_columns(path: Path) -> Dict[str, np.ndarray]:
    try:
        with path.open(newline="") as handle:
            rows = list(csv.reader(handle))
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    header, body = rows[0], rows[1:]
    columns: Dict[str, List[float]] = {name: [] for name in header}
    for row in body:
        for name, cell in zip(header, row):
            if cell in ("true", "false"):
                columns[name].append(1.0 if cell == "true" else 0.0)
            else:
                columns[name].append(float(cell) if cell else np.nan)
    return {name: np.array(values) for name, values in columns.items()}


def _wigner(ax, columns):
    x, p, w = columns["x"], columns["p"], columns["w"]
    xs, ps = np.unique(x), np.unique(p)
    grid = w.reshape(len(xs), len(ps))
    limit = np.max(np.abs(grid))
    mesh = ax.pcolormesh(xs, ps, grid.T, cmap="RdBu_r", vmin=-limit, vmax=limit, shading="auto")
    ax.figure.colorbar(mesh, ax=ax, label="W(x, p)")
    ax.set_xlabel("x")
    ax.set_ylabel("p")


def _catalytic_set(ax, columns):
    feasible = columns["feasible"] > 0
    y = 2 * columns["im_r"][feasible]
    z = 2 * columns["q"][feasible] - 1
    values = columns["g2"][feasible]
    nonclassical = values < 1
    ax.scatter(y[~nonclassical], z[~nonclassical], s=2, color="0.7")
    points = ax.scatter(y[nonclassical], z[nonclassical], s=3, c=values[nonclassical], cmap="viridis")
    if nonclassical.any():
        ax.figure.colorbar(points, ax=ax, label="g2")
    ax.add_patch(plt.Circle((0, 0), 1, fill=False, color="k", lw=0.5))
    ax.set_aspect("equal")
    ax.set_xlabel("y")
    ax.set_ylabel("z")


def _multicavity_vs_tau(ax, columns):
    for n in np.unique(columns["n_cavities"]):
        rows = columns["n_cavities"] == n
        ax.plot(columns["tau"][rows], columns["fidelity"][rows], marker=".", label=f"N={int(n)}")
    ax.set_xlabel("tau")
    ax.set_ylabel("fidelity")
    ax.legend()


def _lines(x_name: str, y_names: List[str]):
    def draw(ax, columns):
        for name in y_names:
            ax.plot(columns[x_name], columns[name], label=name)
        ax.set_xlabel(x_name)
        ax.legend()

    return draw


PLOTTERS = {
    "g2_vs_t.csv": _lines("t", ["g2", "delta"]),
    "wln_vs_t.csv": _lines("t", ["wln", "delta"]),
    "squeezing.csv": _lines("t", ["xi", "delta"]),
    "scan_alpha.csv": _lines("alpha", ["min_g2"]),
    "scan_alpha_xi.csv": _lines("alpha", ["min_xi"]),
    "dissipative.csv": _lines("tau", ["wln_open", "g2_open", "wln_closed", "g2_closed"]),
    "multicavity.csv": _lines("n_cavities", ["fidelity"]),
    "multicavity_vs_tau.csv": _multicavity_vs_tau,
    "wigner.csv": _wigner,
    "catalytic_set.csv": _catalytic_set,
}


def plot_csv(path: Path) -> Path:
    draw = PLOTTERS.get(path.name)
    if draw is None:
        raise IoError(f"no plot defined for {path.name}")
    columns = read_columns(path)
    figure, ax = plt.subplots(figsize=(6, 4))
    draw(ax, columns)
    figure.tight_layout()
    target = path.with_suffix(".png")
    try:
        figure.savefig(target, dpi=150)
    except OSError as exc:
        raise IoError(f"cannot write {target}: {exc}") from exc
    finally:
        plt.close(figure)
    logger.info("plotted %s", target)
    return target
