from pathlib import Path

import numpy as np

from ...utils.artifacts import write_csv, write_metadata
from ...utils.protocols import multi_cavity_protocol, multi_cavity_tau_scan
from ..dependencies import RunContext, get_catalyst, get_cavity

CSV_NAME = "multicavity.csv"
HEADER = ("n_cavities", "fidelity")
SCAN_CSV_NAME = "multicavity_vs_tau.csv"
SCAN_HEADER = ("tau", "n_cavities", "fidelity")


def run(context: RunContext) -> Path:
    """Fidelity with the product of single-run outputs for 1..n_cavities cavities."""
    config = context.config
    if config.tau_grid is not None:
        return run_tau_scan(context, config.tau_grid.points())
    cavity = get_cavity(context)
    atom = get_catalyst(context, cavity, config.tau)
    results = [
        multi_cavity_protocol(cavity, config.params, config.tau, n, atom=atom, max_joint_dim=config.max_joint_dim)
        for n in range(1, config.n_cavities + 1)
    ]
    context.resolved["max_marginal_distance"] = repr(max(result.max_marginal_distance for result in results))

    path = context.output_dir / CSV_NAME
    write_csv(path, HEADER, ((result.n_cavities, result.fidelity) for result in results))
    write_metadata(context.output_dir, config, context.resolved)
    return path


def run_tau_scan(context: RunContext, taus: np.ndarray) -> Path:
    """Fidelity over tau_grid for 2..n_cavities cavities; best tau per N goes to run.env."""
    config = context.config
    cavity = get_cavity(context)
    rows = []
    for n in range(2, config.n_cavities + 1):
        results = multi_cavity_tau_scan(
            cavity, config.params, taus, n, max_joint_dim=config.max_joint_dim, threads=context.threads
        )
        feasible = [result for result in results if result.feasible]
        if feasible:
            best = max(feasible, key=lambda result: result.fidelity)
            context.resolved[f"best_tau_n{n}"] = repr(best.tau)
            context.resolved[f"best_fidelity_n{n}"] = repr(float(best.fidelity))
        rows.extend((result.tau, result.n_cavities, result.fidelity) for result in results)

    path = context.output_dir / SCAN_CSV_NAME
    write_csv(path, SCAN_HEADER, rows)
    write_metadata(context.output_dir, config, context.resolved)
    return path
