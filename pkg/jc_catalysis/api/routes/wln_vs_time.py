from pathlib import Path

from ...utils.artifacts import write_csv, write_metadata
from ...utils.protocols import scan_wln_vs_time
from ..dependencies import (
    RunContext,
    get_catalyst,
    get_catalytic_time,
    get_cavity,
    get_time_grid,
    get_wigner_grid,
)

CSV_NAME = "wln_vs_t.csv"
HEADER = ("t", "wln", "delta")


def run(context: RunContext) -> Path:
    config = context.config
    cavity = get_cavity(context)
    tau = get_catalytic_time(context, cavity)
    atom = get_catalyst(context, cavity, tau)
    samples = scan_wln_vs_time(
        cavity,
        config.params,
        get_time_grid(context, tau),
        atom=atom,
        grid=get_wigner_grid(context),
        grid_points=config.grid.points,
        threads=context.threads,
    )

    path = context.output_dir / CSV_NAME
    write_csv(path, HEADER, ((s.t, s.wln, s.delta) for s in samples))
    write_metadata(context.output_dir, config, context.resolved)
    return path
