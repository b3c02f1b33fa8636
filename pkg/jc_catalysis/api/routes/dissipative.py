from pathlib import Path

from ...utils.artifacts import write_csv, write_metadata
from ...utils.protocols import dissipative_scan
from ..dependencies import RunContext, get_cavity, get_wigner_grid

CSV_NAME = "dissipative.csv"
HEADER = ("tau", "wln_open", "g2_open", "wln_closed", "g2_closed", "delta")


def run(context: RunContext) -> Path:
    """Open against closed catalytic witnesses over tau_grid."""
    config = context.config
    cavity = get_cavity(context)
    rows = dissipative_scan(
        cavity,
        config.params,
        config.diss,
        config.tau_grid.points(),
        grid=get_wigner_grid(context),
        grid_points=config.grid.points,
        threads=context.threads,
    )

    path = context.output_dir / CSV_NAME
    write_csv(
        path,
        HEADER,
        ((row.tau, row.wln_open, row.g2_open, row.wln_closed, row.g2_closed, row.delta) for row in rows),
    )
    write_metadata(context.output_dir, config, context.resolved)
    return path
