from pathlib import Path

from ...utils.artifacts import write_csv, write_metadata
from ...utils.protocols import scan_xi_vs_time
from ..dependencies import RunContext, get_catalyst, get_catalytic_time, get_cavity, get_time_grid

CSV_NAME = "squeezing.csv"
HEADER = ("t", "xi", "delta")


def run(context: RunContext) -> Path:
    cavity = get_cavity(context)
    tau = get_catalytic_time(context, cavity)
    atom = get_catalyst(context, cavity, tau)
    samples = scan_xi_vs_time(
        cavity, context.config.params, get_time_grid(context, tau), atom=atom, threads=context.threads
    )

    path = context.output_dir / CSV_NAME
    write_csv(path, HEADER, ((s.t, s.xi, s.delta) for s in samples))
    write_metadata(context.output_dir, context.config, context.resolved)
    return path
