from pathlib import Path

from ...utils.artifacts import write_csv, write_metadata
from ...utils.protocols import scan_g2_vs_time
from ..dependencies import RunContext, get_catalyst, get_catalytic_time, get_cavity, get_time_grid

CSV_NAME = "g2_vs_t.csv"
HEADER = ("t", "g2", "delta", "q", "re_r", "im_r")


def run(context: RunContext) -> Path:
    """g2 of the cavity and the atom's trajectory over [0, tau] under the catalyst for tau."""
    cavity = get_cavity(context)
    tau = get_catalytic_time(context, cavity)
    atom = get_catalyst(context, cavity, tau)
    samples = scan_g2_vs_time(
        cavity, context.config.params, get_time_grid(context, tau), atom=atom, threads=context.threads
    )

    path = context.output_dir / CSV_NAME
    write_csv(path, HEADER, ((s.t, s.g2, s.delta, s.q, s.r.real, s.r.imag) for s in samples))
    write_metadata(context.output_dir, context.config, context.resolved)
    return path
