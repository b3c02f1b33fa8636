from pathlib import Path

from ...utils.artifacts import write_csv, write_metadata
from ...utils.jc_core import reduced_cavity_analytic
from ...utils.witness import wigner, wln_of_field
from ..dependencies import RunContext, get_catalyst, get_catalytic_time, get_cavity, get_wigner_grid

CSV_NAME = "wigner.csv"
HEADER = ("x", "p", "w")


def run(context: RunContext) -> Path:
    """Wigner function of the cavity after one catalytic interaction."""
    config = context.config
    cavity = get_cavity(context)
    tau = get_catalytic_time(context, cavity)
    atom = get_catalyst(context, cavity, tau)
    final = reduced_cavity_analytic(cavity, atom, config.params, tau)

    field = wigner(final, *get_wigner_grid(context, final))
    context.resolved["wln"] = repr(wln_of_field(field))

    rows = (
        (x, p, field.values[i, j])
        for i, x in enumerate(field.x_grid)
        for j, p in enumerate(field.p_grid)
    )
    path = context.output_dir / CSV_NAME
    write_csv(path, HEADER, rows)
    write_metadata(context.output_dir, config, context.resolved)
    return path
