from pathlib import Path

from ...utils.artifacts import write_csv, write_metadata
from ...utils.protocols import scan_min_g2_vs_alpha, scan_min_xi_vs_alpha
from ..dependencies import RunContext

SCANS = {
    "g2": ("scan_alpha.csv", ("alpha", "min_g2", "argmin_tau"), scan_min_g2_vs_alpha),
    "xi": ("scan_alpha_xi.csv", ("alpha", "min_xi", "argmin_tau"), scan_min_xi_vs_alpha),
}


def run(context: RunContext) -> Path:
    """Smallest catalytic witness over tau in (0, gtau_bound / g] for each |alpha|."""
    config = context.config
    csv_name, header, scan = SCANS[config.witness]
    rows = scan(
        config.alpha_grid.points(),
        config.params,
        config.gtau_bound,
        n_tau=config.n_tau,
        threads=context.threads,
        tail_tolerance=config.tail_tolerance,
    )
    context.resolved["tau_sampling"] = f"{config.n_tau} uniform points on (0, {config.gtau_bound!r} / g]"
    context.resolved["n_trunc_used"] = f"max(params.n_trunc, tail mass < {config.tail_tolerance!r})"

    path = context.output_dir / csv_name
    write_csv(path, header, ((row.alpha, row.min_value, row.argmin_tau) for row in rows))
    write_metadata(context.output_dir, config, context.resolved)
    return path
