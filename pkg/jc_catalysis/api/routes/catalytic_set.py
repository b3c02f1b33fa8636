from pathlib import Path

from ...utils.artifacts import write_csv, write_metadata
from ...utils.protocols import catalytic_set_scan
from ..dependencies import RunContext, get_cavity

CSV_NAME = "catalytic_set.csv"
HEADER = ("tau", "q", "re_r", "im_r", "g2", "feasible", "delta")


def run(context: RunContext) -> Path:
    """Catalysts for uniformly sampled times; infeasible samples keep feasible=false."""
    config = context.config
    cavity = get_cavity(context)
    records = catalytic_set_scan(
        cavity, config.params, config.n_samples, config.gtau_bound, seed=config.seed, threads=context.threads
    )
    feasible = sum(record.feasible for record in records)
    context.resolved["tau_sampling"] = f"uniform on (0, {config.gtau_bound!r} / g], numpy default_rng({config.seed})"
    context.resolved["feasible_samples"] = f"{feasible}/{len(records)}"

    rows = (
        (record.tau, record.q, record.r.real, record.r.imag, record.g2, record.feasible, record.delta)
        for record in records
    )
    path = context.output_dir / CSV_NAME
    write_csv(path, HEADER, rows)
    write_metadata(context.output_dir, config, context.resolved)
    return path
