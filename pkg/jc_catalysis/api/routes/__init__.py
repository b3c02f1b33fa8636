"""
One module per experiment; each `run(context)` writes its CSV and run.env and returns the CSV path
"""

from ...models.run_config import Experiment
from . import catalytic_set, dissipative, g2_vs_time, multicavity, scan_alpha, squeezing, wigner, wln_vs_time

ROUTES = {
    Experiment.G2_VS_TIME: g2_vs_time.run,
    Experiment.WIGNER: wigner.run,
    Experiment.WLN_VS_TIME: wln_vs_time.run,
    Experiment.SCAN_ALPHA: scan_alpha.run,
    Experiment.CATALYTIC_SET: catalytic_set.run,
    Experiment.SQUEEZING: squeezing.run,
    Experiment.DISSIPATIVE: dissipative.run,
    Experiment.MULTICAVITY: multicavity.run,
}

__all__ = [
    "ROUTES",
    "catalytic_set",
    "dissipative",
    "g2_vs_time",
    "multicavity",
    "scan_alpha",
    "squeezing",
    "wigner",
    "wln_vs_time",
]
