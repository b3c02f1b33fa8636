"""
Shared resolution of a RunConfig into the objects every experiment needs.
"""
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..models.records import Infeasible
from ..models.run_config import RunConfig
from ..models.states import AtomState, CavityState
from ..utils.catalyst import solve_catalyst
from ..utils.errors import ConfigInvalid, NotCatalytic
from ..utils.hilbert import coherent_state, fock_mixture_state, minimal_truncation
from ..utils.protocols import resolve_catalytic_time
from ..utils.settings import THREADS
from ..utils.witness import default_grid

logger = logging.getLogger(__name__)


class RunContext(BaseModel):
    """Everything a route needs besides the config; `resolved` ends up in run.env."""

    config: RunConfig
    output_dir: Path
    threads: int = Field(default=1, ge=1)
    resolved: Dict[str, Any] = Field(default_factory=dict)

    model_config = ConfigDict(arbitrary_types_allowed=True)


def get_threads(override: Optional[int] = None) -> int:
    threads = THREADS if override is None else override
    if threads < 1:
        raise ConfigInvalid(f"thread count must be positive, got {threads}")
    return threads


def get_output_dir(config: RunConfig, override: Optional[Path] = None) -> Path:
    if override is not None:
        return Path(override)
    if config.output_dir is not None:
        return config.output_dir
    return Path("output") / config.experiment.value


def get_cavity(context: RunContext) -> CavityState:
    """Coherent state (truncation raised to the tail tolerance) or Fock mixture."""
    config = context.config
    if config.populations is not None:
        n_trunc = max(config.params.n_trunc, len(config.populations) - 1)
        context.resolved["cavity"] = "fock-mixture"
        context.resolved["n_trunc_used"] = n_trunc
        return fock_mixture_state(config.populations, n_trunc)

    n_trunc = max(config.params.n_trunc, minimal_truncation(config.alpha, config.tail_tolerance))
    if n_trunc != config.params.n_trunc:
        logger.info("raising n_trunc from %d to %d for alpha=%s", config.params.n_trunc, n_trunc, config.alpha)
    context.resolved["cavity"] = "coherent"
    context.resolved["n_trunc_used"] = n_trunc
    return coherent_state(config.alpha, n_trunc, config.tail_tolerance)


def get_catalytic_time(context: RunContext, cavity: CavityState) -> float:
    """Explicit tau, the end of t_grid, or a windowed search."""
    config = context.config
    if config.resolve is not None:
        spec = config.resolve
        found = resolve_catalytic_time(
            cavity,
            config.params,
            spec.candidates,
            window=spec.window,
            n_points=spec.points,
            witness=spec.witness,
            target=spec.target,
        )
        context.resolved["resolved_tau"] = repr(found.tau)
        context.resolved["resolved_candidate"] = repr(found.candidate)
        context.resolved["resolved_value"] = repr(float(found.value))
        if spec.target is not None:
            context.resolved["resolve_target"] = repr(spec.target)
        return found.tau
    if config.tau is not None:
        return config.tau
    if config.t_grid is not None:
        return float(config.t_grid.points()[-1])
    raise ConfigInvalid(f"{config.experiment.value} needs tau, t_grid or resolve")


def get_time_grid(context: RunContext, tau: float) -> np.ndarray:
    """Explicit t_grid when it ends at the catalytic time, else n_times points on [0, tau]."""
    config = context.config
    if config.t_grid is not None and config.resolve is None:
        grid = config.t_grid.points()
        if not np.isclose(grid[-1], tau, rtol=0, atol=1e-12):
            raise ConfigInvalid(f"t_grid ends at {grid[-1]!r}, not at tau={tau!r}")
    else:
        grid = np.linspace(0.0, tau, config.n_times)
    if np.any(grid < 0) or np.any(np.diff(grid) < 0):
        raise ConfigInvalid("t_grid must be non-negative and non-decreasing")
    return grid


def get_wigner_grid(
    context: RunContext, state: Optional[CavityState] = None
) -> Optional[Tuple[np.ndarray, np.ndarray]]:
    """
    Fixed [-extent, extent]^2 grid when configured, else the default grid of `state`.
    None means every state of a series gets its own default grid.
    """
    config = context.config
    if config.grid.extent is not None:
        axis = np.linspace(-config.grid.extent, config.grid.extent, config.grid.points)
        grid = (axis, axis.copy())
    elif state is not None:
        grid = default_grid(state, config.alpha, config.grid.points)
    else:
        context.resolved["wigner_grid"] = f"per-state default extent x {config.grid.points} points"
        return None
    context.resolved["wigner_grid"] = f"[{grid[0][0]!r}, {grid[0][-1]!r}] x {len(grid[0])} points"
    return grid


def get_catalyst(context: RunContext, cavity: CavityState, tau: float) -> AtomState:
    atom = solve_catalyst(cavity, context.config.params, tau)
    if isinstance(atom, Infeasible):
        raise NotCatalytic(f"no catalyst at tau={tau!r}: {atom.reason}")
    context.resolved["catalyst"] = f"q={atom.q!r} r={atom.r!r}"
    return atom
