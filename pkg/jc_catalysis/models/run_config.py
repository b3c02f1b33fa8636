from enum import Enum
from pathlib import Path
from typing import List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..utils.settings import RESOLVE_POINTS, RESOLVE_WINDOW
from .params import DissipationParams, SimulationParams


class Experiment(str, Enum):
    G2_VS_TIME = "g2-vs-time"
    WIGNER = "wigner"
    WLN_VS_TIME = "wln-vs-time"
    SCAN_ALPHA = "scan-alpha"
    CATALYTIC_SET = "catalytic-set"
    SQUEEZING = "squeezing"
    DISSIPATIVE = "dissipative"
    MULTICAVITY = "multicavity"


def _float_list(value: Union[str, float, List[float]]) -> List[float]:
    if isinstance(value, str):
        items = [item.strip() for item in value.split(",") if item.strip()]
        return [float(item) for item in items]
    if isinstance(value, (int, float)):
        return [float(value)]
    return [float(item) for item in value]


class GridSpec(BaseModel):
    """Either explicit `values` or a `start`/`stop`/`num` linspace."""

    values: Optional[List[float]] = None
    start: Optional[float] = None
    stop: Optional[float] = None
    num: Optional[int] = Field(default=None, ge=1)

    model_config = ConfigDict(extra="forbid", frozen=True, allow_inf_nan=False)

    @field_validator("values", mode="before")
    @classmethod
    def split_values(cls, value):
        return None if value is None else _float_list(value)

    @model_validator(mode="after")
    def exactly_one_form(self):
        ranged = (self.start, self.stop, self.num)
        if self.values is not None:
            if any(item is not None for item in ranged):
                raise ValueError("grid takes either values or start/stop/num, not both")
            if not self.values:
                raise ValueError("grid is empty")
        elif any(item is None for item in ranged):
            raise ValueError("grid is empty: give values or all of start, stop, num")
        return self

    def points(self) -> np.ndarray:
        if self.values is not None:
            return np.array(self.values, dtype=float)
        return np.linspace(self.start, self.stop, self.num)


class WignerGridSpec(BaseModel):
    points: int = Field(default=201, ge=3)
    extent: Optional[float] = Field(default=None, gt=0)

    model_config = ConfigDict(extra="forbid", frozen=True, allow_inf_nan=False)


class ResolveSpec(BaseModel):
    """Windowed search for the catalytic time around candidate values."""

    candidates: List[float]
    window: float = Field(default=RESOLVE_WINDOW, gt=0)
    points: int = Field(default=RESOLVE_POINTS, ge=2)
    witness: Literal["g2", "xi"] = "g2"
    target: Optional[float] = None

    model_config = ConfigDict(extra="forbid", frozen=True, allow_inf_nan=False)

    @field_validator("candidates", mode="before")
    @classmethod
    def split_candidates(cls, value):
        candidates = _float_list(value)
        if not candidates:
            raise ValueError("resolve.candidates is empty")
        return candidates


_TIME_SERIES = {Experiment.G2_VS_TIME, Experiment.WLN_VS_TIME, Experiment.SQUEEZING}


class RunConfig(BaseModel):
    experiment: Experiment
    params: SimulationParams
    diss: Optional[DissipationParams] = None
    alpha: Optional[complex] = None
    populations: Optional[List[float]] = None
    tau: Optional[float] = Field(default=None, gt=0)
    t_grid: Optional[GridSpec] = None
    n_times: int = Field(default=201, ge=2)
    tau_grid: Optional[GridSpec] = None
    alpha_grid: Optional[GridSpec] = None
    resolve: Optional[ResolveSpec] = None
    grid: WignerGridSpec = Field(default_factory=WignerGridSpec)
    witness: Literal["g2", "xi"] = "g2"
    gtau_bound: float = Field(default=100.0, gt=0)
    n_tau: int = Field(default=2000, ge=1)
    n_samples: int = Field(default=1000, ge=1)
    seed: int = 0
    n_cavities: int = Field(default=3, ge=1)
    max_joint_dim: int = Field(default=1024, ge=2)
    tail_tolerance: float = Field(default=1e-12, gt=0, lt=1)
    output_dir: Optional[Path] = None

    model_config = ConfigDict(
        extra="forbid",
        frozen=True,
        arbitrary_types_allowed=True,
        allow_inf_nan=False,
    )

    @field_validator("alpha", mode="before")
    @classmethod
    def parse_alpha(cls, value):
        if value is None:
            return None
        if isinstance(value, str):
            value = value.replace(" ", "")
        return complex(value)

    @field_validator("populations", mode="before")
    @classmethod
    def split_populations(cls, value):
        if value is None:
            return None
        populations = _float_list(value)
        if not populations or min(populations) < 0 or abs(sum(populations) - 1) > 1e-10:
            raise ValueError("populations must be non-negative and sum to 1")
        return populations

    @model_validator(mode="after")
    def experiment_requirements(self):
        experiment = self.experiment
        if experiment != Experiment.SCAN_ALPHA and self.alpha is None and self.populations is None:
            raise ValueError(f"{experiment.value} needs alpha or populations")
        if experiment in _TIME_SERIES or experiment == Experiment.WIGNER:
            if self.tau is None and self.t_grid is None and self.resolve is None:
                raise ValueError(f"{experiment.value} needs tau, t_grid or resolve")
        if experiment == Experiment.SCAN_ALPHA and self.alpha_grid is None:
            raise ValueError("scan-alpha needs alpha_grid")
        if experiment == Experiment.DISSIPATIVE:
            if self.diss is None or self.tau_grid is None:
                raise ValueError("dissipative needs diss and tau_grid")
            if min(self.tau_grid.points()) < 0:
                raise ValueError("tau_grid must be non-negative")
        if experiment == Experiment.MULTICAVITY:
            if (self.tau is None) == (self.tau_grid is None):
                raise ValueError("multicavity needs exactly one of tau or tau_grid")
            if self.tau_grid is not None and min(self.tau_grid.points()) <= 0:
                raise ValueError("tau_grid must be positive")
            if self.tau_grid is not None and self.n_cavities < 2:
                raise ValueError("a multicavity tau scan needs n_cavities >= 2")
        return self
