from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator


class AuxFunctions(BaseModel):
    """The four complex coefficients of the catalytic coherence equation at one time."""

    a1: complex
    a2: complex
    a3: complex
    a4: complex

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @property
    def coherence_determinant(self) -> float:
        return abs(self.a1) ** 2 - abs(self.a3) ** 2


class Infeasible(BaseModel):
    """Returned when the closed-form catalyst is not a valid atom state."""

    tau: float
    reason: str

    model_config = ConfigDict(frozen=True)


class WitnessReport(BaseModel):
    mean_n: float
    second_moment_n: float
    g2: Optional[float] = None  # undefined for the vacuum
    wln: float
    xi: float = Field(..., gt=0)

    model_config = ConfigDict(frozen=True)


class WignerField(BaseModel):
    """W(x, p) sampled on a uniform grid; values[i, j] = W(x_grid[i], p_grid[j])."""

    x_grid: np.ndarray
    p_grid: np.ndarray
    values: np.ndarray

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @field_validator("x_grid", "p_grid", "values", mode="before")
    @classmethod
    def as_real_array(cls, value):
        array = np.array(value, dtype=float, copy=True)
        array.setflags(write=False)
        return array


class TimeSample(BaseModel):
    """One row of a time series under a fixed catalyst."""

    t: float
    delta: float
    q: float
    r: complex
    g2: Optional[float] = None
    wln: Optional[float] = None
    xi: Optional[float] = None

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)


class CatalyticTime(BaseModel):
    """Catalytic time picked by a windowed search around a candidate."""

    tau: float
    candidate: float
    witness: str
    value: float
    delta: float

    model_config = ConfigDict(frozen=True)


class AlphaScanRow(BaseModel):
    alpha: float
    min_value: float
    argmin_tau: float
    witness: str = "g2"

    model_config = ConfigDict(frozen=True)


class ScanRecord(BaseModel):
    tau: float
    q: float
    r: complex
    g2: Optional[float] = None
    wln: Optional[float] = None
    feasible: bool
    delta: float

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @property
    def bloch_y(self) -> float:
        return 2 * self.r.imag

    @property
    def bloch_z(self) -> float:
        return 2 * self.q - 1


class MultiCavityResult(BaseModel):
    """Fidelity is NaN when tau has no verified catalyst (feasible=False)."""

    n_cavities: int = Field(..., ge=1)
    tau: float
    fidelity: float
    per_cavity_g2: List[float] = Field(default_factory=list)
    max_marginal_distance: float = 0.0
    feasible: bool = True

    model_config = ConfigDict(frozen=True)


class DissipativeRow(BaseModel):
    tau: float
    wln_open: float
    g2_open: float
    wln_closed: float
    g2_closed: float
    delta: float

    model_config = ConfigDict(frozen=True)
