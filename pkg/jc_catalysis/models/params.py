from pydantic import BaseModel, ConfigDict, Field, field_validator


class SimulationParams(BaseModel):
    """Resonant Jaynes-Cummings parameters; omega and g in rad/time."""

    omega: float = Field(..., gt=0)
    g: float
    n_trunc: int = Field(default=20, ge=2)

    model_config = ConfigDict(extra="forbid", frozen=True, allow_inf_nan=False)

    @field_validator("g")
    @classmethod
    def nonzero_coupling(cls, value: float) -> float:
        if value == 0:
            raise ValueError("coupling g must be non-zero")
        return value

    @property
    def propagation_dim(self) -> int:
        """Cavity levels used while propagating: n_trunc + 1 plus one padding level."""
        return self.n_trunc + 2


class DissipationParams(BaseModel):
    """Cavity loss kappa, atom decay gamma (1/time) and thermal occupation n_th."""

    kappa: float = Field(default=0.0, ge=0)
    gamma: float = Field(default=0.0, ge=0)
    n_th: float = Field(default=0.0, ge=0)

    model_config = ConfigDict(extra="forbid", frozen=True, allow_inf_nan=False)

    @property
    def is_closed(self) -> bool:
        return self.kappa == 0 and self.gamma == 0
