from typing import Any, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from ..utils.errors import InvalidState
from ..utils.settings import (
    HERMITIAN_TOLERANCE,
    POSITIVITY_TOLERANCE,
    PSD_FLOOR,
    TRACE_TOLERANCE,
)


def _frozen_matrix(value: Any) -> np.ndarray:
    matrix = np.array(value, dtype=complex, copy=True)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InvalidState(f"expected a square matrix, got shape {matrix.shape}")
    matrix.setflags(write=False)
    return matrix


def check_density_matrix(matrix: np.ndarray, label: str) -> None:
    """
    Raise InvalidState unless `matrix` is Hermitian, unit-trace and PSD.
    """
    asymmetry = np.max(np.abs(matrix - matrix.conj().T)) if matrix.size else 0.0
    if asymmetry > HERMITIAN_TOLERANCE:
        raise InvalidState(f"{label} is not Hermitian (deviation {asymmetry:.3e})")

    trace = np.trace(matrix).real
    if abs(trace - 1.0) > TRACE_TOLERANCE:
        raise InvalidState(f"{label} trace is {trace!r}, expected 1")

    floor = np.linalg.eigvalsh(0.5 * (matrix + matrix.conj().T))[0]
    if floor < PSD_FLOOR:
        raise InvalidState(f"{label} has negative eigenvalue {floor:.3e}")


class CavityState(BaseModel):
    """Cavity density matrix on Fock levels 0..dim-1."""

    matrix: np.ndarray

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @field_validator("matrix", mode="before")
    @classmethod
    def coerce_matrix(cls, value):
        return _frozen_matrix(value)

    @model_validator(mode="after")
    def check_invariants(self):
        check_density_matrix(self.matrix, "cavity state")
        return self

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_trunc(self) -> int:
        return self.dim - 1

    @property
    def populations(self) -> np.ndarray:
        return np.diagonal(self.matrix).real.copy()


class AtomState(BaseModel):
    """
    Two-level atom in the (g, e) basis: q = <g|chi|g>, r = <g|chi|e>.
    """

    q: float
    r: complex = 0j

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @field_validator("r", mode="before")
    @classmethod
    def coerce_r(cls, value):
        if isinstance(value, str):
            value = value.replace(" ", "")
        return complex(value)

    @field_validator("q")
    @classmethod
    def clip_q(cls, value: float) -> float:
        if not np.isfinite(value) or value < -POSITIVITY_TOLERANCE or value > 1 + POSITIVITY_TOLERANCE:
            raise InvalidState(f"ground occupation q={value!r} outside [0, 1]")
        return float(min(max(value, 0.0), 1.0))

    @model_validator(mode="after")
    def check_positivity(self):
        slack = self.q * (1 - self.q) - abs(self.r) ** 2
        if not np.isfinite(slack) or slack < -POSITIVITY_TOLERANCE:
            raise InvalidState(f"atom state (q={self.q!r}, r={self.r!r}) is not positive")
        return self

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> "AtomState":
        matrix = np.asarray(matrix, dtype=complex)
        check_density_matrix(matrix, "atom state")
        return cls(q=float(matrix[0, 0].real), r=complex(matrix[0, 1]))

    @classmethod
    def from_bloch(cls, bloch: np.ndarray) -> "AtomState":
        """Standard Pauli Bloch vector (x, y, z), z = 2q - 1."""
        x, y, z = (float(v) for v in bloch)
        return cls(q=(1 + z) / 2, r=complex(x, -y) / 2)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.q, self.r], [self.r.conjugate(), 1 - self.q]], dtype=complex)

    @property
    def bloch(self) -> np.ndarray:
        return np.array([2 * self.r.real, -2 * self.r.imag, 2 * self.q - 1])

    @property
    def plane_coordinates(self) -> Tuple[float, float]:
        """(y, z) for y-z plane plots, with y = 2 Im r."""
        return 2 * self.r.imag, 2 * self.q - 1

    @property
    def is_pure(self) -> bool:
        return abs(self.q * (1 - self.q) - abs(self.r) ** 2) <= 1e-12


class JointState(BaseModel):
    """
    Cavity-atom density matrix, index = 2 * n + atom with atom basis (g, e).
    """

    matrix: np.ndarray

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @field_validator("matrix", mode="before")
    @classmethod
    def coerce_matrix(cls, value):
        matrix = _frozen_matrix(value)
        if matrix.shape[0] % 2:
            raise InvalidState(f"joint dimension {matrix.shape[0]} is not even")
        return matrix

    @model_validator(mode="after")
    def check_invariants(self):
        check_density_matrix(self.matrix, "joint state")
        return self

    @property
    def cavity_dim(self) -> int:
        return self.matrix.shape[0] // 2
