import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator


def _readonly(value) -> np.ndarray:
    matrix = np.array(value, dtype=complex, copy=True)
    matrix.setflags(write=False)
    return matrix


class Propagator(BaseModel):
    """Closed-form JC unitary at `time` on a cavity_dim x 2 space."""

    time: float
    cavity_dim: int
    matrix: np.ndarray

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @field_validator("matrix", mode="before")
    @classmethod
    def coerce_matrix(cls, value):
        return _readonly(value)

    def as_tensor(self) -> np.ndarray:
        """Axes (s_out, atom_out, s_in, atom_in)."""
        d = self.cavity_dim
        return self.matrix.reshape(d, 2, d, 2)


class EffectiveChannel(BaseModel):
    """
    4x4 superoperator on column-stacked 2x2 atom operators.
    """

    matrix: np.ndarray

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @field_validator("matrix", mode="before")
    @classmethod
    def coerce_matrix(cls, value):
        return _readonly(value)

    def apply(self, operator: np.ndarray) -> np.ndarray:
        vector = np.asarray(operator, dtype=complex).reshape(-1, order="F")
        return (self.matrix @ vector).reshape((2, 2), order="F")

    def pauli_transfer(self) -> np.ndarray:
        """R[i, j] = Tr[P_i Phi(P_j)] / 2 over (I, X, Y, Z)."""
        paulis = [
            np.eye(2, dtype=complex),
            np.array([[0, 1], [1, 0]], dtype=complex),
            np.array([[0, -1j], [1j, 0]]),
            np.array([[1, 0], [0, -1]], dtype=complex),
        ]
        transfer = np.empty((4, 4))
        for j, pj in enumerate(paulis):
            image = self.apply(pj)
            for i, pi in enumerate(paulis):
                transfer[i, j] = 0.5 * np.trace(pi @ image).real
        return transfer


class Liouvillian(BaseModel):
    """Generator on column-stacked joint density matrices of side 2 * cavity_dim."""

    cavity_dim: int
    matrix: np.ndarray

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @field_validator("matrix", mode="before")
    @classmethod
    def coerce_matrix(cls, value):
        return _readonly(value)

    @property
    def joint_dim(self) -> int:
        return 2 * self.cavity_dim
