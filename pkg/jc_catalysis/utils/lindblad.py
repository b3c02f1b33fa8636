"""
Open-system evolution: cavity loss into a thermal bath and atomic decay on top
of the resonant JC Hamiltonian, and catalysts of the resulting channel.
"""
import logging
from typing import Optional

import numpy as np
from scipy.linalg import expm

from ..models.operators import Liouvillian
from ..models.params import DissipationParams, SimulationParams
from ..models.states import AtomState, CavityState, JointState
from .catalyst import effective_atom_channel, fixed_point
from .errors import InvalidParameter, PropagationUnstable
from .hilbert import destroy, hermitize, superop_to_choi, unvec, vec
from .jc_core import SIGMA_MINUS, jc_hamiltonian
from .settings import PROPAGATION_FLOOR, PSD_FLOOR

logger = logging.getLogger(__name__)


def thermal_occupation(temperature: float) -> float:
    """n_th = 1 / (e^(1/T) - 1), temperature in units of the mode energy."""
    if temperature < 0:
        raise InvalidParameter(f"temperature must be non-negative, got {temperature}")
    if temperature == 0:
        return 0.0
    return float(1.0 / np.expm1(1.0 / temperature))


def dissipator(jump: np.ndarray) -> np.ndarray:
    """Column-stacking superoperator of L X L^dag - {L^dag L, X} / 2."""
    identity = np.eye(jump.shape[0])
    decay = jump.conj().T @ jump
    return (
        np.kron(jump.conj(), jump)
        - 0.5 * np.kron(identity, decay)
        - 0.5 * np.kron(decay.T, identity)
    )


def build_liouvillian(
    params: SimulationParams,
    diss: DissipationParams,
    cavity_dim: Optional[int] = None,
    coupled: bool = True,
) -> Liouvillian:
    """
    Column-stacking generator of the master equation. coupled=False gives the
    free cavity and atom under the same baths.
    """
    d = params.propagation_dim if cavity_dim is None else cavity_dim
    hamiltonian = jc_hamiltonian(params, d, coupled=coupled)
    identity = np.eye(2 * d)
    generator = -1j * (np.kron(identity, hamiltonian) - np.kron(hamiltonian.T, identity))

    a = np.kron(destroy(d), np.eye(2))
    sigma_minus = np.kron(np.eye(d), SIGMA_MINUS)
    if diss.kappa > 0:
        generator = generator + diss.kappa * (diss.n_th + 1) * dissipator(a)
        if diss.n_th > 0:
            generator = generator + diss.kappa * diss.n_th * dissipator(a.conj().T)
    if diss.gamma > 0:
        generator = generator + diss.gamma * dissipator(sigma_minus)

    logger.debug("Liouvillian on %d cavity levels (%d x %d)", d, generator.shape[0], generator.shape[1])
    return Liouvillian(cavity_dim=d, matrix=generator)


def repair_density(matrix: np.ndarray) -> np.ndarray:
    """
    Symmetrize, gate the eigenvalue floor, clip round-off negatives and renormalize.
    """
    matrix = hermitize(matrix)
    eigenvalues, eigenvectors = np.linalg.eigh(matrix)
    if eigenvalues[0] < PROPAGATION_FLOOR:
        raise PropagationUnstable(
            f"propagated state has eigenvalue {eigenvalues[0]:.3e}; increase n_trunc"
        )
    if eigenvalues[0] < 0:
        if eigenvalues[0] < PSD_FLOOR:
            logger.debug("clipping eigenvalue %.3e after propagation", eigenvalues[0])
        eigenvalues = np.clip(eigenvalues, 0.0, None)
        matrix = (eigenvectors * eigenvalues) @ eigenvectors.conj().T
    return hermitize(matrix / np.trace(matrix).real)


class LindbladChannel:
    """exp(L t), computed once and applied to joint operators."""

    def __init__(self, liouvillian: Liouvillian, t: float):
        if t < 0:
            raise InvalidParameter(f"propagation time must be non-negative, got {t}")
        self.time = t
        self.cavity_dim = liouvillian.cavity_dim
        self.joint_dim = liouvillian.joint_dim
        self.superop = expm(np.asarray(liouvillian.matrix) * t)

    def __call__(self, operator: np.ndarray) -> np.ndarray:
        return unvec(self.superop @ vec(operator), self.joint_dim)

    def evolve(self, state: JointState) -> JointState:
        return JointState(matrix=repair_density(self(state.matrix)))

    def choi(self) -> np.ndarray:
        return superop_to_choi(self.superop, self.joint_dim)


def propagate(liouvillian: Liouvillian, state: JointState, t: float) -> JointState:
    return LindbladChannel(liouvillian, t).evolve(state)


def dissipative_catalyst(
    cavity: CavityState,
    liouvillian: Liouvillian,
    tau: float,
    channel: Optional[LindbladChannel] = None,
) -> AtomState:
    """Fixed point of chi -> Tr_S[exp(L tau)(rho (x) chi)]."""
    channel = LindbladChannel(liouvillian, tau) if channel is None else channel
    return fixed_point(effective_atom_channel(cavity, channel))
