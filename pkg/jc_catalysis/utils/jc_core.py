"""
Closed resonant Jaynes-Cummings dynamics.

H = omega a^dag a + (omega / 2) sigma_z + g (sigma_+ a + sigma_- a^dag) couples the
pairs {|n+1, g>, |n, e>}; each pair rotates by theta_n = g t sqrt(n + 1) under the
common phase exp(-i (n + 1/2) omega t). Propagation uses one cavity level more than
the input state so that every populated pair is complete.
"""
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from ..models.operators import Propagator
from ..models.params import SimulationParams
from ..models.states import AtomState, CavityState, JointState
from .errors import InvalidParameter, TruncationTooSmall
from .hilbert import destroy, embed, hermitize, number_operator

logger = logging.getLogger(__name__)

SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=complex)  # |g><e|
SIGMA_Z = np.diag([-1.0, 1.0]).astype(complex)


def propagation_dim(cavity: CavityState) -> int:
    return cavity.dim + 1


def _rotation(params: SimulationParams, t: float, size: int) -> Tuple[np.ndarray, np.ndarray]:
    theta = params.g * t * np.sqrt(np.arange(size) + 1.0)
    return np.sin(theta), np.cos(theta)


class BranchOperators(BaseModel):
    """
    Cavity factors of U = sum_{k,i} A_ki (x) |k><i| for atom levels g, e.

    gg and ee are diagonals; eg[m] = <m|A_eg|m+1> and ge[m] = <m+1|A_ge|m>.
    """

    gg: np.ndarray
    ee: np.ndarray
    eg: np.ndarray
    ge: np.ndarray

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @property
    def dim(self) -> int:
        return len(self.gg)

    def matrices(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        d = self.dim
        a_eg = np.zeros((d, d), dtype=complex)
        a_ge = np.zeros((d, d), dtype=complex)
        a_eg[np.arange(d - 1), np.arange(1, d)] = self.eg
        a_ge[np.arange(1, d), np.arange(d - 1)] = self.ge
        return np.diag(self.gg), a_eg, a_ge, np.diag(self.ee)


def branch_operators(params: SimulationParams, t: float, cavity_dim: int) -> BranchOperators:
    n = np.arange(cavity_dim)
    s, c = _rotation(params, t, cavity_dim)
    phase_g = np.exp(-1j * (n - 0.5) * params.omega * t)
    phase_e = np.exp(-1j * (n + 0.5) * params.omega * t)
    c_prev = np.concatenate(([1.0], c[:-1]))

    ee = phase_e * c
    # |d-1, e> has no partner inside the space and only picks up its phase
    ee[-1] = phase_e[-1]
    return BranchOperators(
        gg=phase_g * c_prev,
        ee=ee,
        eg=phase_g[1:] * (-1j) * s[:-1],
        ge=phase_e[:-1] * (-1j) * s[:-1],
    )


def jc_propagator(params: SimulationParams, t: float, cavity_dim: Optional[int] = None) -> Propagator:
    if t < 0:
        raise InvalidParameter(f"propagation time must be non-negative, got {t}")
    d = params.propagation_dim if cavity_dim is None else cavity_dim
    a_gg, a_eg, a_ge, a_ee = branch_operators(params, t, d).matrices()
    unitary = (
        np.kron(a_gg, np.array([[1, 0], [0, 0]]))
        + np.kron(a_ge, np.array([[0, 1], [0, 0]]))
        + np.kron(a_eg, np.array([[0, 0], [1, 0]]))
        + np.kron(a_ee, np.array([[0, 0], [0, 1]]))
    )
    return Propagator(time=t, cavity_dim=d, matrix=unitary)


def jc_hamiltonian(params: SimulationParams, cavity_dim: Optional[int] = None, coupled: bool = True) -> np.ndarray:
    """Dense truncated Hamiltonian on cavity (x) atom; coupled=False drops the exchange term."""
    d = params.propagation_dim if cavity_dim is None else cavity_dim
    a = destroy(d)
    identity_cavity, identity_atom = np.eye(d), np.eye(2)
    free = params.omega * np.kron(number_operator(d), identity_atom)
    free = free + 0.5 * params.omega * np.kron(identity_cavity, SIGMA_Z)
    if not coupled:
        return free
    return free + params.g * (np.kron(a, SIGMA_MINUS.T) + np.kron(a.conj().T, SIGMA_MINUS))


def number_operators(cavity_dim: int) -> Tuple[np.ndarray, np.ndarray]:
    """n_S (x) 1 and 1 (x) n_C with n_C = |e><e|."""
    n_cavity = number_operator(cavity_dim)
    n_atom = np.diag([0.0, 1.0]).astype(complex)
    return np.kron(n_cavity, np.eye(2)), np.kron(np.eye(cavity_dim), n_atom)


class UnitaryChannel:
    """Conjugation by the closed-form propagator, as a map on joint operators."""

    def __init__(self, params: SimulationParams, t: float, cavity_dim: Optional[int] = None):
        self.params = params
        self.time = t
        self.propagator = jc_propagator(params, t, cavity_dim)
        self.cavity_dim = self.propagator.cavity_dim

    def __call__(self, operator: np.ndarray) -> np.ndarray:
        unitary = self.propagator.matrix
        return unitary @ operator @ unitary.conj().T


def evolve_closed(cavity: CavityState, atom: AtomState, params: SimulationParams, t: float) -> JointState:
    channel = UnitaryChannel(params, t, propagation_dim(cavity))
    return evolve_with(channel, cavity, atom)


def evolve_with(channel, cavity: CavityState, atom: AtomState) -> JointState:
    if channel.cavity_dim < propagation_dim(cavity):
        raise TruncationTooSmall(
            f"channel acts on {channel.cavity_dim} cavity levels, "
            f"state needs {propagation_dim(cavity)}"
        )
    initial = np.kron(embed(cavity, channel.cavity_dim).matrix, atom.matrix)
    return JointState(matrix=hermitize(channel(initial)))


def reduced_cavity_analytic(
    cavity: CavityState, atom: AtomState, params: SimulationParams, t: float
) -> CavityState:
    """
    Cavity marginal of U (rho (x) chi) U^dag from the branch operators, without the joint state.
    """
    d = propagation_dim(cavity)
    rho = embed(cavity, d).matrix
    branches = branch_operators(params, t, d)
    gg, ee, eg, ge = branches.gg, branches.ee, branches.eg, branches.ge
    q, r = atom.q, atom.r

    # atom stays in g / stays in e
    stay_g = np.outer(gg, gg.conj()) * rho
    stay_e = np.outer(ee, ee.conj()) * rho
    # g -> e lowers the photon number, e -> g raises it
    lowered = np.zeros_like(rho)
    lowered[:-1, :-1] = np.outer(eg, eg.conj()) * rho[1:, 1:]
    raised = np.zeros_like(rho)
    raised[1:, 1:] = np.outer(ge, ge.conj()) * rho[:-1, :-1]

    coherence = np.zeros_like(rho)
    coherence[:, 1:] += gg[:, None] * rho[:, :-1] * ge.conj()[None, :]
    coherence[:-1, :] += eg[:, None] * rho[1:, :] * ee.conj()[None, :]
    coherence *= r

    sigma = q * (stay_g + lowered) + (1 - q) * (raised + stay_e) + coherence + coherence.conj().T
    return CavityState(matrix=hermitize(sigma))


class AtomMap(BaseModel):
    """
    Affine action of the closed evolution on the atom, at fixed cavity input:

        q(t) = q * stay + (1 - q) * rise + 2 Re[i r cross]
        r(t) = q * t1 + r * t2 + conj(r) * t3 + (1 - q) * t4
    """

    time: float
    stay: float
    rise: float
    cross: complex
    t1: complex
    t2: complex
    t3: complex
    t4: complex
    # sum_n (p_n + p_{n+1}) s_n^2, the exchange weight
    exchange: float

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    def apply(self, q: float, r: complex) -> Tuple[float, complex]:
        q_out = q * self.stay + (1 - q) * self.rise + 2 * (1j * r * self.cross).real
        r_out = q * self.t1 + r * self.t2 + r.conjugate() * self.t3 + (1 - q) * self.t4
        return q_out, r_out

    def superoperator(self) -> np.ndarray:
        """4x4 column-stacking matrix of the same map (basis chi_00, chi_10, chi_01, chi_11)."""
        s = self.cross
        return np.array(
            [
                [self.stay, -1j * s.conjugate(), 1j * s, self.rise],
                [np.conj(self.t1), np.conj(self.t2), np.conj(self.t3), np.conj(self.t4)],
                [self.t1, self.t3, self.t2, self.t4],
                [1 - self.stay, 1j * s.conjugate(), -1j * s, 1 - self.rise],
            ],
            dtype=complex,
        )


def atom_map(cavity: CavityState, params: SimulationParams, t: float) -> AtomMap:
    p = cavity.matrix
    size = cavity.dim
    s, c = _rotation(params, t, size + 1)
    c_prev = np.concatenate(([1.0], c[:-1]))
    populations = np.diagonal(p).real
    below = np.diagonal(p, -1)  # p_{n+1, n}
    above = np.diagonal(p, 1)  # p_{n, n+1}
    above2 = np.diagonal(p, 2)  # p_{n, n+2}
    phase = np.exp(1j * params.omega * t)
    m = size - 1

    return AtomMap(
        time=t,
        stay=float(np.sum(populations * c_prev[:size] ** 2)),
        rise=float(np.sum(populations * s[:size] ** 2)),
        cross=complex(np.sum(s[:m] * c[:m] * below)),
        t1=complex(1j * phase * np.sum(above * s[:m] * c_prev[:m])),
        t2=complex(phase * np.sum(populations * c_prev[:size] * c[:size])),
        t3=complex(phase * np.sum(above2 * s[: m - 1] * s[1:m])) if m >= 1 else 0j,
        t4=complex(-1j * phase * np.sum(above * s[:m] * c[1 : m + 1])),
        exchange=float(np.sum(populations * s[:size] ** 2) + np.sum(populations[1:] * s[:m] ** 2)),
    )


def atom_state_at(cavity: CavityState, atom: AtomState, params: SimulationParams, t: float) -> AtomState:
    q, r = atom_map(cavity, params, t).apply(atom.q, atom.r)
    return AtomState(q=q, r=r)


def atom_trajectory(
    cavity: CavityState, atom: AtomState, params: SimulationParams, t_grid: Sequence[float]
) -> List[AtomState]:
    return [atom_state_at(cavity, atom, params, float(t)) for t in t_grid]
