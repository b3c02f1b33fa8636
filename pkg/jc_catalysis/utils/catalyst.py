"""
Catalytic atom states: closed-form solutions for the resonant model and the
fixed point of the effective atom channel for any trace-preserving joint map.
"""
import logging
from typing import Sequence, Union

import numpy as np

from ..models.operators import EffectiveChannel
from ..models.params import SimulationParams
from ..models.records import AuxFunctions, Infeasible
from ..models.states import AtomState, CavityState
from .errors import DegenerateTime, InvalidState, NoPSDFixedPoint
from .hilbert import JointChannel, embed, partial_trace_multi, superop_to_choi, trace_distance
from .jc_core import atom_map
from .settings import (
    CATALYTIC_TOLERANCE,
    DEGENERACY_THRESHOLD,
    FIXED_POINT_CUTOFF,
    FIXED_POINT_RESIDUAL,
    POSITIVITY_TOLERANCE,
)

logger = logging.getLogger(__name__)

CatalystResult = Union[AtomState, Infeasible]


def aux_functions(cavity: CavityState, params: SimulationParams, t: float) -> AuxFunctions:
    """
    Coefficients of the coherence condition r a1 + q a2 + conj(r) a3 + a4 = 0.
    """
    series = atom_map(cavity, params, t)
    return AuxFunctions(
        a1=series.t2 - 1,
        a2=series.t1 - series.t4,
        a3=series.t3,
        a4=series.t4,
    )


def solve_catalyst_analytic(cavity: CavityState, params: SimulationParams, tau: float) -> CatalystResult:
    series = atom_map(cavity, params, tau)
    aux = aux_functions(cavity, params, tau)
    a1, a2, a3, a4 = aux.a1, aux.a2, aux.a3, aux.a4

    determinant = aux.coherence_determinant
    scale = max(1.0, abs(a1) ** 2, abs(a3) ** 2)
    if abs(determinant) < DEGENERACY_THRESHOLD * scale:
        raise DegenerateTime(f"|a1|^2 - |a3|^2 = {determinant:.3e} at tau={tau}")

    # r = r0 + q * r1 solves the coherence condition for given q
    r0 = (a3 * a4.conjugate() - a1.conjugate() * a4) / determinant
    r1 = (a3 * a2.conjugate() - a1.conjugate() * a2) / determinant

    numerator = series.rise + 2 * (1j * r0 * series.cross).real
    denominator = series.exchange - 2 * (1j * r1 * series.cross).real
    if abs(denominator) < DEGENERACY_THRESHOLD * max(1.0, abs(numerator)):
        raise DegenerateTime(f"population denominator {denominator:.3e} at tau={tau}")

    q = numerator / denominator
    r = r0 + q * r1
    if q < -POSITIVITY_TOLERANCE or q > 1 + POSITIVITY_TOLERANCE:
        return Infeasible(tau=tau, reason=f"q={q:.6g} outside [0, 1]")
    q = min(max(q, 0.0), 1.0)
    if q * (1 - q) - abs(r) ** 2 < -POSITIVITY_TOLERANCE:
        return Infeasible(tau=tau, reason=f"|r|^2={abs(r) ** 2:.6g} exceeds q(1-q)={q * (1 - q):.6g}")
    return AtomState(q=q, r=complex(r))


def solve_catalyst_incoherent(populations: Sequence[float], g: float, tau: float) -> float:
    """Ground occupation of the incoherent catalyst for a Fock-diagonal cavity."""
    p = np.asarray(populations, dtype=float)
    theta = g * tau * np.sqrt(np.arange(len(p)) + 1.0)
    s2 = np.sin(theta) ** 2
    shifted = np.append(p[1:], 0.0)
    denominator = float(np.sum((p + shifted) * s2))
    if abs(denominator) < DEGENERACY_THRESHOLD:
        raise DegenerateTime(f"incoherent denominator {denominator:.3e} at g*tau={g * tau}")
    return float(np.sum(p * s2)) / denominator


def effective_atom_channel(cavity: CavityState, channel_on_joint: JointChannel) -> EffectiveChannel:
    """chi -> Tr_S[channel(rho (x) chi)] assembled column by column."""
    d = channel_on_joint.cavity_dim
    rho = embed(cavity, d).matrix
    superop = np.zeros((4, 4), dtype=complex)
    for column in range(4):
        unit = np.zeros((2, 2), dtype=complex)
        unit[column % 2, column // 2] = 1.0
        image = partial_trace_multi(channel_on_joint(np.kron(rho, unit)), [d, 2], [1])
        superop[:, column] = image.reshape(-1, order="F")
    return EffectiveChannel(matrix=superop)


def closed_effective_channel(cavity: CavityState, params: SimulationParams, tau: float) -> EffectiveChannel:
    """Effective atom channel of the closed evolution, straight from the atom map."""
    return EffectiveChannel(matrix=atom_map(cavity, params, tau).superoperator())


def channel_choi(channel: EffectiveChannel) -> np.ndarray:
    return superop_to_choi(np.asarray(channel.matrix), 2)


def fixed_point(channel: EffectiveChannel) -> AtomState:
    """
    Maximum-entropy fixed point.

    In Bloch form the channel is b -> M b + c, so fixed points solve (1 - M) b = c.
    The minimum-norm solution is the shortest Bloch vector of the fixed set, i.e.
    the fixed state of largest entropy. Singular values under an absolute floor
    count as zero, so a channel that is the identity up to round-off gives the
    maximally mixed state.
    """
    transfer = channel.pauli_transfer()
    block, shift = transfer[1:, 1:], transfer[1:, 0]
    system = np.eye(3) - block
    left, singular, right = np.linalg.svd(system)
    cutoff = FIXED_POINT_CUTOFF * max(1.0, singular[0])
    inverse = np.divide(1.0, singular, out=np.zeros_like(singular), where=singular > cutoff)
    bloch = right.T @ (inverse * (left.T @ shift))
    logger.debug("fixed point kept %d of 3 singular directions", int(np.count_nonzero(inverse)))

    residual = np.linalg.norm(system @ bloch - shift)
    if residual > FIXED_POINT_RESIDUAL:
        raise NoPSDFixedPoint(f"Bloch fixed-point equation has residual {residual:.3e}")
    length = np.linalg.norm(bloch)
    if length > 1 + 1e-8:
        raise NoPSDFixedPoint(f"fixed point lies outside the Bloch ball (|b|={length:.6g})")
    if length > 1:
        bloch = bloch / length
    return AtomState.from_bloch(bloch)


def verify_catalytic(cavity: CavityState, atom: AtomState, channel_on_joint: JointChannel) -> float:
    d = channel_on_joint.cavity_dim
    evolved = channel_on_joint(np.kron(embed(cavity, d).matrix, atom.matrix))
    return trace_distance(atom.matrix, partial_trace_multi(evolved, [d, 2], [1]))


def closed_catalytic_residual(cavity: CavityState, atom: AtomState, params: SimulationParams, tau: float) -> float:
    """Delta of the closed evolution from the atom map alone."""
    q, r = atom_map(cavity, params, tau).apply(atom.q, atom.r)
    returned = np.array([[q, r], [np.conj(r), 1 - q]], dtype=complex)
    return trace_distance(atom.matrix, returned)


def solve_catalyst(cavity: CavityState, params: SimulationParams, tau: float) -> CatalystResult:
    """
    Closed-form catalyst, falling back to the effective-channel fixed point when the
    closed form is degenerate, infeasible or fails re-verification.
    """
    try:
        result = solve_catalyst_analytic(cavity, params, tau)
    except DegenerateTime as exc:
        logger.debug("falling back to fixed point: %s", exc.detail)
        result = None

    if isinstance(result, AtomState):
        delta = closed_catalytic_residual(cavity, result, params, tau)
        if delta <= CATALYTIC_TOLERANCE:
            return result
        logger.debug("closed-form catalyst at tau=%s misses by %.3e, using fixed point", tau, delta)
    elif isinstance(result, Infeasible):
        logger.debug("closed form infeasible at tau=%s (%s), using fixed point", tau, result.reason)

    try:
        return fixed_point(closed_effective_channel(cavity, params, tau))
    except (NoPSDFixedPoint, InvalidState) as exc:
        return Infeasible(tau=tau, reason=exc.detail)

