"""
Truncated Fock / qubit state construction and basic density-matrix algebra.

Joint operators are ordered cavity-major with the atom basis (g, e), so the
joint index of |n, atom> is 2 * n + atom.
"""
import logging
from typing import Literal, Optional, Protocol, Sequence, Union

import numpy as np
from scipy.special import gammaln
from scipy.stats import poisson

from ..models.states import AtomState, CavityState, JointState
from .errors import DimensionMismatch, IndexOutOfRange, InvalidParameter, NonPSDInput, TruncationTooSmall
from .settings import PSD_FLOOR, TAIL_TOLERANCE

logger = logging.getLogger(__name__)

MatrixLike = Union[np.ndarray, CavityState, AtomState, JointState]


class JointChannel(Protocol):
    """Linear map on cavity-atom operators of side 2 * cavity_dim."""

    cavity_dim: int

    def __call__(self, operator: np.ndarray) -> np.ndarray:
        ...


def as_matrix(state: MatrixLike) -> np.ndarray:
    if isinstance(state, (CavityState, AtomState, JointState)):
        return state.matrix
    return np.asarray(state, dtype=complex)


def hermitize(matrix: np.ndarray) -> np.ndarray:
    return 0.5 * (matrix + matrix.conj().T)


def coherent_tail(alpha: complex, n_trunc: int) -> float:
    """Poisson mass of |alpha> above level n_trunc."""
    mean = abs(alpha) ** 2
    if mean == 0:
        return 0.0
    return float(poisson.sf(n_trunc, mean))


def minimal_truncation(alpha: complex, tail_tolerance: float = TAIL_TOLERANCE, floor: int = 1) -> int:
    """Smallest n_trunc >= floor whose coherent tail mass is within tolerance."""
    mean = abs(alpha) ** 2
    if mean == 0:
        return floor
    upper = int(mean + 40 * np.sqrt(mean) + 60)
    levels = np.arange(floor, upper + 1)
    passing = np.nonzero(poisson.sf(levels, mean) <= tail_tolerance)[0]
    if passing.size == 0:
        return upper
    return int(levels[passing[0]])


def coherent_state(alpha: complex, n_trunc: int, tail_tolerance: Optional[float] = None) -> CavityState:
    """
    |alpha><alpha| on levels 0..n_trunc, renormalized after truncation.
    """
    if n_trunc < 1:
        raise TruncationTooSmall(f"n_trunc must be at least 1, got {n_trunc}")
    tolerance = TAIL_TOLERANCE if tail_tolerance is None else tail_tolerance
    tail = coherent_tail(alpha, n_trunc)
    if tail > tolerance:
        raise TruncationTooSmall(
            f"coherent state alpha={alpha} loses tail mass {tail:.3e} at n_trunc={n_trunc} "
            f"(tolerance {tolerance:.1e}); use n_trunc >= {minimal_truncation(alpha, tolerance)}"
        )
    if alpha == 0:
        return fock_state(0, n_trunc)

    n = np.arange(n_trunc + 1)
    log_magnitude = n * np.log(abs(alpha)) - 0.5 * gammaln(n + 1) - 0.5 * abs(alpha) ** 2
    amplitudes = np.exp(log_magnitude + 1j * n * np.angle(alpha))
    amplitudes /= np.linalg.norm(amplitudes)
    return CavityState(matrix=np.outer(amplitudes, amplitudes.conj()))


def fock_state(n: int, n_trunc: int) -> CavityState:
    if not 0 <= n <= n_trunc:
        raise IndexOutOfRange(f"Fock level {n} outside 0..{n_trunc}")
    matrix = np.zeros((n_trunc + 1, n_trunc + 1), dtype=complex)
    matrix[n, n] = 1.0
    return CavityState(matrix=matrix)


def fock_mixture_state(populations: Sequence[float], n_trunc: Optional[int] = None) -> CavityState:
    """Incoherent mixture sum_n p_n |n><n|."""
    populations = np.asarray(populations, dtype=float)
    size = len(populations) if n_trunc is None else n_trunc + 1
    if size < len(populations):
        raise IndexOutOfRange(f"{len(populations)} populations do not fit n_trunc={n_trunc}")
    diagonal = np.zeros(size)
    diagonal[: len(populations)] = populations
    return CavityState(matrix=np.diag(diagonal).astype(complex))


def embed(cavity: CavityState, dim: int) -> CavityState:
    """Zero-pad a cavity state into `dim` Fock levels."""
    if dim == cavity.dim:
        return cavity
    if dim < cavity.dim:
        raise DimensionMismatch(f"cannot embed a {cavity.dim}-level state into {dim} levels")
    matrix = np.zeros((dim, dim), dtype=complex)
    matrix[: cavity.dim, : cavity.dim] = cavity.matrix
    return CavityState(matrix=matrix)


def tensor(cavity: CavityState, atom: AtomState) -> JointState:
    return JointState(matrix=np.kron(cavity.matrix, atom.matrix))


def partial_trace_multi(matrix: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """
    Reduce an operator on prod(dims) to the factors listed in `keep`.
    Works for arbitrary (not necessarily Hermitian) operators.
    """
    dims = list(dims)
    total = int(np.prod(dims))
    if matrix.shape != (total, total):
        raise DimensionMismatch(f"operator shape {matrix.shape} does not match factors {dims}")

    tensor_form = matrix.reshape(dims + dims)
    count = len(dims)
    for axis in sorted(set(range(count)) - set(keep), reverse=True):
        tensor_form = np.trace(tensor_form, axis1=axis, axis2=axis + count)
        count -= 1
    kept = int(np.prod([dims[i] for i in sorted(keep)]))
    return tensor_form.reshape(kept, kept)


def partial_trace(joint: JointState, keep: Literal["cavity", "atom"]) -> Union[CavityState, AtomState]:
    dims = [joint.cavity_dim, 2]
    if keep == "cavity":
        return CavityState(matrix=hermitize(partial_trace_multi(joint.matrix, dims, [0])))
    if keep == "atom":
        return AtomState.from_matrix(hermitize(partial_trace_multi(joint.matrix, dims, [1])))
    raise InvalidParameter(f"keep must be 'cavity' or 'atom', got {keep!r}")


def _same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} differ")


def trace_distance(a: MatrixLike, b: MatrixLike) -> float:
    """Schatten-1 norm of a - b (no factor 1/2, so the range is [0, 2])."""
    a, b = as_matrix(a), as_matrix(b)
    _same_shape(a, b)
    return float(np.linalg.norm(a - b, ord="nuc"))


def _psd_sqrt(matrix: np.ndarray) -> np.ndarray:
    eigenvalues, eigenvectors = np.linalg.eigh(hermitize(matrix))
    if eigenvalues[0] < PSD_FLOOR:
        raise NonPSDInput(f"matrix has negative eigenvalue {eigenvalues[0]:.3e}")
    roots = np.sqrt(np.clip(eigenvalues, 0.0, None))
    return (eigenvectors * roots) @ eigenvectors.conj().T


def uhlmann_fidelity(a: MatrixLike, b: MatrixLike) -> float:
    """Squared Uhlmann fidelity (Tr sqrt(sqrt(a) b sqrt(a)))**2."""
    a, b = as_matrix(a), as_matrix(b)
    _same_shape(a, b)
    overlap = np.linalg.norm(_psd_sqrt(a) @ _psd_sqrt(b), ord="nuc")
    return float(min(overlap ** 2, 1.0))


def destroy(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim)), k=1).astype(complex)


def number_operator(dim: int) -> np.ndarray:
    return np.diag(np.arange(dim)).astype(complex)


def vec(matrix: np.ndarray) -> np.ndarray:
    """Column stacking, so vec(A X B) = kron(B.T, A) vec(X)."""
    return np.asarray(matrix).reshape(-1, order="F")


def unvec(vector: np.ndarray, dim: int) -> np.ndarray:
    return np.asarray(vector).reshape((dim, dim), order="F")


def superop_to_choi(superop: np.ndarray, dim: int) -> np.ndarray:
    """
    Choi matrix sum_ij |i><j| (x) Phi(|i><j|) of a column-stacking superoperator.
    """
    return superop.reshape([dim] * 4).swapaxes(0, 3).reshape(dim ** 2, dim ** 2)
