"""
Non-classicality witnesses of a cavity state: photon statistics, Wigner
function and its logarithmic negativity, and quadrature squeezing.

Phase-space convention: x = (a + a^dag) / sqrt(2), p = (a - a^dag) / (i sqrt(2)),
so the vacuum has variance 1/2 and W_vacuum(0, 0) = 1 / pi.
"""
import logging
from math import comb
from typing import Optional, Tuple

import numpy as np
from scipy.integrate import trapezoid
from scipy.special import eval_genlaguerre, gammaln

from ..models.params import SimulationParams
from ..models.records import WignerField, WitnessReport
from ..models.states import AtomState, CavityState
from .catalyst import closed_catalytic_residual
from .errors import GridTooSmall, InvalidParameter, NotCatalytic, VacuumUndefined
from .hilbert import embed
from .jc_core import evolve_closed, number_operators, propagation_dim
from .settings import DEFAULT_GRID_POINTS, MASS_TOLERANCE, PREDICTION_TOLERANCE

logger = logging.getLogger(__name__)


def photon_moment(state: CavityState, k: int = 1) -> float:
    n = np.arange(state.dim, dtype=float)
    return float(np.sum(n ** k * state.populations))


def mean_photon_number(state: CavityState) -> float:
    return photon_moment(state, 1)


def g2(state: CavityState) -> float:
    """Second-order auto-correlation (<n^2> - <n>) / <n>^2."""
    mean = mean_photon_number(state)
    if mean <= 1e-12:
        raise VacuumUndefined(f"g2 is undefined for <n> = {mean:.3e}")
    return (photon_moment(state, 2) - mean) / mean ** 2


def photon_atom_correlation(cavity: CavityState, atom: AtomState, params: SimulationParams, tau: float) -> float:
    """<n_S (x) n_C> after the closed evolution, with n_C = |e><e|."""
    p = cavity.matrix
    size = cavity.dim
    theta = params.g * tau * np.sqrt(np.arange(size) + 1.0)
    s, c = np.sin(theta), np.cos(theta)
    n = np.arange(size, dtype=float)
    populations = np.diagonal(p).real
    shifted = np.append(populations[1:], 0.0)
    below = np.append(np.diagonal(p, -1), 0.0)  # p_{n+1, n}
    y = 2 * np.imag(atom.r * below) * s * c
    return float(np.sum(n * ((1 - atom.q) * populations * c ** 2 + y + atom.q * shifted * s ** 2)))


def second_moment_catalytic(cavity: CavityState, atom: AtomState, params: SimulationParams, tau: float) -> float:
    """<n_S^2> of the final cavity when the atom returns to itself."""
    correlation = photon_atom_correlation(cavity, atom, params, tau)
    return photon_moment(cavity, 2) - 2 * (correlation - (1 - atom.q) * mean_photon_number(cavity))


def g2_catalytic_predict(cavity: CavityState, atom: AtomState, params: SimulationParams, tau: float) -> float:
    """g2 of the final cavity state from the conserved-moment relation, no joint state."""
    delta = closed_catalytic_residual(cavity, atom, params, tau)
    if delta > PREDICTION_TOLERANCE:
        raise NotCatalytic(f"atom misses the catalytic constraint by {delta:.3e} at tau={tau}")
    mean = mean_photon_number(cavity)
    if mean <= 1e-12:
        raise VacuumUndefined(f"g2 is undefined for <n> = {mean:.3e}")
    return (second_moment_catalytic(cavity, atom, params, tau) - mean) / mean ** 2


def verify_moment_relation(
    cavity: CavityState, atom: AtomState, params: SimulationParams, t: float, k: int
) -> float:
    """
    Residual of <O_S^k>_f = <O_S^k>_i + <O_C^k>_i - <O_C^k>_f + Tr[D_k (i - f)] for the
    conserved total excitation O_S + O_C, D_k = sum_{j=1}^{k-1} C(k, j) O_S^(k-j) O_C^j.
    """
    if k < 2:
        raise InvalidParameter(f"moment order must be at least 2, got {k}")
    d = propagation_dim(cavity)
    initial = np.kron(embed(cavity, d).matrix, atom.matrix)
    final = evolve_closed(cavity, atom, params, t).matrix
    n_s, n_c = number_operators(d)
    n_s, n_c = np.diag(n_s).real, np.diag(n_c).real

    def expect(weights: np.ndarray, matrix: np.ndarray) -> float:
        return float(np.sum(weights * np.diagonal(matrix).real))

    cross = sum(comb(k, j) * n_s ** (k - j) * n_c ** j for j in range(1, k))
    predicted = (
        expect(n_s ** k, initial)
        + expect(n_c ** k, initial)
        - expect(n_c ** k, final)
        + expect(cross, initial - final)
    )
    return abs(expect(n_s ** k, final) - predicted)


def quadrature_moments(state: CavityState) -> Tuple[float, float, float, float]:
    """(<X1>, <X1^2>, <X2>, <X2^2>), using <a a^dag> = <n> + 1."""
    rho = state.matrix
    n = np.arange(state.dim)
    mean_a = complex(np.sum(np.sqrt(n[1:]) * np.diagonal(rho, -1)))
    mean_a2 = complex(np.sum(np.sqrt(n[1:-1] * n[2:]) * np.diagonal(rho, -2))) if state.dim > 2 else 0j
    mean_n = mean_photon_number(state)
    x1 = np.sqrt(2) * mean_a.real
    x2 = np.sqrt(2) * mean_a.imag
    x1_sq = (2 * mean_a2.real + 2 * mean_n + 1) / 2
    x2_sq = (-2 * mean_a2.real + 2 * mean_n + 1) / 2
    return x1, x1_sq, x2, x2_sq


def squeezing_xi(state: CavityState) -> float:
    """sqrt(2) * Delta X1; 1 for every coherent state."""
    x1, x1_sq, _, _ = quadrature_moments(state)
    return float(np.sqrt(2 * max(x1_sq - x1 ** 2, 0.0)))


def default_grid(
    state: CavityState, alpha: Optional[complex] = None, points: int = DEFAULT_GRID_POINTS
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Square grid [-L, L]^2 covering the state by at least five standard deviations.
    """
    x1, x1_sq, x2, x2_sq = quadrature_moments(state)
    spread = np.sqrt(max(x1_sq - x1 ** 2, x2_sq - x2 ** 2, 0.0))
    amplitude = abs(alpha) if alpha is not None else np.sqrt(mean_photon_number(state))
    extent = max(np.sqrt(2) * (amplitude + 3) + 1, max(abs(x1), abs(x2)) + 5 * spread)
    grid = np.linspace(-extent, extent, points)
    return grid, grid.copy()


def _check_uniform(grid: np.ndarray, label: str) -> float:
    if grid.ndim != 1 or len(grid) < 3:
        raise GridTooSmall(f"{label} grid needs at least three points")
    steps = np.diff(grid)
    if np.any(steps <= 0) or not np.allclose(steps, steps[0], rtol=1e-9, atol=0):
        raise GridTooSmall(f"{label} grid is not uniform and increasing")
    return float(steps[0])


def _integrate(values: np.ndarray, x_grid: np.ndarray, p_grid: np.ndarray) -> float:
    return float(trapezoid(trapezoid(values, p_grid, axis=1), x_grid))


def wigner(
    state: CavityState, x_grid: np.ndarray, p_grid: np.ndarray, mass_tolerance: float = MASS_TOLERANCE
) -> WignerField:
    """
    Fock-basis closed form, for m >= n:
    W_{|m><n|} = (-1)^n / pi sqrt(n!/m!) (sqrt(2)(x - ip))^(m-n) e^(-r^2) L_n^(m-n)(2 r^2).
    """
    x_grid = np.asarray(x_grid, dtype=float)
    p_grid = np.asarray(p_grid, dtype=float)
    _check_uniform(x_grid, "x")
    _check_uniform(p_grid, "p")

    x, p = np.meshgrid(x_grid, p_grid, indexing="ij")
    radius2 = x ** 2 + p ** 2
    envelope = np.exp(-radius2) / np.pi
    zeta = np.sqrt(2) * (x - 1j * p)
    rho = state.matrix

    values = np.zeros_like(radius2)
    for n in range(state.dim):
        power = np.ones_like(zeta)
        for m in range(n, state.dim):
            if m > n:
                power = power * zeta
            coefficient = rho[m, n]
            if coefficient == 0:
                continue
            weight = (-1) ** n * np.exp(0.5 * (gammaln(n + 1) - gammaln(m + 1)))
            term = coefficient * weight * power * eval_genlaguerre(n, m - n, 2 * radius2)
            values += (term.real if m == n else 2 * term.real) * envelope

    mass = _integrate(values, x_grid, p_grid)
    if abs(mass - 1) > mass_tolerance:
        raise GridTooSmall(f"Wigner mass on grid is {mass:.6f}; enlarge the grid")
    return WignerField(x_grid=x_grid, p_grid=p_grid, values=values)


def wln_of_field(field: WignerField) -> float:
    """log of the grid-integrated |W|, clamped at zero."""
    total = _integrate(np.abs(field.values), field.x_grid, field.p_grid)
    return max(float(np.log(total)), 0.0)


def wln(state: CavityState, x_grid: np.ndarray, p_grid: np.ndarray) -> float:
    return wln_of_field(wigner(state, x_grid, p_grid))


def witness_report(
    state: CavityState,
    grid: Optional[Tuple[np.ndarray, np.ndarray]] = None,
    alpha: Optional[complex] = None,
) -> WitnessReport:
    x_grid, p_grid = grid if grid is not None else default_grid(state, alpha)
    mean = mean_photon_number(state)
    return WitnessReport(
        mean_n=mean,
        second_moment_n=photon_moment(state, 2),
        g2=g2(state) if mean > 1e-12 else None,
        wln=wln(state, x_grid, p_grid),
        xi=squeezing_xi(state),
    )
