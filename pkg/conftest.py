from typing import Optional

import numpy as np
import pytest

from jc_catalysis.models.params import SimulationParams
from jc_catalysis.models.records import Infeasible
from jc_catalysis.models.states import AtomState, CavityState
from jc_catalysis.utils.catalyst import closed_catalytic_residual, solve_catalyst
from jc_catalysis.utils.hilbert import coherent_state

ALPHA = 1 / np.sqrt(2)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def resonant_params():
    return SimulationParams(omega=2 * np.pi, g=np.pi, n_trunc=20)


@pytest.fixture
def small_params():
    return SimulationParams(omega=2 * np.pi, g=np.pi, n_trunc=6)


@pytest.fixture
def coherent_cavity():
    return coherent_state(ALPHA, 20)


@pytest.fixture
def small_cavity():
    return coherent_state(ALPHA, 6, tail_tolerance=1e-5)


def random_density(rng: np.random.Generator, dim: int, rank: Optional[int] = None) -> np.ndarray:
    rank = dim if rank is None else rank
    factor = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    matrix = factor @ factor.conj().T
    return matrix / np.trace(matrix).real


@pytest.fixture
def random_cavity(rng):
    def build(dim: int, rank: Optional[int] = None) -> CavityState:
        return CavityState(matrix=random_density(rng, dim, rank))

    return build


@pytest.fixture
def random_atom(rng):
    def build() -> AtomState:
        return AtomState.from_matrix(random_density(rng, 2))

    return build


def first_catalytic_tau(cavity, params, taus):
    """First tau of `taus` with a verified catalyst, and that catalyst."""
    for tau in taus:
        atom = solve_catalyst(cavity, params, float(tau))
        if isinstance(atom, Infeasible):
            continue
        if closed_catalytic_residual(cavity, atom, params, float(tau)) <= 1e-8:
            return float(tau), atom
    raise AssertionError("no catalytic time on the grid")


@pytest.fixture
def find_catalytic_tau():
    return first_catalytic_tau
