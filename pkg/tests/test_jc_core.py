import numpy as np
import pytest
from scipy.linalg import expm

from jc_catalysis.models.params import SimulationParams
from jc_catalysis.models.states import AtomState
from jc_catalysis.utils.catalyst import effective_atom_channel
from jc_catalysis.utils.errors import InvalidParameter
from jc_catalysis.utils.hilbert import coherent_state, fock_mixture_state, partial_trace
from jc_catalysis.utils.jc_core import (
    UnitaryChannel,
    atom_map,
    atom_state_at,
    atom_trajectory,
    evolve_closed,
    jc_hamiltonian,
    jc_propagator,
    number_operators,
    propagation_dim,
    reduced_cavity_analytic,
)


def test_propagator_matches_matrix_exponential():
    params = SimulationParams(omega=2 * np.pi, g=np.pi, n_trunc=5)
    t = 0.37
    unitary = jc_propagator(params, t).matrix
    expected = expm(-1j * jc_hamiltonian(params) * t)
    assert np.max(np.abs(unitary - expected)) < 1e-10


def test_propagator_is_unitary(resonant_params):
    unitary = jc_propagator(resonant_params, 3.3).matrix
    assert np.allclose(unitary @ unitary.conj().T, np.eye(unitary.shape[0]), atol=1e-12)


def test_propagator_at_zero_is_identity(small_params):
    unitary = jc_propagator(small_params, 0.0).matrix
    assert np.allclose(unitary, np.eye(unitary.shape[0]))


def test_full_rabi_transfer():
    params = SimulationParams(omega=2 * np.pi, g=np.pi, n_trunc=4)
    t = 0.5  # g t = pi / 2
    unitary = jc_propagator(params, t).matrix
    # |0, e> is index 1, |1, g> is index 2
    assert unitary[2, 1] == pytest.approx(-1j * np.exp(-0.5j * params.omega * t), abs=1e-12)
    assert abs(unitary[1, 1]) < 1e-12


@pytest.mark.parametrize("t1, t2", [(0.3, 1.1), (2.5, 0.0), (4.0, 7.7)])
def test_propagator_composes(resonant_params, t1, t2):
    product = jc_propagator(resonant_params, t1).matrix @ jc_propagator(resonant_params, t2).matrix
    assert np.max(np.abs(product - jc_propagator(resonant_params, t1 + t2).matrix)) < 1e-10


def test_uncoupled_hamiltonian_is_diagonal(small_params):
    hamiltonian = jc_hamiltonian(small_params, coupled=False)
    assert np.allclose(hamiltonian, np.diag(np.diagonal(hamiltonian)))
    coupling = jc_hamiltonian(small_params) - hamiltonian
    assert np.allclose(coupling, coupling.conj().T)
    assert coupling[2, 1] == pytest.approx(small_params.g)


def test_negative_time_rejected(small_params):
    with pytest.raises(InvalidParameter):
        jc_propagator(small_params, -1.0)


def test_excitation_number_is_conserved(resonant_params, coherent_cavity, random_atom):
    atom = random_atom()
    d = propagation_dim(coherent_cavity)
    n_s, n_c = number_operators(d)
    initial = np.kron(np.pad(coherent_cavity.matrix, (0, 1)), atom.matrix)
    final = evolve_closed(coherent_cavity, atom, resonant_params, 2.7).matrix
    total = n_s + n_c
    assert np.trace(total @ final).real == pytest.approx(np.trace(total @ initial).real, abs=1e-10)
    assert np.trace(final).real == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("t", [0.0, 0.4, 1.7, 5.0])
def test_reduced_cavity_matches_brute_force(resonant_params, random_atom, t):
    cavity = coherent_state(0.6 * np.exp(0.7j), 20)
    atom = random_atom()
    expected = partial_trace(evolve_closed(cavity, atom, resonant_params, t), "cavity")
    assert np.allclose(reduced_cavity_analytic(cavity, atom, resonant_params, t).matrix, expected.matrix, atol=1e-12)


def test_reduced_cavity_for_random_mixed_input(small_params, random_cavity, random_atom):
    cavity, atom = random_cavity(6), random_atom()
    expected = partial_trace(evolve_closed(cavity, atom, small_params, 1.3), "cavity")
    assert np.allclose(reduced_cavity_analytic(cavity, atom, small_params, 1.3).matrix, expected.matrix, atol=1e-12)


@pytest.mark.parametrize("t", [0.3, 1.0, 4.2])
def test_atom_map_matches_brute_force(resonant_params, random_atom, t):
    cavity = coherent_state(0.5 - 0.2j, 20)
    atom = random_atom()
    expected = partial_trace(evolve_closed(cavity, atom, resonant_params, t), "atom")
    assert np.allclose(atom_state_at(cavity, atom, resonant_params, t).matrix, expected.matrix, atol=1e-12)


def test_atom_map_superoperator_matches_effective_channel(resonant_params, coherent_cavity):
    t = 1.0
    closed_form = atom_map(coherent_cavity, resonant_params, t).superoperator()
    channel = UnitaryChannel(resonant_params, t, propagation_dim(coherent_cavity))
    assert np.allclose(closed_form, effective_atom_channel(coherent_cavity, channel).matrix, atol=1e-12)


def test_atom_map_is_identity_at_zero(coherent_cavity, resonant_params):
    atom = AtomState(q=0.3, r=0.2 + 0.1j)
    assert np.allclose(atom_state_at(coherent_cavity, atom, resonant_params, 0.0).matrix, atom.matrix)


def test_fock_input_keeps_atom_incoherent(resonant_params):
    cavity = fock_mixture_state([0.2, 0.5, 0.3], n_trunc=4)
    mapping = atom_map(cavity, resonant_params, 0.8)
    assert mapping.cross == 0
    assert mapping.t1 == 0 and mapping.t3 == 0 and mapping.t4 == 0


def test_atom_trajectory_starts_at_input(coherent_cavity, resonant_params):
    atom = AtomState(q=0.6, r=0.1j)
    trajectory = atom_trajectory(coherent_cavity, atom, resonant_params, np.linspace(0, 2, 5))
    assert len(trajectory) == 5
    assert np.allclose(trajectory[0].matrix, atom.matrix)
