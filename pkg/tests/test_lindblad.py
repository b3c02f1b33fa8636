import numpy as np
import pytest

from jc_catalysis.models.params import DissipationParams, SimulationParams
from jc_catalysis.models.states import AtomState
from jc_catalysis.utils.catalyst import verify_catalytic
from jc_catalysis.utils.errors import InvalidParameter, PropagationUnstable
from jc_catalysis.utils.hilbert import coherent_state, embed, fock_state, partial_trace_multi, tensor
from jc_catalysis.utils.jc_core import evolve_closed, propagation_dim
from jc_catalysis.utils.lindblad import (
    LindbladChannel,
    build_liouvillian,
    dissipative_catalyst,
    propagate,
    repair_density,
    thermal_occupation,
)

WEAK_PARAMS = SimulationParams(omega=2 * np.pi, g=0.1 * np.pi, n_trunc=6)
WEAK_DISS = DissipationParams(kappa=0.005, gamma=0.05, n_th=0.1)


@pytest.fixture
def cavity():
    return coherent_state(1 / np.sqrt(2), 6, tail_tolerance=1e-5)


def test_thermal_occupation():
    assert thermal_occupation(0.0) == 0.0
    assert thermal_occupation(1.0) == pytest.approx(1 / (np.e - 1))
    with pytest.raises(InvalidParameter):
        thermal_occupation(-1.0)


def test_closed_limit_matches_unitary_evolution(cavity, random_atom):
    atom = random_atom()
    liouvillian = build_liouvillian(WEAK_PARAMS, DissipationParams(), propagation_dim(cavity))
    channel = LindbladChannel(liouvillian, 3.0)
    initial = tensor(embed(cavity, propagation_dim(cavity)), atom)
    expected = evolve_closed(cavity, atom, WEAK_PARAMS, 3.0).matrix
    assert np.max(np.abs(channel(initial.matrix) - expected)) < 1e-10


def test_channel_is_trace_preserving_and_positive(cavity):
    liouvillian = build_liouvillian(WEAK_PARAMS, WEAK_DISS, 4)
    channel = LindbladChannel(liouvillian, 2.0)
    choi = channel.choi()
    assert np.linalg.eigvalsh(0.5 * (choi + choi.conj().T))[0] > -1e-9
    dim = liouvillian.joint_dim
    assert np.allclose(partial_trace_multi(choi, [dim, dim], [0]), np.eye(dim), atol=1e-10)


def test_zero_temperature_ground_state_is_stationary():
    params = SimulationParams(omega=2 * np.pi, g=np.pi, n_trunc=4)
    liouvillian = build_liouvillian(params, DissipationParams(kappa=0.2, gamma=0.1), 6)
    ground = tensor(fock_state(0, 5), AtomState(q=1.0))
    assert np.allclose(propagate(liouvillian, ground, 5.0).matrix, ground.matrix, atol=1e-10)


def test_repair_rejects_large_negative_eigenvalue():
    with pytest.raises(PropagationUnstable):
        repair_density(np.diag([1.001, -0.001]).astype(complex))
    repaired = repair_density(np.diag([1.0 + 1e-12, -1e-12]).astype(complex))
    assert np.trace(repaired).real == pytest.approx(1.0)
    assert np.linalg.eigvalsh(repaired)[0] >= 0


def test_negative_time_rejected(cavity):
    liouvillian = build_liouvillian(WEAK_PARAMS, WEAK_DISS, propagation_dim(cavity))
    with pytest.raises(InvalidParameter):
        LindbladChannel(liouvillian, -0.1)


@pytest.mark.parametrize("tau", [1.0, 5.0, 20.0])
def test_dissipative_catalyst_returns(cavity, tau):
    liouvillian = build_liouvillian(WEAK_PARAMS, WEAK_DISS, propagation_dim(cavity))
    channel = LindbladChannel(liouvillian, tau)
    atom = dissipative_catalyst(cavity, liouvillian, tau, channel=channel)
    assert verify_catalytic(cavity, atom, channel) <= 1e-8


def test_thermal_bath_heats_the_vacuum():
    params = SimulationParams(omega=2 * np.pi, g=np.pi, n_trunc=8)
    liouvillian = build_liouvillian(params, DissipationParams(kappa=0.5, n_th=0.3), 10)
    state = propagate(liouvillian, tensor(fock_state(0, 9), AtomState(q=1.0)), 1.0)
    cavity = partial_trace_multi(state.matrix, [10, 2], [0])
    mean = float(np.sum(np.arange(10) * np.diagonal(cavity).real))
    assert 0 < mean < 0.3


def test_open_catalyst_at_zero_time_is_maximally_mixed(cavity):
    liouvillian = build_liouvillian(WEAK_PARAMS, WEAK_DISS, propagation_dim(cavity))
    atom = dissipative_catalyst(cavity, liouvillian, 0.0)
    assert atom.q == pytest.approx(0.5, abs=1e-12)
    assert abs(atom.r) < 1e-12


def test_open_catalyst_near_zero_time_is_reproducible(cavity):
    liouvillian = build_liouvillian(WEAK_PARAMS, WEAK_DISS, propagation_dim(cavity))
    first = dissipative_catalyst(cavity, liouvillian, 1e-9)
    second = dissipative_catalyst(cavity, liouvillian, 2e-9)
    assert np.allclose(first.matrix, second.matrix, atol=1e-3)
    assert verify_catalytic(cavity, first, LindbladChannel(liouvillian, 1e-9)) <= 1e-8


def test_liouvillian_spectrum_has_no_growing_modes():
    liouvillian = build_liouvillian(WEAK_PARAMS, WEAK_DISS, 5)
    assert np.linalg.eigvals(np.asarray(liouvillian.matrix)).real.max() <= 1e-10


def test_free_cavity_relaxes_to_bath_occupation():
    params = SimulationParams(omega=2 * np.pi, g=np.pi, n_trunc=14)
    liouvillian = build_liouvillian(params, DissipationParams(kappa=0.5, n_th=0.3), 16, coupled=False)
    state = propagate(liouvillian, tensor(fock_state(0, 15), AtomState(q=1.0)), 60.0)
    cavity = partial_trace_multi(state.matrix, [16, 2], [0])
    mean = float(np.sum(np.arange(16) * np.diagonal(cavity).real))
    assert mean == pytest.approx(0.3, abs=1e-6)


def test_free_cavity_purity_never_grows():
    params = SimulationParams(omega=2 * np.pi, g=np.pi, n_trunc=14)
    liouvillian = build_liouvillian(params, DissipationParams(kappa=0.2, gamma=0.05, n_th=0.1), 16, coupled=False)
    state = tensor(embed(coherent_state(1 / np.sqrt(2), 14), 16), AtomState(q=1.0))
    step = LindbladChannel(liouvillian, 0.25)
    purities = []
    for _ in range(40):
        cavity = partial_trace_multi(state.matrix, [16, 2], [0])
        purities.append(float(np.trace(cavity @ cavity).real))
        state = step.evolve(state)
    assert np.all(np.diff(purities) <= 1e-9)
    assert purities[-1] < purities[0] - 1e-3
