import numpy as np
import pytest
from scipy.integrate import trapezoid
from scipy.special import eval_hermite, factorial

from jc_catalysis.models.records import Infeasible
from jc_catalysis.models.states import AtomState, CavityState
from jc_catalysis.utils.catalyst import closed_catalytic_residual, solve_catalyst
from jc_catalysis.utils.errors import GridTooSmall, NotCatalytic, VacuumUndefined
from jc_catalysis.utils.hilbert import coherent_state, fock_mixture_state, fock_state, partial_trace
from jc_catalysis.utils.jc_core import evolve_closed, reduced_cavity_analytic
from jc_catalysis.utils.witness import (
    default_grid,
    g2,
    mean_photon_number,
    g2_catalytic_predict,
    photon_moment,
    second_moment_catalytic,
    squeezing_xi,
    verify_moment_relation,
    wigner,
    witness_report,
    wln,
)


@pytest.mark.parametrize("alpha", [0.3, 1 / np.sqrt(2), 1.5 - 0.5j])
def test_g2_of_coherent_state_is_one(alpha):
    assert g2(coherent_state(alpha, 40)) == pytest.approx(1.0, abs=1e-9)


def test_g2_of_fock_and_thermal_states():
    assert g2(fock_state(1, 3)) == pytest.approx(0.0)
    assert g2(fock_state(4, 6)) == pytest.approx(0.75)
    n_th = 0.5
    levels = np.arange(120)
    populations = n_th ** levels / (1 + n_th) ** (levels + 1)
    thermal = fock_mixture_state(populations / populations.sum())
    assert g2(thermal) == pytest.approx(2.0, abs=1e-9)


def test_g2_of_vacuum_is_undefined():
    with pytest.raises(VacuumUndefined):
        g2(fock_state(0, 3))


def test_squeezing_of_coherent_and_vacuum():
    assert squeezing_xi(coherent_state(0.8 + 0.3j, 30)) == pytest.approx(1.0, abs=1e-9)
    assert squeezing_xi(fock_state(0, 4)) == pytest.approx(1.0)


def test_squeezed_superposition_has_xi_below_one():
    # |0> + eps |2> reduces the X1 variance for small real eps of the right sign
    eps = -0.2
    amplitudes = np.array([1, 0, eps], dtype=complex)
    amplitudes /= np.linalg.norm(amplitudes)
    state = CavityState(matrix=np.outer(amplitudes, amplitudes.conj()))
    assert squeezing_xi(state) < 1


def test_vacuum_wigner_at_origin():
    axis = np.linspace(-6, 6, 121)
    field = wigner(fock_state(0, 3), axis, axis)
    assert field.values[60, 60] == pytest.approx(1 / np.pi, abs=1e-12)


def test_coherent_wigner_peak_and_positivity():
    alpha = 0.8 - 0.4j
    state = coherent_state(alpha, 30)
    x_grid, p_grid = default_grid(state, alpha)
    field = wigner(state, x_grid, p_grid)
    i, j = np.unravel_index(np.argmax(field.values), field.values.shape)
    step = x_grid[1] - x_grid[0]
    assert abs(x_grid[i] - np.sqrt(2) * alpha.real) <= step
    assert abs(p_grid[j] - np.sqrt(2) * alpha.imag) <= step
    assert field.values.min() > -1e-12
    assert wln(state, x_grid, p_grid) == pytest.approx(0.0, abs=1e-4)


def test_single_photon_negativity():
    state = fock_state(1, 3)
    axis = np.linspace(-6, 6, 481)
    field = wigner(state, axis, axis)
    assert field.values[240, 240] == pytest.approx(-1 / np.pi, abs=1e-12)
    # integral of |W| for |1> is 4 exp(-1/2) - 1
    assert wln(state, axis, axis) == pytest.approx(np.log(4 * np.exp(-0.5) - 1), abs=1e-3)


def test_wigner_rejects_small_or_uneven_grids():
    state = fock_state(0, 2)
    with pytest.raises(GridTooSmall):
        wigner(state, np.linspace(-1, 1, 51), np.linspace(-1, 1, 51))
    with pytest.raises(GridTooSmall):
        wigner(state, np.array([-6.0, -1.0, 0.0, 6.0]), np.linspace(-6, 6, 101))


def test_moment_relation_holds_for_random_inputs(resonant_params, random_cavity, random_atom):
    cavity, atom = random_cavity(8), random_atom()
    for k in (2, 3):
        assert verify_moment_relation(cavity, atom, resonant_params, 1.9, k) < 1e-9


def test_catalytic_prediction_matches_direct_g2(coherent_cavity, resonant_params, find_catalytic_tau):
    tau, atom = find_catalytic_tau(coherent_cavity, resonant_params, np.linspace(0.5, 10, 40))
    final = reduced_cavity_analytic(coherent_cavity, atom, resonant_params, tau)
    assert g2_catalytic_predict(coherent_cavity, atom, resonant_params, tau) == pytest.approx(g2(final), abs=1e-8)
    assert second_moment_catalytic(coherent_cavity, atom, resonant_params, tau) == pytest.approx(
        photon_moment(final, 2), abs=1e-9
    )


def test_prediction_needs_a_catalyst(coherent_cavity, resonant_params):
    with pytest.raises(NotCatalytic):
        g2_catalytic_predict(coherent_cavity, AtomState(q=0.0), resonant_params, 0.25)


def test_witness_report_of_fock_state():
    report = witness_report(fock_state(1, 4))
    assert report.mean_n == pytest.approx(1.0)
    assert report.second_moment_n == pytest.approx(1.0)
    assert report.g2 == pytest.approx(0.0)
    assert report.wln > 0.3
    assert report.xi > 1


def test_witness_report_of_vacuum_has_no_g2():
    report = witness_report(fock_state(0, 4))
    assert report.g2 is None
    assert report.xi == pytest.approx(1.0)


def test_wigner_marginal_is_position_distribution(random_cavity):
    state = random_cavity(5)
    x_grid, p_grid = np.linspace(-7, 7, 141), np.linspace(-8, 8, 321)
    marginal = trapezoid(wigner(state, x_grid, p_grid).values, p_grid, axis=1)
    levels = np.arange(state.dim)
    norms = 1 / np.sqrt(2.0**levels * factorial(levels) * np.sqrt(np.pi))
    modes = norms[:, None] * np.array([eval_hermite(n, x_grid) for n in levels]) * np.exp(-(x_grid**2) / 2)
    expected = np.einsum("mx,mn,nx->x", modes, np.asarray(state.matrix).real, modes)
    assert np.max(np.abs(marginal - expected)) < 1e-4


def test_fock_mixture_reaches_half(resonant_params):
    cavity = fock_mixture_state([0.25, 0.0, 0.75])
    tau = 7.5  # g tau = 7.5 pi
    atom = solve_catalyst(cavity, resonant_params, tau)
    assert g2(cavity) == pytest.approx(2 / 3)
    assert g2_catalytic_predict(cavity, atom, resonant_params, tau) == pytest.approx(0.505, abs=0.005)
    final = partial_trace(evolve_closed(cavity, atom, resonant_params, tau), "cavity")
    assert g2(final) == pytest.approx(0.505, abs=0.005)


def test_catalytic_second_moment_on_random_inputs(resonant_params, random_cavity, rng):
    checked = 0
    for _ in range(500):
        if checked == 50:
            break
        cavity, tau = random_cavity(6), float(rng.uniform(0.1, 10))
        atom = solve_catalyst(cavity, resonant_params, tau)
        if isinstance(atom, Infeasible):
            continue
        delta = closed_catalytic_residual(cavity, atom, resonant_params, tau)
        if delta > 1e-8:
            continue
        final = reduced_cavity_analytic(cavity, atom, resonant_params, tau)
        # an imperfect catalyst shifts <n_S n_C> by at most <n> delta
        slack = 1e-9 + mean_photon_number(cavity) * delta
        assert second_moment_catalytic(cavity, atom, resonant_params, tau) == pytest.approx(
            photon_moment(final, 2), abs=slack
        )
        assert verify_moment_relation(cavity, atom, resonant_params, tau, 3) <= 1e-8
        checked += 1
    assert checked == 50
