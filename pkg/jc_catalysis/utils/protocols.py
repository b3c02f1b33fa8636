"""
Composite experiments built on the closed and open catalytic pipelines.

Parallel sweeps hand out pre-computed inputs to a thread pool and collect the
results in input order, so outputs do not depend on the worker count.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from itertools import combinations
from typing import Callable, Iterable, List, Optional, Sequence, Tuple, TypeVar

import numpy as np

from ..models.params import DissipationParams, SimulationParams
from ..models.records import (
    AlphaScanRow,
    CatalyticTime,
    DissipativeRow,
    Infeasible,
    MultiCavityResult,
    ScanRecord,
    TimeSample,
)
from ..models.states import AtomState, CavityState
from .catalyst import closed_catalytic_residual, solve_catalyst
from .errors import DimensionBudgetExceeded, InvalidParameter, NoFeasibleTau, NotCatalytic, VacuumUndefined
from .hilbert import (
    coherent_state,
    embed,
    minimal_truncation,
    partial_trace,
    partial_trace_multi,
    tensor,
    trace_distance,
    uhlmann_fidelity,
)
from .jc_core import atom_state_at, jc_propagator, propagation_dim, reduced_cavity_analytic
from .lindblad import LindbladChannel, build_liouvillian, dissipative_catalyst
from .settings import (
    CATALYTIC_TOLERANCE,
    DEFAULT_GRID_POINTS,
    MAX_JOINT_DIM,
    RESOLVE_POINTS,
    RESOLVE_WINDOW,
    TAIL_TOLERANCE,
)
from .witness import (
    default_grid,
    g2,
    g2_catalytic_predict,
    squeezing_xi,
    wln,
)

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

Grid = Tuple[np.ndarray, np.ndarray]


def parallel_map(function: Callable[[T], R], items: Iterable[T], threads: int = 1) -> List[R]:
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [function(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(function, items))


def _catalyst_or_raise(cavity: CavityState, params: SimulationParams, tau: float) -> AtomState:
    atom = solve_catalyst(cavity, params, tau)
    if isinstance(atom, Infeasible):
        raise NotCatalytic(f"no catalyst at tau={tau}: {atom.reason}")
    return atom


def _safe_g2(state: CavityState) -> float:
    try:
        return g2(state)
    except VacuumUndefined:
        return float("nan")


def scan_time_series(
    cavity: CavityState,
    params: SimulationParams,
    t_grid: Sequence[float],
    atom: Optional[AtomState] = None,
    with_g2: bool = True,
    with_wln: bool = False,
    with_xi: bool = False,
    grid: Optional[Grid] = None,
    grid_points: int = DEFAULT_GRID_POINTS,
    threads: int = 1,
) -> List[TimeSample]:
    """
    Witnesses of the cavity and the atom's return distance along [0, tau], the catalyst
    being solved for the last time of the grid.
    """
    if atom is None:
        atom = _catalyst_or_raise(cavity, params, float(t_grid[-1]))

    def sample(t: float) -> TimeSample:
        final = reduced_cavity_analytic(cavity, atom, params, t)
        current = atom_state_at(cavity, atom, params, t)
        return TimeSample(
            t=t,
            delta=trace_distance(atom, current),
            q=current.q,
            r=current.r,
            g2=_safe_g2(final) if with_g2 else None,
            wln=wln(final, *(grid or default_grid(final, points=grid_points))) if with_wln else None,
            xi=squeezing_xi(final) if with_xi else None,
        )

    return parallel_map(sample, [float(t) for t in t_grid], threads)


def scan_g2_vs_time(
    cavity: CavityState, params: SimulationParams, t_grid: Sequence[float], **kwargs
) -> List[TimeSample]:
    return scan_time_series(cavity, params, t_grid, with_g2=True, **kwargs)


def scan_wln_vs_time(
    cavity: CavityState, params: SimulationParams, t_grid: Sequence[float], **kwargs
) -> List[TimeSample]:
    return scan_time_series(cavity, params, t_grid, with_g2=False, with_wln=True, **kwargs)


def scan_xi_vs_time(
    cavity: CavityState, params: SimulationParams, t_grid: Sequence[float], **kwargs
) -> List[TimeSample]:
    return scan_time_series(cavity, params, t_grid, with_g2=False, with_xi=True, **kwargs)


def catalytic_witness(
    cavity: CavityState, params: SimulationParams, tau: float, witness: str = "g2"
) -> Optional[Tuple[AtomState, float, float]]:
    """(catalyst, witness of the final cavity, delta), or None when no verified catalyst exists."""
    atom = solve_catalyst(cavity, params, tau)
    if isinstance(atom, Infeasible):
        return None
    delta = closed_catalytic_residual(cavity, atom, params, tau)
    if delta > CATALYTIC_TOLERANCE:
        return None
    if witness == "g2":
        value = g2_catalytic_predict(cavity, atom, params, tau)
    elif witness == "xi":
        value = squeezing_xi(reduced_cavity_analytic(cavity, atom, params, tau))
    else:
        raise InvalidParameter(f"unknown witness {witness!r}")
    return atom, value, delta


def resolve_catalytic_time(
    cavity: CavityState,
    params: SimulationParams,
    candidates: Sequence[float],
    window: float = RESOLVE_WINDOW,
    n_points: int = RESOLVE_POINTS,
    witness: str = "g2",
    target: Optional[float] = None,
) -> CatalyticTime:
    """
    Scan [c - window, c + window] around each candidate time and keep the verified
    catalytic time whose witness is closest to `target` (smallest when no target).
    """
    best: Optional[CatalyticTime] = None
    for candidate in candidates:
        low = max(candidate - window, 0.0)
        for tau in np.linspace(low, candidate + window, n_points):
            if tau <= 0:
                continue
            point = catalytic_witness(cavity, params, float(tau), witness)
            if point is None or not np.isfinite(point[1]):
                continue
            _, value, delta = point
            score = value if target is None else abs(value - target)
            if best is None or score < (best.value if target is None else abs(best.value - target)):
                best = CatalyticTime(tau=float(tau), candidate=candidate, witness=witness, value=value, delta=delta)
    if best is None:
        raise NoFeasibleTau(f"no catalytic time near {list(candidates)}")
    logger.info("resolved catalytic time tau=%.6f near %s (%s=%.6f)", best.tau, best.candidate, witness, best.value)
    return best


def _min_over_tau(
    alpha: float,
    params: SimulationParams,
    gtau_bound: float,
    n_tau: int,
    witness: str,
    tail_tolerance: float,
) -> AlphaScanRow:
    n_trunc = max(params.n_trunc, minimal_truncation(alpha, tail_tolerance))
    cavity = coherent_state(alpha, n_trunc, tail_tolerance)
    tau_max = gtau_bound / abs(params.g)
    best_value, best_tau = np.inf, np.nan
    for tau in np.linspace(tau_max / n_tau, tau_max, n_tau):
        point = catalytic_witness(cavity, params, float(tau), witness)
        if point is not None and point[1] < best_value:
            best_value, best_tau = point[1], float(tau)
    if not np.isfinite(best_value):
        raise NoFeasibleTau(f"no feasible catalytic time for alpha={alpha}")
    return AlphaScanRow(alpha=alpha, min_value=float(best_value), argmin_tau=best_tau, witness=witness)


def scan_min_g2_vs_alpha(
    alpha_grid: Sequence[float],
    params: SimulationParams,
    gtau_bound: float,
    n_tau: int = 2000,
    threads: int = 1,
    tail_tolerance: float = TAIL_TOLERANCE,
) -> List[AlphaScanRow]:
    """Smallest catalytic g2 over tau in (0, gtau_bound / g] for each |alpha|."""
    if gtau_bound <= 0:
        raise InvalidParameter("gtau_bound must be positive")
    return parallel_map(
        lambda alpha: _min_over_tau(abs(alpha), params, gtau_bound, n_tau, "g2", tail_tolerance),
        alpha_grid,
        threads,
    )


def scan_min_xi_vs_alpha(
    alpha_grid: Sequence[float],
    params: SimulationParams,
    gtau_bound: float,
    n_tau: int = 2000,
    threads: int = 1,
    tail_tolerance: float = TAIL_TOLERANCE,
) -> List[AlphaScanRow]:
    if gtau_bound <= 0:
        raise InvalidParameter("gtau_bound must be positive")
    return parallel_map(
        lambda alpha: _min_over_tau(abs(alpha), params, gtau_bound, n_tau, "xi", tail_tolerance),
        alpha_grid,
        threads,
    )


def catalytic_set_scan(
    cavity: CavityState,
    params: SimulationParams,
    n_samples: int,
    gtau_bound: float,
    seed: int = 0,
    threads: int = 1,
) -> List[ScanRecord]:
    """
    Catalysts for tau drawn uniformly from (0, gtau_bound / g]; samples without a
    verified catalyst are kept with feasible=False.
    """
    if n_samples < 1:
        raise InvalidParameter("n_samples must be at least 1")
    rng = np.random.default_rng(seed)
    taus = (gtau_bound / abs(params.g)) * (1.0 - rng.random(n_samples))

    def sample(tau: float) -> ScanRecord:
        atom = solve_catalyst(cavity, params, tau)
        if isinstance(atom, Infeasible):
            logger.debug("infeasible sample tau=%s: %s", tau, atom.reason)
            nan = float("nan")
            return ScanRecord(tau=tau, q=nan, r=complex(nan, nan), feasible=False, delta=nan)
        delta = closed_catalytic_residual(cavity, atom, params, tau)
        feasible = delta <= CATALYTIC_TOLERANCE
        value = g2_catalytic_predict(cavity, atom, params, tau) if feasible else None
        return ScanRecord(tau=tau, q=atom.q, r=atom.r, g2=value, feasible=feasible, delta=delta)

    return parallel_map(sample, [float(tau) for tau in taus], threads)


def _apply_interaction(state: np.ndarray, unitary: np.ndarray, index: int, n_cavities: int) -> np.ndarray:
    """U (on cavity `index` and the atom) rho U^dag for rho with axes (S1..SN, C, S1'..SN', C')."""
    atom_ket, atom_bra = n_cavities, 2 * n_cavities + 1
    cavity_bra = n_cavities + 1 + index
    state = np.tensordot(unitary, state, axes=([2, 3], [index, atom_ket]))
    state = np.moveaxis(state, [0, 1], [index, atom_ket])
    state = np.tensordot(state, unitary.conj(), axes=([cavity_bra, atom_bra], [2, 3]))
    return np.moveaxis(state, [-2, -1], [cavity_bra, atom_bra])


def multi_cavity_protocol(
    cavity_template: CavityState,
    params: SimulationParams,
    tau: float,
    n_cavities: int,
    atom: Optional[AtomState] = None,
    max_joint_dim: int = MAX_JOINT_DIM,
) -> MultiCavityResult:
    """
    One catalyst meets n_cavities identical cavities in sequence; compares the
    cavities' joint state with the product of single-run outputs.
    """
    if n_cavities < 1:
        raise InvalidParameter("n_cavities must be at least 1")
    d = propagation_dim(cavity_template)
    joint_dim = d ** n_cavities * 2
    if joint_dim > max_joint_dim:
        raise DimensionBudgetExceeded(
            f"{n_cavities} cavities of {d} levels need joint dimension {joint_dim} > {max_joint_dim}"
        )
    if atom is None:
        atom = _catalyst_or_raise(cavity_template, params, tau)

    single = embed(cavity_template, d).matrix
    state = atom.matrix
    for _ in range(n_cavities):
        state = np.kron(single, state)
    state = state.reshape([d] * n_cavities + [2] + [d] * n_cavities + [2])

    unitary = jc_propagator(params, tau, d).as_tensor()
    for index in range(n_cavities):
        state = _apply_interaction(state, unitary, index, n_cavities)

    cavities = np.trace(state, axis1=n_cavities, axis2=2 * n_cavities + 1)
    cavities = cavities.reshape(d ** n_cavities, d ** n_cavities)
    cavities = 0.5 * (cavities + cavities.conj().T)

    output = reduced_cavity_analytic(cavity_template, atom, params, tau).matrix
    target = output
    for _ in range(n_cavities - 1):
        target = np.kron(target, output)

    marginals = [
        CavityState(matrix=partial_trace_multi(cavities, [d] * n_cavities, [i])) for i in range(n_cavities)
    ]
    spread = max((trace_distance(a, b) for a, b in combinations(marginals, 2)), default=0.0)
    if spread > CATALYTIC_TOLERANCE:
        logger.warning("cavity marginals differ by %.3e", spread)

    return MultiCavityResult(
        n_cavities=n_cavities,
        tau=tau,
        fidelity=uhlmann_fidelity(cavities, target),
        per_cavity_g2=[_safe_g2(marginal) for marginal in marginals],
        max_marginal_distance=spread,
    )


def dissipative_scan(
    cavity: CavityState,
    params: SimulationParams,
    diss: DissipationParams,
    tau_grid: Sequence[float],
    grid: Optional[Grid] = None,
    grid_points: int = DEFAULT_GRID_POINTS,
    threads: int = 1,
) -> List[DissipativeRow]:
    """
    Per tau: catalyst of the open channel, witnesses of the open and closed final cavity.
    """
    liouvillian = build_liouvillian(params, diss, propagation_dim(cavity))

    def witnesses(state: CavityState) -> Tuple[float, float]:
        return wln(state, *(grid or default_grid(state, points=grid_points))), _safe_g2(state)

    def row(tau: float) -> DissipativeRow:
        channel = LindbladChannel(liouvillian, tau)
        atom = dissipative_catalyst(cavity, liouvillian, tau, channel=channel)
        joint = channel.evolve(tensor(embed(cavity, channel.cavity_dim), atom))
        open_cavity = partial_trace(joint, "cavity")
        delta = trace_distance(atom, partial_trace(joint, "atom"))

        wln_open, g2_open = witnesses(open_cavity)
        closed_atom = solve_catalyst(cavity, params, tau)
        if isinstance(closed_atom, Infeasible):
            wln_closed, g2_closed = float("nan"), float("nan")
        else:
            wln_closed, g2_closed = witnesses(reduced_cavity_analytic(cavity, closed_atom, params, tau))

        return DissipativeRow(
            tau=tau,
            wln_open=wln_open,
            g2_open=g2_open,
            wln_closed=wln_closed,
            g2_closed=g2_closed,
            delta=delta,
        )

    return parallel_map(row, [float(tau) for tau in tau_grid], threads)


def multi_cavity_tau_scan(
    cavity_template: CavityState,
    params: SimulationParams,
    tau_grid: Sequence[float],
    n_cavities: int,
    max_joint_dim: int = MAX_JOINT_DIM,
    threads: int = 1,
) -> List[MultiCavityResult]:
    """
    multi_cavity_protocol at every tau of the grid, each with its own catalyst.
    Times without a verified catalyst give a NaN fidelity row.
    """
    if n_cavities < 1:
        raise InvalidParameter("n_cavities must be at least 1")
    d = propagation_dim(cavity_template)
    if d**n_cavities * 2 > max_joint_dim:
        raise DimensionBudgetExceeded(
            f"{n_cavities} cavities of {d} levels need joint dimension {d ** n_cavities * 2} > {max_joint_dim}"
        )

    def sample(tau: float) -> MultiCavityResult:
        atom = solve_catalyst(cavity_template, params, tau)
        if isinstance(atom, AtomState):
            delta = closed_catalytic_residual(cavity_template, atom, params, tau)
            if delta <= CATALYTIC_TOLERANCE:
                return multi_cavity_protocol(
                    cavity_template, params, tau, n_cavities, atom=atom, max_joint_dim=max_joint_dim
                )
        logger.debug("no verified catalyst at tau=%s", tau)
        return MultiCavityResult(n_cavities=n_cavities, tau=tau, fidelity=float("nan"), feasible=False)

    results = parallel_map(sample, [float(tau) for tau in tau_grid], threads)
    feasible = [result for result in results if result.feasible]
    if feasible:
        best = max(feasible, key=lambda result: result.fidelity)
        logger.info("N=%d: highest fidelity %.6f at tau=%.6f", n_cavities, best.fidelity, best.tau)
    return results
