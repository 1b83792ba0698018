"""
Resource-normalized comparison of estimation strategies.

With 2N channel uses in total, the individual strategy spends N on each
parameter with its own GHZ_N probe, the simultaneous strategy runs a GHZ_N
probe twice and estimates both parameters from every run, and the
classical strategy repeats the best single-qubit simultaneous measurement
2N times.
"""
from dataclasses import dataclass
import logging
from typing import List, Optional, Tuple

import numpy as np
from numpy.typing import NDArray

from .channel import channel_scalars
from .config import WorkbenchConfig
from .errors import DomainError
from .ghz_probe import ghz_qfim, qfim_hybrid
from .models import (CaseLabel, ChannelParams, SaturationCurve, SaturationRow,
                     Strategy, StrategyReport, StrategyRow)
from .qfim import QfiMatrix, individual_error, simultaneous_error
from .single_probe import optimal_theta, single_individual_error

logger = logging.getLogger(__name__)

EXIT_FACTOR = 2.0
EXIT_STREAK = 100
LOW_N_CUTOFF = 5
SATURATION_TOLERANCE = 1.05
MONOTONE_SLACK = 1e-9

@dataclass(frozen=True)
class StrategyCurves:
    """Error curves over N = 1..len; ``exhausted`` means the scan hit n_max"""
    n: NDArray[np.int64]
    delta_ind: NDArray[np.float64]
    delta_sim: NDArray[np.float64]
    delta_sql: NDArray[np.float64]
    exhausted: bool

    @property
    def ratio(self) -> NDArray[np.float64]:
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.delta_ind / self.delta_sim

    def rows(self) -> List[StrategyRow]:
        return [StrategyRow(n=int(n), delta_ind=float(i), delta_sim=float(s),
                            delta_sql=float(q), ratio=float(r))
                for n, i, s, q, r in zip(self.n, self.delta_ind, self.delta_sim,
                                         self.delta_sql, self.ratio)]

@dataclass(frozen=True)
class NoptResult:
    n_opt: int
    delta_min: float
    winning_strategy: Strategy
    n_opt_ind: int
    delta_min_ind: float
    n_opt_sim: int
    delta_min_sim: float
    classical_dominated: bool
    scan_saturated: bool

class _SingleQubitBaseline:
    """Single-qubit optima shared by the N = 1 row and the classical line"""

    def __init__(self, params: ChannelParams):
        _, trace_inv = optimal_theta(params, "simultaneous")
        self.delta_sim_one = trace_inv
        self.delta_ind_two = single_individual_error(params)

    def sql(self, n: int) -> float:
        return self.delta_sim_one / (2 * n)

def _errors(f: QfiMatrix) -> Tuple[float, float]:
    return float(individual_error(f)), 0.5 * float(simultaneous_error(f))

def _check_n(n: int) -> None:
    if n < 1:
        raise DomainError(f"Probe size must be at least 1, got N={n}")

def deltas(n: int, params: ChannelParams) -> Tuple[float, float, float]:
    """(Delta_ind(2N), Delta_sim(2N), Delta_SQL(2N)); infinite where a QFI vanishes"""
    _check_n(n)
    base = _SingleQubitBaseline(params)
    if n == 1:
        return base.delta_ind_two, 0.5 * base.delta_sim_one, base.sql(1)
    d_ind, d_sim = _errors(ghz_qfim(n, channel_scalars(params)))
    return d_ind, d_sim, base.sql(n)

def ratio_R(n: int, params: ChannelParams) -> float:
    d_ind, d_sim, _ = deltas(n, params)
    return d_ind / d_sim

def scan_strategies(params: ChannelParams, n_max: Optional[int] = None, *,
                    early_exit: bool = True) -> StrategyCurves:
    """Evaluate the three error curves for N = 1, 2, ...

    The scan stops early once both quantum curves have stayed above twice
    their running minima for EXIT_STREAK consecutive N.
    """
    n_max = WorkbenchConfig.N_MAX if n_max is None else n_max
    _check_n(n_max)
    scalars = channel_scalars(params)
    base = _SingleQubitBaseline(params)

    ind, sim = [base.delta_ind_two], [0.5 * base.delta_sim_one]
    best_ind, best_sim = ind[0], sim[0]
    streak = 0
    exhausted = True
    for n in range(2, n_max + 1):
        d_ind, d_sim = _errors(ghz_qfim(n, scalars))
        ind.append(d_ind)
        sim.append(d_sim)
        best_ind, best_sim = min(best_ind, d_ind), min(best_sim, d_sim)
        streak = streak + 1 if (d_ind > EXIT_FACTOR * best_ind and d_sim > EXIT_FACTOR * best_sim) else 0
        if early_exit and streak >= EXIT_STREAK:
            exhausted = False
            logger.debug(f"Strategy scan at phi={params.phi}, kappa={params.kappa} stopped at N={n}")
            break

    ns = np.arange(1, len(ind) + 1)
    return StrategyCurves(n=ns, delta_ind=np.array(ind), delta_sim=np.array(sim),
                          delta_sql=base.delta_sim_one / (2.0 * ns), exhausted=exhausted)

def first_local_minimum(values: NDArray[np.float64]) -> Tuple[int, bool]:
    """Index of the first interior local minimum and whether one was found.

    Three-point test: strictly below the left neighbour and not above the
    right one, so plateaus resolve to their smaller N.  Without an interior
    minimum the global argmin (first occurrence) is returned.
    """
    v = np.where(np.isnan(values), np.inf, values)
    for i in range(1, len(v) - 1):
        if v[i] < v[i - 1] and v[i] <= v[i + 1]:
            return i, True
    return int(np.argmin(v)), False

def nopt_from_curves(curves: StrategyCurves) -> NoptResult:
    """Compare the first minima of the two quantum curves.

    A curve still falling at the end of the scan has no first minimum and
    does not compete; only when neither curve has one are the global
    minima compared and the result flagged as saturated.
    """
    i_ind, found_ind = first_local_minimum(curves.delta_ind)
    i_sim, found_sim = first_local_minimum(curves.delta_sim)
    d_ind, d_sim = float(curves.delta_ind[i_ind]), float(curves.delta_sim[i_sim])
    if found_ind != found_sim:
        individual_wins = found_ind
    else:
        individual_wins = d_ind < d_sim
    if individual_wins:
        winner: Strategy = "individual"
        idx, delta = i_ind, d_ind
    else:
        winner, idx, delta = "simultaneous", i_sim, d_sim
    found = found_ind or found_sim
    return NoptResult(
        n_opt=int(curves.n[idx]), delta_min=delta, winning_strategy=winner,
        n_opt_ind=int(curves.n[i_ind]), delta_min_ind=d_ind,
        n_opt_sim=int(curves.n[i_sim]), delta_min_sim=d_sim,
        classical_dominated=bool(not found and delta >= curves.delta_sql[idx]),
        scan_saturated=not found and idx == len(curves.n) - 1,
    )

def find_nopt(params: ChannelParams, n_max: Optional[int] = None) -> NoptResult:
    """Optimal GHZ size and error of the better quantum strategy"""
    result = nopt_from_curves(scan_strategies(params, n_max))
    if result.classical_dominated:
        logger.info(f"No quantum advantage at phi={params.phi}, kappa={params.kappa}")
    if result.scan_saturated:
        logger.warning(f"Error still decreasing at the scan cap for phi={params.phi}, kappa={params.kappa}")
    return result

def case_from_curves(curves: StrategyCurves, nopt: NoptResult) -> CaseLabel:
    if nopt.winning_strategy == "individual":
        return "A"
    below = (curves.delta_ind < curves.delta_sql) | (curves.delta_sim < curves.delta_sql)
    first_dip = int(curves.n[np.argmax(below)]) if below.any() else int(curves.n[-1])
    start = max(LOW_N_CUTOFF, first_dip) - 1
    ratio = curves.ratio[start:]
    if ratio.size == 0:
        return "C"
    # R eventually falls towards 0; only the stretch before its first peak counts
    stop = len(ratio)
    for i in range(1, len(ratio) - 1):
        if ratio[i] > ratio[i - 1] and ratio[i] >= ratio[i + 1]:
            stop = i + 1
            break
    r_min = float(np.min(ratio[:stop]))
    return "B" if r_min < 1.0 else "C"

def classify_case(params: ChannelParams, n_max: Optional[int] = None) -> CaseLabel:
    """A: individual beats simultaneous; B: simultaneous wins but R dips below 1; C otherwise"""
    curves = scan_strategies(params, n_max)
    return case_from_curves(curves, nopt_from_curves(curves))

def strategy_report(params: ChannelParams, n_max: Optional[int] = None, *,
                    include_rows: bool = True) -> StrategyReport:
    curves = scan_strategies(params, n_max)
    nopt = nopt_from_curves(curves)
    return StrategyReport(
        params=params,
        rows=curves.rows() if include_rows else [],
        n_opt=nopt.n_opt,
        delta_min=nopt.delta_min,
        winning_strategy=nopt.winning_strategy,
        case_label=case_from_curves(curves, nopt),
        n_opt_ind=nopt.n_opt_ind,
        n_opt_sim=nopt.n_opt_sim,
        classical_dominated=nopt.classical_dominated,
        scan_saturated=nopt.scan_saturated,
    )

def divisors(n: int) -> List[int]:
    return [m for m in range(1, n + 1) if n % m == 0]

def m_saturation_curve(params: ChannelParams, n_total: int,
                       strategy: Optional[Strategy] = None) -> SaturationCurve:
    """Hybrid-scheme error for every divisor M of n_total.

    Uses the winning strategy of :func:`find_nopt` unless one is given.
    """
    _check_n(n_total)
    if strategy is None:
        strategy = find_nopt(params).winning_strategy
    errors = []
    for m in divisors(n_total):
        d_ind, d_sim = _errors(qfim_hybrid(m, n_total, params))
        errors.append(d_ind if strategy == "individual" else d_sim)
    full = errors[-1]
    rows = [SaturationRow(m=m, delta=d, ratio_to_full=d / full)
            for m, d in zip(divisors(n_total), errors)]
    saturation_m = next((r.m for r in rows if r.ratio_to_full <= SATURATION_TOLERANCE), None)
    tail = [r.delta for r in rows if r.m >= 2]
    monotone = all(b <= a * (1.0 + MONOTONE_SLACK) for a, b in zip(tail, tail[1:]))
    if not monotone:
        logger.info(f"Hybrid error is not monotone in M for N_total={n_total}")
    return SaturationCurve(params=params, n_total=n_total, strategy=strategy, rows=rows,
                           saturation_m=saturation_m, monotone=monotone)
