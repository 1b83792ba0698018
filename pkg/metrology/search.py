"""Deterministic one-dimensional optimisation over a closed interval."""
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.typing import NDArray
from scipy.optimize import minimize_scalar

VectorObjective = Callable[[NDArray[np.float64]], NDArray[np.float64]]

@dataclass(frozen=True)
class SearchResult:
    x: float
    value: float
    interior: bool

def maximize(objective: VectorObjective, lower: float, upper: float, *,
             grid_points: int, xatol: float, prefer_upper: bool = True) -> SearchResult:
    """Coarse grid scan, then bounded Brent refinement around the best cell.

    ``objective`` must accept an array of abscissae.  Non-finite values
    count as -inf.  Ties on the grid go to the upper end when
    ``prefer_upper`` is set; the refined point replaces the grid point only
    if it is strictly better.
    """
    grid = np.linspace(lower, upper, grid_points)
    values = np.asarray(objective(grid), dtype=float)
    values = np.where(np.isnan(values), -np.inf, values)
    if prefer_upper:
        best = grid_points - 1 - int(np.argmax(values[::-1]))
    else:
        best = int(np.argmax(values))
    x, value = float(grid[best]), float(values[best])

    lo, hi = grid[max(best - 1, 0)], grid[min(best + 1, grid_points - 1)]
    if np.isfinite(value) and hi > lo:
        res = minimize_scalar(lambda t: -float(objective(np.array([t]))[0]),
                              bounds=(lo, hi), method="bounded", options={"xatol": xatol})
        if res.success and -res.fun > value:
            x, value = float(res.x), float(-res.fun)

    interior = lower + xatol < x < upper - xatol
    return SearchResult(x=x, value=value, interior=interior)

def minimize(objective: VectorObjective, lower: float, upper: float, *,
             grid_points: int, xatol: float, prefer_upper: bool = True) -> SearchResult:
    res = maximize(lambda t: -np.asarray(objective(t), dtype=float), lower, upper,
                   grid_points=grid_points, xatol=xatol, prefer_upper=prefer_upper)
    return SearchResult(x=res.x, value=-res.value, interior=res.interior)
