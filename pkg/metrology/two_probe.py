"""
Symmetric two-qubit probes alpha(|00> + |11>) + beta(|01> + |10>).

alpha = 1/2 is the product state |+>|+>, alpha = 1/sqrt(2) the maximally
entangled state; both qubits go through the channel once, in parallel.
"""
import logging

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .channel import ChannelScalars, channel_scalars
from .errors import DomainError
from .models import SQRT_HALF, ChannelParams, Target, TwoQubitProbe
from .qfim import QfiMatrix, block_qfim, qfim, simultaneous_error
from .search import SearchResult, maximize, minimize

logger = logging.getLogger(__name__)

ALPHA_GRID = 512
ALPHA_TOL = 1e-7
ALPHA_PRODUCT = 0.5

def _evolved(alpha: NDArray[np.float64], b: float, c: complex,
             db: float, dc: complex, derivative: bool) -> NDArray[np.complex128]:
    """The evolved matrix, or its derivative when (db, dc) are the partials"""
    a2 = alpha ** 2
    beta2 = np.clip(0.5 - a2, 0.0, None)
    ab = alpha * np.sqrt(beta2)
    if derivative:
        xi = 2.0 * (1.0 - 2.0 * b) * db * (a2 - beta2)
        pop_a, pop_b = -xi, xi
        coh, coh2, cc = dc, 2.0 * c * dc, 2.0 * (c.conjugate() * dc).real
    else:
        xi = 2.0 * b * (1.0 - b) * (a2 - beta2)
        pop_a, pop_b = a2 - xi, beta2 + xi
        coh, coh2, cc = c, c * c, abs(c) ** 2
    rho = np.zeros(alpha.shape + (4, 4), dtype=complex)
    rho[..., 0, 0] = rho[..., 3, 3] = pop_a
    rho[..., 1, 1] = rho[..., 2, 2] = pop_b
    rho[..., 0, 1] = rho[..., 0, 2] = rho[..., 1, 3] = rho[..., 2, 3] = ab * coh
    rho[..., 0, 3] = a2 * coh2
    rho[..., 1, 2] = beta2 * cc
    upper = np.triu(np.ones((4, 4), dtype=bool), 1)
    rho[..., upper.T] = np.conj(np.swapaxes(rho, -1, -2)[..., upper.T])
    return rho

def evolved_family(alpha: ArrayLike, scalars: ChannelScalars):
    """Evolved states and their phi, kappa derivatives for an array of alphas"""
    alpha = np.asarray(alpha, dtype=float)
    b, c = scalars.b, scalars.c
    rho = _evolved(alpha, b, c, 0.0, 0j, derivative=False)
    d_phi = _evolved(alpha, b, c, scalars.db_dphi, scalars.dc_dphi, derivative=True)
    d_kappa = _evolved(alpha, b, c, scalars.db_dkappa, scalars.dc_dkappa, derivative=True)
    return rho, d_phi, d_kappa

def evolved_two(probe: TwoQubitProbe, scalars: ChannelScalars) -> NDArray[np.complex128]:
    """Lambda (x) Lambda applied to the probe, in the basis |00>, |01>, |10>, |11>"""
    return evolved_family(probe.alpha, scalars)[0]

def alpha_qfim(alpha: ArrayLike, scalars: ChannelScalars) -> QfiMatrix:
    rho, d_phi, d_kappa = evolved_family(alpha, scalars)
    return block_qfim(rho, d_phi, d_kappa)

def qfim_two(probe: TwoQubitProbe, params: ChannelParams) -> QfiMatrix:
    rho, d_phi, d_kappa = evolved_family(probe.alpha, channel_scalars(params))
    return qfim(rho, d_phi, d_kappa)

def _search(params: ChannelParams, target: Target) -> SearchResult:
    scalars = channel_scalars(params)
    if target == "phi-individual":
        return maximize(lambda a: alpha_qfim(a, scalars)[..., 0, 0], ALPHA_PRODUCT, SQRT_HALF,
                        grid_points=ALPHA_GRID, xatol=ALPHA_TOL)
    if target == "kappa-individual":
        return maximize(lambda a: alpha_qfim(a, scalars)[..., 1, 1], ALPHA_PRODUCT, SQRT_HALF,
                        grid_points=ALPHA_GRID, xatol=ALPHA_TOL)
    if target == "simultaneous":
        return minimize(lambda a: 0.5 * simultaneous_error(alpha_qfim(a, scalars)),
                        ALPHA_PRODUCT, SQRT_HALF, grid_points=ALPHA_GRID, xatol=ALPHA_TOL)
    raise DomainError(f"Unknown estimation target: {target}")

def optimal_alpha(params: ChannelParams, target: Target) -> tuple[float, float, bool]:
    """Best alpha in [1/2, 1/sqrt(2)] for one target.

    Returns (alpha*, objective, interior): the objective is the diagonal QFI
    for the individual targets and Tr F^-1 / 2 for the simultaneous one.
    """
    res = _search(params, target)
    logger.debug(f"alpha* for {target} at phi={params.phi}, kappa={params.kappa}: {res.x:.8f}")
    return res.x, res.value, res.interior

def ratio_two(params: ChannelParams) -> float:
    """R = Delta_ind / Delta_sim with two-qubit probes optimised per target"""
    _, f_phi, _ = optimal_alpha(params, "phi-individual")
    _, f_kappa, _ = optimal_alpha(params, "kappa-individual")
    _, delta_sim, _ = optimal_alpha(params, "simultaneous")
    return (1.0 / f_phi + 1.0 / f_kappa) / delta_sim
