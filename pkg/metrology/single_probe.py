"""
Closed-form estimation theory for a single qubit probe.

The evolved state is fixed by its Bloch vector r, so the QFIM, the SLDs
and the compatibility test reduce to vector algebra on r and its two
parameter derivatives.  The state also has the exponential form
rho = exp(G) with G = ln((1-|r|^2)/4)/2 I + artanh(|r|)/|r| r.sigma; the
SLD below follows from that form and needs |r| < 1.
"""
import logging
import math
from typing import Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .channel import ChannelScalars, channel_scalars
from .errors import DomainError
from .models import ChannelParams, CompatibilityReport, SingleProbe, Target
from .qfim import QfiMatrix, individual_error, simultaneous_error
from .search import minimize

logger = logging.getLogger(__name__)

PAULI = np.array([[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]], dtype=complex)
THETA_GRID = 256
THETA_TOL = 1e-6
EQUATOR = 0.5 * math.pi
PURE_TOL = 1e-12
PARAMETER_INDEX = {"phi": 0, "kappa": 1}

def _initial_bloch(theta0: ArrayLike, azimuth0: float = 0.0) -> NDArray[np.float64]:
    theta0 = np.asarray(theta0, dtype=float)
    return np.stack([np.sin(theta0) * math.cos(azimuth0),
                     np.sin(theta0) * math.sin(azimuth0),
                     np.cos(theta0)], axis=-1)

def _bloch_map(r0: NDArray[np.float64], c: complex, lam: float) -> NDArray[np.float64]:
    x, y, z = r0[..., 0], r0[..., 1], r0[..., 2]
    return np.stack([c.real * x + c.imag * y, c.real * y - c.imag * x, lam * z], axis=-1)

def bloch_derivatives(theta0: ArrayLike, scalars: ChannelScalars,
                      azimuth0: float = 0.0) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Mapped Bloch vector r (..., 3) and its partials (..., 2, 3).

    The Bloch map is linear in (c, 1 - 2b), so the partials are the same
    map with (dc, -2 db) substituted.
    """
    r0 = _initial_bloch(theta0, azimuth0)
    r = _bloch_map(r0, scalars.c, scalars.lambda_par)
    dr = np.stack([_bloch_map(r0, scalars.dc_dphi, -2.0 * scalars.db_dphi),
                   _bloch_map(r0, scalars.dc_dkappa, -2.0 * scalars.db_dkappa)], axis=-2)
    return r, dr

def bloch_qfim(r: NDArray[np.float64], dr: NDArray[np.float64]) -> QfiMatrix:
    """F_mn = dr_m.dr_n + (r.dr_m)(r.dr_n)/(1 - |r|^2).

    On the sphere surface the second term is dropped when r.dr vanishes and
    is +inf otherwise (the parameter would be known with unbounded precision).
    """
    gram = np.einsum("...mi,...ni->...mn", dr, dr)
    proj = np.einsum("...i,...mi->...m", r, dr)
    gap = 1.0 - np.einsum("...i,...i->...", r, r)
    outer = proj[..., :, None] * proj[..., None, :]
    mixed = (gap > PURE_TOL)[..., None, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        radial = np.where(mixed, outer / np.where(gap > PURE_TOL, gap, 1.0)[..., None, None],
                          np.where(np.abs(outer) <= PURE_TOL, 0.0, np.inf))
    if np.any(np.isinf(radial)):
        logger.warning("Pure output state with radial motion: QFIM entries are unbounded")
    return gram + radial

def theta_qfim(theta0: ArrayLike, scalars: ChannelScalars) -> QfiMatrix:
    r, dr = bloch_derivatives(theta0, scalars)
    return bloch_qfim(r, dr)

def qfim_single(probe: SingleProbe, params: ChannelParams) -> QfiMatrix:
    """2x2 QFIM of one qubit sent once through the channel"""
    r, dr = bloch_derivatives(probe.theta0, channel_scalars(params), probe.azimuth0)
    return bloch_qfim(r, dr)

def sld_single(probe: SingleProbe, params: ChannelParams,
               parameter: Literal["phi", "kappa"]) -> NDArray[np.complex128]:
    """L = [r.dr/(1 - |r|^2)](-I + r.sigma) + dr.sigma"""
    r, dr = bloch_derivatives(probe.theta0, channel_scalars(params), probe.azimuth0)
    d = dr[PARAMETER_INDEX[parameter]]
    gap = 1.0 - float(r @ r)
    if gap <= PURE_TOL:
        raise DomainError("SLD needs a mixed output state (|r| < 1)")
    radial = float(r @ d) / gap
    r_sigma = np.tensordot(r, PAULI, axes=1)
    return radial * (r_sigma - np.eye(2)) + np.tensordot(d, PAULI, axes=1)

def compat_triple(probe: SingleProbe, params: ChannelParams) -> float:
    """r.(dr_phi x dr_kappa); the SLDs commute on average iff this vanishes"""
    r, dr = bloch_derivatives(probe.theta0, channel_scalars(params), probe.azimuth0)
    return float(r @ np.cross(dr[0], dr[1]))

def max_qfi_forms(params: ChannelParams) -> tuple[float, float, float]:
    """Closed forms (F_phiphi on the equator, F_kappakappa on the equator, at the pole)"""
    sc = channel_scalars(params)
    abs_c = abs(sc.c)

    def equatorial(dc: complex) -> float:
        dabs = (sc.c.conjugate() * dc).real / abs_c if abs_c > 0 else abs(dc)
        radial = abs_c ** 2 * dabs ** 2 / (1.0 - abs_c ** 2) if abs_c < 1 else 0.0
        return abs(dc) ** 2 + radial

    flips = sc.b * (1.0 - sc.b)
    polar = sc.db_dkappa ** 2 / flips if flips > 0 else 0.0
    return equatorial(sc.dc_dphi), equatorial(sc.dc_dkappa), polar

def optimal_theta(params: ChannelParams, target: Target) -> tuple[float, float]:
    """Best polar angle of the probe for one estimation target.

    Returns (theta*, objective): F_phiphi or F_kappakappa for the
    individual targets, Tr F^-1 for the simultaneous one.
    """
    if target == "phi-individual":
        return EQUATOR, max_qfi_forms(params)[0]
    if target == "kappa-individual":
        _, equator, pole = max_qfi_forms(params)
        return (EQUATOR, equator) if equator >= pole else (0.0, pole)
    if target != "simultaneous":
        raise DomainError(f"Unknown estimation target: {target}")
    scalars = channel_scalars(params)
    res = minimize(lambda t: simultaneous_error(theta_qfim(t, scalars)), 0.0, EQUATOR,
                   grid_points=THETA_GRID, xatol=THETA_TOL)
    return res.x, res.value

def ratio_single(params: ChannelParams) -> float:
    """R = Delta_ind / Delta_sim for single-qubit probes, each target at its optimum"""
    _, trace_inv = optimal_theta(params, "simultaneous")
    return single_individual_error(params) / (0.5 * trace_inv)

def compatibility(params: ChannelParams, *, atol: float = 1e-9) -> CompatibilityReport:
    """Check the three compatibility conditions for the best single-qubit probe"""
    theta_k, _ = optimal_theta(params, "kappa-individual")
    theta_s, _ = optimal_theta(params, "simultaneous")
    probe = SingleProbe(theta0=theta_s)
    f = qfim_single(probe, params)
    triple = compat_triple(probe, params)
    shared = abs(theta_k - EQUATOR) < THETA_TOL and abs(theta_s - EQUATOR) < THETA_TOL
    return CompatibilityReport(
        shared_optimal_probe=shared,
        commuting_measurement=abs(triple) < atol,
        independent_parameters=bool(abs(f[0, 1]) < atol * max(1.0, float(np.max(np.abs(f))))),
        triple_product=triple,
        off_diagonal=float(f[0, 1]),
    )

def single_individual_error(params: ChannelParams) -> float:
    """1/F_phiphi + 1/F_kappakappa with each parameter on its own optimal qubit"""
    scalars = channel_scalars(params)
    theta_k, _ = optimal_theta(params, "kappa-individual")
    f_eq, f_k = theta_qfim(EQUATOR, scalars), theta_qfim(theta_k, scalars)
    return float(individual_error(np.diag([f_eq[0, 0], f_k[1, 1]])))
