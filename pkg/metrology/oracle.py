"""
Brute-force reference path used to cross-check the closed forms.

Everything here works on dense 2^N x 2^N matrices and is deliberately
independent of the structured formulas: the channel is applied qubit by
qubit with its Liouville matrix, the axis average is done by quadrature
over the sphere, and state derivatives come from finite differences.
"""
import logging
import math
from typing import Callable, List, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .channel import ChannelScalars, liouville_matrix, vmf_density
from .errors import ConvergenceError, DomainError
from .models import ChannelParams
from .qfim import QfiMatrix, check_density, qfim
from .single_probe import PAULI

logger = logging.getLogger(__name__)

MAX_QUBITS = 6
MIN_NODES = 64
DEFAULT_STEP = 1e-5
STEP_RANGE = (1e-7, 1e-3)
RICHARDSON_TOL = 1e-4

StateBuilder = Callable[[ChannelParams], NDArray[np.complex128]]

def _n_qubits(rho: NDArray) -> int:
    dim = rho.shape[-1]
    n = dim.bit_length() - 1
    if rho.shape != (dim, dim) or 2 ** n != dim:
        raise DomainError(f"Expected a 2^N x 2^N matrix, got shape {rho.shape}")
    return n

def evolve_dense(rho0: ArrayLike, scalars: ChannelScalars, reps_per_qubit: int = 1) -> NDArray[np.complex128]:
    """Apply (Lambda^reps) to every qubit of a dense N-qubit state"""
    rho0 = check_density(rho0)
    n = _n_qubits(rho0)
    if n > MAX_QUBITS:
        raise DomainError(f"Dense evolution is limited to {MAX_QUBITS} qubits, got {n}")
    if reps_per_qubit < 1:
        raise DomainError(f"Repetitions must be at least 1, got {reps_per_qubit}")
    superop = np.linalg.matrix_power(liouville_matrix(scalars), reps_per_qubit).reshape(2, 2, 2, 2)

    tensor = rho0.reshape((2,) * (2 * n))
    for q in range(n):
        # contract (row q, column q) with the superoperator inputs
        tensor = np.tensordot(superop, tensor, axes=([2, 3], [q, n + q]))
        tensor = np.moveaxis(tensor, [0, 1], [q, n + q])
    return tensor.reshape(2 ** n, 2 ** n)

def ghz_dense(n: int) -> NDArray[np.complex128]:
    """|GHZ_N><GHZ_N| with |GHZ_N> = (|0...0> + |1...1>)/sqrt(2)"""
    if not 1 <= n <= MAX_QUBITS:
        raise DomainError(f"GHZ size must be in [1, {MAX_QUBITS}], got {n}")
    psi = np.zeros(2 ** n, dtype=complex)
    psi[0] = psi[-1] = math.sqrt(0.5)
    return np.outer(psi, psi.conj())

def bucket_by_weight(rho: ArrayLike) -> List[NDArray[np.float64]]:
    """Real diagonal entries of rho grouped by the Hamming weight of their basis string"""
    rho = np.asarray(rho)
    n = _n_qubits(rho)
    diag = np.real(np.diag(rho))
    weights = np.array([bin(i).count("1") for i in range(2 ** n)])
    return [diag[weights == m] for m in range(n + 1)]

def _rotation(phi: float, axes: NDArray[np.float64]) -> NDArray[np.complex128]:
    """exp(-i phi n.sigma) for a stack of unit axes"""
    n_sigma = np.tensordot(axes, PAULI, axes=([-1], [0]))
    return math.cos(phi) * np.eye(2) - 1j * math.sin(phi) * n_sigma

def channel_quadrature(rho0: ArrayLike, params: ChannelParams, nodes: int = MIN_NODES) -> NDArray[np.complex128]:
    """Average U_n rho0 U_n^dagger over vMF-distributed axes n.

    Gauss-Legendre in cos(theta) with ``nodes`` points, uniform trapezoid in
    the azimuth with 2*nodes points.
    """
    if nodes < MIN_NODES:
        raise DomainError(f"Quadrature needs at least {MIN_NODES} nodes, got {nodes}")
    if math.isinf(params.kappa):
        raise DomainError("Quadrature needs a finite concentration")
    rho0 = np.asarray(rho0, dtype=complex)
    u, w_u = np.polynomial.legendre.leggauss(nodes)
    azimuth = np.linspace(0.0, 2.0 * math.pi, 2 * nodes, endpoint=False)
    w_az = 2.0 * math.pi / (2 * nodes)

    theta = np.arccos(np.clip(u, -1.0, 1.0))
    density = vmf_density(theta, params.kappa) * w_u * w_az
    sin_t = np.sqrt(1.0 - u ** 2)
    axes = np.stack(np.broadcast_arrays(sin_t[:, None] * np.cos(azimuth)[None, :],
                                        sin_t[:, None] * np.sin(azimuth)[None, :],
                                        u[:, None]), axis=-1)
    unitaries = _rotation(params.phi, axes)
    rotated = unitaries @ rho0 @ np.swapaxes(unitaries, -1, -2).conj()
    return np.einsum("i,ijkl->kl", density, rotated)

def _hermitian_part(a: NDArray) -> NDArray:
    return 0.5 * (a + np.swapaxes(a, -1, -2).conj())

def _central(builder: StateBuilder, params: ChannelParams, h: float) -> Tuple[NDArray, NDArray]:
    d_phi = (builder(params.shifted(dphi=h)) - builder(params.shifted(dphi=-h))) / (2.0 * h)
    d_kappa = (builder(params.shifted(dkappa=h)) - builder(params.shifted(dkappa=-h))) / (2.0 * h)
    # round-off in the difference quotient breaks Hermiticity at the 1e-12 level
    return _hermitian_part(d_phi), _hermitian_part(d_kappa)

def fd_derivatives(builder: StateBuilder, params: ChannelParams, step: float = DEFAULT_STEP):
    """Central differences at step and step/2, plus their Richardson combination.

    Returns ((d_phi, d_kappa) extrapolated, (d_phi, d_kappa) at step,
    (d_phi, d_kappa) at step/2).
    """
    lo, hi = STEP_RANGE
    if not lo <= step <= hi:
        raise DomainError(f"Finite-difference step must lie in [{lo}, {hi}], got {step}")
    coarse = _central(builder, params, step)
    fine = _central(builder, params, 0.5 * step)
    extrapolated = tuple((4.0 * f - c) / 3.0 for f, c in zip(fine, coarse))
    return extrapolated, coarse, fine

def qfim_fd(builder: StateBuilder, params: ChannelParams, step: float = DEFAULT_STEP) -> QfiMatrix:
    """QFIM of ``builder(params)`` from numerical state derivatives.

    Raises ConvergenceError when the QFIMs from step and step/2 disagree by
    more than RICHARDSON_TOL relative to the largest entry.
    """
    rho = builder(params)
    extrapolated, coarse, fine = fd_derivatives(builder, params, step)
    f_coarse, f_fine = qfim(rho, *coarse), qfim(rho, *fine)
    scale = max(float(np.max(np.abs(f_fine))), 1e-300)
    gap = float(np.max(np.abs(f_coarse - f_fine))) / scale
    if gap > RICHARDSON_TOL:
        raise ConvergenceError(f"Finite-difference QFIM unstable under step halving (relative gap {gap:.3g})")
    logger.debug(f"qfim_fd step={step} relative gap {gap:.3g}")
    return qfim(rho, *extrapolated)
