"""
Mixed-state quantum Fisher information machinery.

All functions accept stacks of matrices (leading batch axes) so that probe
families can be scanned in one call.  State derivatives are always supplied
by the caller; nothing here differentiates numerically.
"""
import logging

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import DomainError

logger = logging.getLogger(__name__)

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
SUPPORT_CUTOFF = 1e-12
SINGULAR_TOL = 1e-12

QfiMatrix = NDArray[np.float64]
"""Real symmetric (..., 2, 2) array indexed by (phi, kappa)."""

def _dagger(a: NDArray) -> NDArray:
    return np.swapaxes(a, -1, -2).conj()

def _check_hermitian(h: NDArray, name: str) -> None:
    scale = max(1.0, float(np.max(np.abs(h)))) if h.size else 1.0
    if np.max(np.abs(h - _dagger(h)), initial=0.0) > HERMITIAN_TOL * scale:
        raise DomainError(f"{name} is not Hermitian")

def check_density(rho: ArrayLike) -> NDArray[np.complex128]:
    """Validate a (stack of) density matrix: Hermitian, unit trace, PSD"""
    rho = np.asarray(rho, dtype=complex)
    _check_hermitian(rho, "Density matrix")
    traces = np.trace(rho, axis1=-2, axis2=-1)
    if np.any(np.abs(traces - 1.0) > TRACE_TOL):
        raise DomainError("Density matrix does not have unit trace")
    if np.min(np.linalg.eigvalsh(rho)) < -PSD_TOL:
        raise DomainError("Density matrix has a negative eigenvalue")
    return rho

def eigh(h: ArrayLike) -> tuple[NDArray[np.float64], NDArray[np.complex128]]:
    """Ascending eigenvalues and orthonormal eigenvectors (as columns)"""
    h = np.asarray(h, dtype=complex)
    _check_hermitian(h, "Operator")
    # symmetrise so LAPACK sees an exactly Hermitian input
    return np.linalg.eigh(0.5 * (h + _dagger(h)))

def _support_weights(evals: NDArray[np.float64], eps: float) -> NDArray[np.float64]:
    """2/(l_i + l_j) on the support, 0 elsewhere"""
    sums = evals[..., :, None] + evals[..., None, :]
    cutoff = eps * np.max(evals, axis=-1)[..., None, None]
    mask = (sums > cutoff) & (sums > 0)
    return np.where(mask, 2.0 / np.where(mask, sums, 1.0), 0.0)

def _eigenbasis(rho: NDArray, drhos: list[NDArray], eps: float):
    evals, vecs = eigh(rho)
    weights = _support_weights(evals, eps)
    vd = _dagger(vecs)
    return evals, vecs, weights, [vd @ d @ vecs for d in drhos]

def sld(rho: ArrayLike, drho: ArrayLike, *, eps: float = SUPPORT_CUTOFF) -> NDArray[np.complex128]:
    """Symmetric logarithmic derivative L solving drho = (rho L + L rho)/2.

    Entries coupling eigenvectors outside the support are set to zero.
    """
    rho = np.asarray(rho, dtype=complex)
    drho = np.asarray(drho, dtype=complex)
    _check_hermitian(drho, "State derivative")
    if np.any(np.abs(np.trace(drho, axis1=-2, axis2=-1)) > 1e-10):
        raise DomainError("State derivative must be traceless")
    return block_sld(rho, drho, eps=eps)

def block_sld(block: ArrayLike, dblock: ArrayLike, *, eps: float = SUPPORT_CUTOFF) -> NDArray[np.complex128]:
    """SLD restricted to one block of a direct sum (no trace condition)"""
    _, vecs, weights, (d,) = _eigenbasis(np.asarray(block, dtype=complex),
                                         [np.asarray(dblock, dtype=complex)], eps)
    return vecs @ (weights * d) @ _dagger(vecs)

def block_qfim(block: ArrayLike, dblock_phi: ArrayLike, dblock_kappa: ArrayLike,
               *, eps: float = SUPPORT_CUTOFF) -> QfiMatrix:
    """Spectral QFIM of a (possibly subnormalized) Hermitian block.

    F_mn = sum_{l_i + l_j > eps} 2 Re[<i|d_m|j><j|d_n|i>] / (l_i + l_j).
    Blocks of an orthogonal direct sum contribute additively.
    """
    block = np.asarray(block, dtype=complex)
    _, _, weights, (dp, dk) = _eigenbasis(
        block, [np.asarray(dblock_phi, dtype=complex), np.asarray(dblock_kappa, dtype=complex)], eps)
    def entry(a, b):
        # <i|a|j><j|b|i> summed with the support weights
        return np.real(np.sum(weights * a * np.swapaxes(b, -1, -2), axis=(-2, -1)))

    f_pp, f_kk, f_pk = entry(dp, dp), entry(dk, dk), entry(dp, dk)
    return np.stack([np.stack([f_pp, f_pk], axis=-1), np.stack([f_pk, f_kk], axis=-1)], axis=-2)

def qfim(rho: ArrayLike, drho_phi: ArrayLike, drho_kappa: ArrayLike,
         *, eps: float = SUPPORT_CUTOFF) -> QfiMatrix:
    """QFIM of a normalized state from its analytic parameter derivatives"""
    rho = check_density(rho)
    for name, d in (("phi", drho_phi), ("kappa", drho_kappa)):
        _check_hermitian(np.asarray(d, dtype=complex), f"Derivative in {name}")
    return block_qfim(rho, drho_phi, drho_kappa, eps=eps)

def qfim_from_sld(rho: ArrayLike, l_phi: ArrayLike, l_kappa: ArrayLike) -> QfiMatrix:
    """F_mn = Re Tr(rho L_m L_n), the defining trace form"""
    rho = np.asarray(rho, dtype=complex)
    ls = [np.asarray(l_phi, dtype=complex), np.asarray(l_kappa, dtype=complex)]
    out = np.empty(rho.shape[:-2] + (2, 2))
    for m in range(2):
        for n in range(2):
            out[..., m, n] = np.real(np.trace(rho @ ls[m] @ ls[n], axis1=-2, axis2=-1))
    return 0.5 * (out + np.swapaxes(out, -1, -2))

def compat_functional(rho: ArrayLike, l_phi: ArrayLike, l_kappa: ArrayLike) -> NDArray[np.float64]:
    """Im Tr(rho L_phi L_kappa); zero iff one measurement is optimal for both"""
    rho = np.asarray(rho, dtype=complex)
    return np.imag(np.trace(rho @ np.asarray(l_phi) @ np.asarray(l_kappa), axis1=-2, axis2=-1))

def is_psd(f: ArrayLike, tol: float = PSD_TOL) -> bool:
    f = np.asarray(f, dtype=float)
    return bool(np.allclose(f, np.swapaxes(f, -1, -2)) and np.min(np.linalg.eigvalsh(f)) >= -tol)

def inverse_diagonal(f: ArrayLike) -> NDArray[np.float64]:
    """Diagonal of F^-1 through Schur complements; +inf where F is singular.

    A Schur complement below SINGULAR_TOL times its diagonal entry counts as
    zero, so rank-one matrices come out infinite rather than round-off sized.
    """
    f = np.asarray(f, dtype=float)
    f_pp, f_kk, f_pk = f[..., 0, 0], f[..., 1, 1], f[..., 0, 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        schur_p = np.where(f_kk > 0, f_pp - f_pk ** 2 / np.where(f_kk > 0, f_kk, 1.0), f_pp)
        schur_k = np.where(f_pp > 0, f_kk - f_pk ** 2 / np.where(f_pp > 0, f_pp, 1.0), f_kk)
        ok_p = schur_p > SINGULAR_TOL * np.abs(f_pp)
        ok_k = schur_k > SINGULAR_TOL * np.abs(f_kk)
        inv_p = np.where(ok_p, 1.0 / np.where(ok_p, schur_p, 1.0), np.inf)
        inv_k = np.where(ok_k, 1.0 / np.where(ok_k, schur_k, 1.0), np.inf)
    return np.stack([inv_p, inv_k], axis=-1)

def individual_error(f: ArrayLike) -> NDArray[np.float64]:
    """1/F_phiphi + 1/F_kappakappa, +inf on a vanishing diagonal"""
    f = np.asarray(f, dtype=float)
    diag = np.stack([f[..., 0, 0], f[..., 1, 1]], axis=-1)
    with np.errstate(divide="ignore"):
        inv = np.where(diag > 0, 1.0 / np.where(diag > 0, diag, 1.0), np.inf)
    return inv.sum(axis=-1)

def simultaneous_error(f: ArrayLike) -> NDArray[np.float64]:
    """Tr F^-1 (the total variance bound of a joint estimate)"""
    return inverse_diagonal(f).sum(axis=-1)
