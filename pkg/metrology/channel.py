"""
Exact evaluation of the vMF-averaged phase channel.

A qubit phase shift exp(-i phi n.sigma) whose axis n is drawn from a
von Mises-Fisher distribution around z is a unital phase-covariant channel.
It is fully described by two scalars: the flip weight ``b`` (populations
move by ``rho00 -> (1-b) rho00 + b rho11``) and the coherence factor ``c``
(``rho01 -> c rho01``).  Everything else (the contractions, the rotation
angle, the Liouville matrix, the Bloch map) is derived from them.
"""
from dataclasses import dataclass, replace
import logging
import math

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import DomainError
from .models import ChannelParams

logger = logging.getLogger(__name__)

SMALL_KAPPA = 1e-3
SMALL_KAPPA_SLOPE = 0.1
LARGE_KAPPA = 30.0
BLOCH_SLACK = 1e-12

@dataclass(frozen=True)
class ChannelScalars:
    """Channel scalars b, c and their partials in phi and kappa.

    ``steps`` counts how many channel uses the scalars describe
    (see :func:`compose_scalars`).
    """
    b: float
    c: complex
    db_dphi: float
    db_dkappa: float
    dc_dphi: complex
    dc_dkappa: complex
    steps: int = 1

    @property
    def lambda_par(self) -> float:
        return 1.0 - 2.0 * self.b

    @property
    def lambda_perp(self) -> float:
        return abs(self.c)

    @property
    def g(self) -> float:
        """Rotation angle about z; 2 phi in the noiseless limit"""
        return math.atan2(-self.c.imag, self.c.real)

    @property
    def db(self) -> NDArray[np.float64]:
        return np.array([self.db_dphi, self.db_dkappa])

    @property
    def dc(self) -> NDArray[np.complex128]:
        return np.array([self.dc_dphi, self.dc_dkappa])

def _coth(kappa: float) -> float:
    if kappa > LARGE_KAPPA:
        return 1.0 + 2.0 * math.exp(-2.0 * kappa)
    return 1.0 / math.tanh(kappa)

def _csch2(kappa: float) -> float:
    if kappa > LARGE_KAPPA:
        return 4.0 * math.exp(-2.0 * kappa)
    return 1.0 / math.sinh(kappa) ** 2

def axis_spread(kappa: float) -> tuple[float, float]:
    """s(kappa) = (kappa coth kappa - 1)/kappa^2 and ds/dkappa.

    s is half the mean of sin^2(theta) under the vMF distribution; it runs
    from 1/3 (uniform axis) down to 0 (fixed axis).
    """
    if math.isinf(kappa):
        return 0.0, 0.0
    if kappa < SMALL_KAPPA:
        k2 = kappa * kappa
        s = 1.0 / 3.0 - k2 / 45.0 + 2.0 * k2 * k2 / 945.0
    else:
        s = (kappa * _coth(kappa) - 1.0) / kappa ** 2
    if kappa < SMALL_KAPPA_SLOPE:
        # the closed form for the slope cancels badly well above SMALL_KAPPA
        k2 = kappa * kappa
        ds = kappa * (-2.0 / 45.0 + k2 * (8.0 / 945.0 + k2 * (-6.0 / 4725.0 + k2 * 16.0 / 93555.0)))
    else:
        coth = _coth(kappa)
        ds = (coth - kappa * _csch2(kappa)) / kappa ** 2 - 2.0 * (kappa * coth - 1.0) / kappa ** 3
    return s, ds

def vmf_density(theta: ArrayLike, kappa: float) -> NDArray[np.float64]:
    """vMF density per solid angle around +z: kappa exp(kappa cos theta)/(4 pi sinh kappa)"""
    if not kappa > 0:
        raise DomainError(f"vMF concentration must be positive, got {kappa}")
    theta = np.asarray(theta, dtype=float)
    if np.any((theta < 0) | (theta > math.pi)):
        raise DomainError("Polar angle must lie in [0, pi]")
    if kappa > LARGE_KAPPA:
        log_p = (math.log(kappa) + kappa * (np.cos(theta) - 1.0)
                 - math.log(2.0 * math.pi) - math.log1p(-math.exp(-2.0 * kappa)))
        return np.exp(log_p)
    return kappa * np.exp(kappa * np.cos(theta)) / (4.0 * math.pi * math.sinh(kappa))

def channel_scalars(params: ChannelParams) -> ChannelScalars:
    """Evaluate b, c and their analytic partials at (phi, kappa).

    b = 2 sin^2(phi) s(kappa) and c = cos(2 phi) + b - i t with
    t = b kappa cot(phi) written as sin(2 phi) kappa s(kappa), which is
    finite at phi = 0.
    """
    phi, kappa = params.phi, params.kappa
    s, ds = axis_spread(kappa)
    # mean axis component cos(theta): A = kappa s = coth(kappa) - 1/kappa
    if math.isinf(kappa):
        mean_z, dmean_z = 1.0, 0.0
    else:
        mean_z, dmean_z = kappa * s, s + kappa * ds

    sin_phi = math.sin(phi)
    sin2, cos2 = math.sin(2.0 * phi), math.cos(2.0 * phi)

    b = 2.0 * sin_phi ** 2 * s
    db_dphi = 2.0 * sin2 * s
    db_dkappa = 2.0 * sin_phi ** 2 * ds

    t = sin2 * mean_z
    c = complex(cos2 + b, -t)
    dc_dphi = complex(-2.0 * sin2 + db_dphi, -2.0 * cos2 * mean_z)
    dc_dkappa = complex(db_dkappa, -sin2 * dmean_z)
    return ChannelScalars(b=b, c=c, db_dphi=db_dphi, db_dkappa=db_dkappa,
                          dc_dphi=dc_dphi, dc_dkappa=dc_dkappa)

def compose_scalars(scalars: ChannelScalars, k: int) -> ChannelScalars:
    """Scalars of the channel applied k times in sequence.

    The z contraction multiplies, (1 - 2B) = (1 - 2b)^k, and so does the
    coherence factor, c -> c^k.
    """
    if k < 1:
        raise DomainError(f"Composition count must be at least 1, got {k}")
    if k == 1:
        return scalars
    lam = scalars.lambda_par
    lam_prev = lam ** (k - 1)
    c_prev = scalars.c ** (k - 1)
    return replace(
        scalars,
        b=0.5 * (1.0 - lam_prev * lam),
        c=c_prev * scalars.c,
        db_dphi=k * lam_prev * scalars.db_dphi,
        db_dkappa=k * lam_prev * scalars.db_dkappa,
        dc_dphi=k * c_prev * scalars.dc_dphi,
        dc_dkappa=k * c_prev * scalars.dc_dkappa,
        steps=scalars.steps * k,
    )

def liouville_matrix(scalars: ChannelScalars) -> NDArray[np.complex128]:
    """4x4 matrix acting on (rho00, rho01, rho10, rho11)"""
    lam = scalars.lambda_par
    keep, flip = 0.5 * (1.0 + lam), 0.5 * (1.0 - lam)
    return np.array([
        [keep, 0, 0, flip],
        [0, scalars.c, 0, 0],
        [0, 0, np.conj(scalars.c), 0],
        [flip, 0, 0, keep],
    ], dtype=complex)

def choi_matrix(liouville: NDArray[np.complex128]) -> NDArray[np.complex128]:
    """Choi matrix sum_ij |i><j| (x) Lambda(|i><j|) of a row-major Liouville matrix"""
    d = math.isqrt(liouville.shape[0])
    tensor = liouville.reshape(d, d, d, d)
    return tensor.transpose(2, 0, 3, 1).reshape(d * d, d * d)

def apply_liouville(liouville: NDArray[np.complex128], rho: NDArray[np.complex128]) -> NDArray[np.complex128]:
    d = rho.shape[-1]
    return (liouville @ rho.reshape(d * d)).reshape(d, d)

def apply_channel_bloch(r0: ArrayLike, scalars: ChannelScalars) -> NDArray[np.float64]:
    """Map a Bloch vector through the channel.

    In-plane components rotate and shrink by c, the z component by 1 - 2b.
    """
    r0 = np.asarray(r0, dtype=float)
    if np.linalg.norm(r0) > 1.0 + BLOCH_SLACK:
        raise DomainError(f"Bloch vector has length {np.linalg.norm(r0):.6g} > 1")
    x, y, z = r0
    cr, ci = scalars.c.real, scalars.c.imag
    return np.array([cr * x + ci * y, cr * y - ci * x, scalars.lambda_par * z])
