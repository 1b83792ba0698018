"""
GHZ probes (|0...0> + |1...1>)/sqrt(2) sent through N parallel channel uses.

The evolved state splits into an orthogonal direct sum: a 2x2 corner block
on span{|0...0>, |1...1>} and a diagonal over every other basis string.
Bit flips act independently per qubit, so the diagonal only depends on the
Hamming weight m of the string; each weight carries C(N, m) equal entries.
"""
from dataclasses import dataclass
import logging
import math

import numpy as np
from numpy.typing import NDArray
from scipy.special import expit, gammaln, logsumexp

from .channel import ChannelScalars, channel_scalars, compose_scalars
from .errors import DomainError, NumericalError
from .models import ChannelParams
from .qfim import QfiMatrix, block_qfim, block_sld, compat_functional

logger = logging.getLogger(__name__)

DENSE_LIMIT = 10
NEGLIGIBLE_MASS = 1e-300

@dataclass(frozen=True)
class GhzEvolvedState:
    """Structured GHZ state after the channel.

    ``log_populations[k]`` is ln p_m for weight m = k + 1, one representative
    basis string; ``log_degeneracy[k]`` is ln C(N, m).
    """
    n_qubits: int
    corner_block: NDArray[np.complex128]
    log_populations: NDArray[np.float64]
    log_degeneracy: NDArray[np.float64]

    @property
    def weights(self) -> NDArray[np.int64]:
        return np.arange(1, self.n_qubits)

    @property
    def populations(self) -> NDArray[np.float64]:
        return np.exp(self.log_populations)

    @property
    def degeneracies(self) -> NDArray[np.float64]:
        return np.rint(np.exp(self.log_degeneracy))

    def trace(self) -> float:
        corner = float(np.real(np.trace(self.corner_block)))
        if self.n_qubits == 1:
            return corner
        return corner + float(np.exp(logsumexp(self.log_populations + self.log_degeneracy)))

    def to_dense(self) -> NDArray[np.complex128]:
        """Full 2^N x 2^N matrix in the computational basis"""
        if self.n_qubits > DENSE_LIMIT:
            raise DomainError(f"Dense GHZ state limited to {DENSE_LIMIT} qubits, got {self.n_qubits}")
        dim = 2 ** self.n_qubits
        hamming = np.array([bin(i).count("1") for i in range(dim)])
        diag = np.zeros(dim)
        inner = (hamming > 0) & (hamming < self.n_qubits)
        diag[inner] = self.populations[hamming[inner] - 1]
        rho = np.diag(diag).astype(complex)
        corner = [0, dim - 1]
        rho[np.ix_(corner, corner)] = self.corner_block
        return rho

def _log_flip_terms(n: int, b: float):
    """ln of b^m (1-b)^(N-m) and b^(N-m) (1-b)^m for m = 1..N-1"""
    m = np.arange(1, n, dtype=float)
    log_b, log_keep = math.log(b), math.log1p(-b)
    return m * log_b + (n - m) * log_keep, (n - m) * log_b + m * log_keep

def _corner(n: int, scalars: ChannelScalars):
    b, c = scalars.b, scalars.c
    d = 0.5 * (b ** n + (1.0 - b) ** n)
    off = 0.5 * c ** n
    block = np.array([[d, off], [off.conjugate(), d]], dtype=complex)

    def derivative(db: float, dc: complex) -> NDArray[np.complex128]:
        dd = 0.5 * n * (b ** (n - 1) - (1.0 - b) ** (n - 1)) * db
        doff = 0.5 * n * c ** (n - 1) * dc
        return np.array([[dd, doff], [doff.conjugate(), dd]], dtype=complex)

    return (block, derivative(scalars.db_dphi, scalars.dc_dphi),
            derivative(scalars.db_dkappa, scalars.dc_dkappa))

def _check_size(n: int) -> None:
    if n < 1:
        raise DomainError(f"GHZ probe needs at least one qubit, got N={n}")

def ghz_blocks(n: int, scalars: ChannelScalars) -> GhzEvolvedState:
    """Corner block and weight-resolved populations of Lambda^(x)N applied to GHZ_N"""
    _check_size(n)
    block, _, _ = _corner(n, scalars)
    m = np.arange(1, n, dtype=float)
    log_degeneracy = gammaln(n + 1) - gammaln(m + 1) - gammaln(n - m + 1)
    if n == 1 or scalars.b == 0.0:
        log_populations = np.full(n - 1, -np.inf)
    else:
        lq1, lq2 = _log_flip_terms(n, scalars.b)
        log_populations = np.logaddexp(lq1, lq2) - math.log(2.0)
    return GhzEvolvedState(n_qubits=n, corner_block=block,
                           log_populations=log_populations, log_degeneracy=log_degeneracy)

def _population_fisher(n: int, b: float) -> float:
    """sum_m C(N,m) (dp_m/db)^2 / p_m, the Fisher information of the weights in b"""
    if n == 1 or b == 0.0:
        return 0.0
    m = np.arange(1, n, dtype=float)
    lq1, lq2 = _log_flip_terms(n, b)
    log_mass = gammaln(n + 1) - gammaln(m + 1) - gammaln(n - m + 1) + np.logaddexp(lq1, lq2) - math.log(2.0)
    # d ln p / db as a convex mix of the two flip-pattern scores
    w1 = expit(lq1 - lq2)
    score = w1 * (m / b - (n - m) / (1.0 - b)) + (1.0 - w1) * ((n - m) / b - m / (1.0 - b))
    keep = log_mass > math.log(NEGLIGIBLE_MASS)
    return float(np.sum(np.exp(log_mass[keep]) * score[keep] ** 2))

def ghz_qfim(n: int, scalars: ChannelScalars) -> QfiMatrix:
    """QFIM from scalars: corner-block spectral term plus the population term"""
    _check_size(n)
    block, d_phi, d_kappa = _corner(n, scalars)
    f = block_qfim(block, d_phi, d_kappa)
    f = f + _population_fisher(n, scalars.b) * np.outer(scalars.db, scalars.db)
    if not np.all(np.isfinite(f)):
        logger.error(f"Non-finite GHZ QFIM at N={n}, b={scalars.b:.6g}")
        raise NumericalError(f"GHZ QFIM is not finite at N={n}")
    return f

def qfim_ghz(n: int, params: ChannelParams) -> QfiMatrix:
    return ghz_qfim(n, channel_scalars(params))

def qfim_hybrid(m: int, n_total: int, params: ChannelParams) -> QfiMatrix:
    """M-qubit GHZ probe, each qubit going through N_total/M channel uses in sequence"""
    if m < 1 or n_total < 1 or n_total % m:
        raise DomainError(f"Hybrid scheme needs M dividing N_total, got M={m}, N_total={n_total}")
    return ghz_qfim(m, compose_scalars(channel_scalars(params), n_total // m))

def compat_ghz(n: int, params: ChannelParams) -> float:
    """Im Tr(rho L_phi L_kappa) for the evolved GHZ state.

    Both SLDs are diagonal on the population part, so only the corner
    block can contribute.
    """
    _check_size(n)
    block, d_phi, d_kappa = _corner(n, channel_scalars(params))
    return float(compat_functional(block, block_sld(block, d_phi), block_sld(block, d_kappa)))
