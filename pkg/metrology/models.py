import math
from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

SQRT_HALF = math.sqrt(0.5)

Target = Literal["phi-individual", "kappa-individual", "simultaneous"]
Strategy = Literal["individual", "simultaneous"]
CaseLabel = Literal["A", "B", "C"]

class ChannelParams(BaseModel):
    """The two estimation targets: phase shift phi and vMF concentration kappa.

    kappa may be ``math.inf`` for the noiseless channel.
    """
    model_config = ConfigDict(frozen=True)

    phi: float = Field(ge=0.0, le=math.pi, description="phase shift, radians")
    kappa: float = Field(gt=0.0, description="vMF concentration, dimensionless")

    def shifted(self, dphi: float = 0.0, dkappa: float = 0.0) -> "ChannelParams":
        return ChannelParams(phi=self.phi + dphi, kappa=self.kappa + dkappa)

class SingleProbe(BaseModel):
    """Pure single-qubit probe on the Bloch sphere"""
    model_config = ConfigDict(frozen=True)

    theta0: float = Field(ge=0.0, le=math.pi)
    azimuth0: float = 0.0

class TwoQubitProbe(BaseModel):
    """alpha(|00> + |11>) + beta(|01> + |10>) with alpha^2 + beta^2 = 1/2"""
    model_config = ConfigDict(frozen=True)

    alpha: float = Field(ge=0.0, le=SQRT_HALF)

    @property
    def beta(self) -> float:
        return math.sqrt(max(0.5 - self.alpha ** 2, 0.0))

class CompatibilityReport(BaseModel):
    """Which of the three compatibility conditions hold for a probe choice"""
    shared_optimal_probe: bool
    commuting_measurement: bool
    independent_parameters: bool
    triple_product: float
    off_diagonal: float

class StrategyRow(BaseModel):
    n: int
    delta_ind: float
    delta_sim: float
    delta_sql: float
    ratio: float

class StrategyReport(BaseModel):
    """Resource-normalized strategy comparison at one parameter point"""
    params: ChannelParams
    rows: List[StrategyRow] = []
    n_opt: int
    delta_min: float
    winning_strategy: Strategy
    case_label: CaseLabel
    n_opt_ind: int
    n_opt_sim: int
    classical_dominated: bool = False
    scan_saturated: bool = False

class SaturationRow(BaseModel):
    m: int
    delta: float
    ratio_to_full: float

class SaturationCurve(BaseModel):
    """Hybrid-scheme error over the divisors M of the total channel count"""
    params: ChannelParams
    n_total: int
    strategy: Strategy
    rows: List[SaturationRow]
    saturation_m: Optional[int] = None
    monotone: bool = True
