"""Parameter-grid sweeps and the CSV/JSON writers behind the command line."""
from functools import partial
from multiprocessing import Pool
import csv
import io
import json
import logging
import math
import os
import sys
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .config import WorkbenchConfig
from .models import ChannelParams
from .single_probe import optimal_theta, ratio_single
from .strategy import strategy_report
from .two_probe import optimal_alpha

logger = logging.getLogger(__name__)

Record = Dict[str, Any]
GridRange = Tuple[float, float, int]

DEFAULT_PHI_RANGE: GridRange = (0.05, 0.7, 101)
DEFAULT_KAPPA_RANGE: GridRange = (0.5, 10.0, 101)
SIGNIFICANT_DIGITS = 12

SINGLE_MAP_COLUMNS = ["phi", "kappa", "theta_opt_sim", "theta_opt_kappa", "R1"]
TWO_MAP_COLUMNS = ["phi", "kappa", "alpha_phi", "alpha_kappa", "alpha_sim", "R2"]
NOPT_MAP_COLUMNS = ["phi", "kappa", "n_opt", "delta_min", "winner", "case_label"]

def parse_range(text: str) -> GridRange:
    """'min:max:count' -> (min, max, count)"""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"Range must look like min:max:count, got {text!r}")
    return float(parts[0]), float(parts[1]), int(parts[2])

class SweepConfig(BaseModel):
    """A rectangular (phi, kappa) grid and where its results go"""
    model_config = ConfigDict(frozen=True)

    phi_range: GridRange = DEFAULT_PHI_RANGE
    kappa_range: GridRange = DEFAULT_KAPPA_RANGE
    n_max: int = Field(default_factory=lambda: WorkbenchConfig.N_MAX, ge=1)
    out: Optional[str] = None
    format: str = Field(default="csv", pattern="^(csv|json)$")
    threads: Union[int, str] = Field(default_factory=lambda: WorkbenchConfig.THREADS)

    @field_validator("phi_range", "kappa_range", mode="before")
    @classmethod
    def _accept_text(cls, value):
        return parse_range(value) if isinstance(value, str) else value

    @field_validator("phi_range", "kappa_range")
    @classmethod
    def _check_counts(cls, value: GridRange) -> GridRange:
        low, high, count = value
        if count < 2:
            raise ValueError(f"Grid needs at least 2 points per axis, got {count}")
        if low > high:
            raise ValueError(f"Range minimum {low} exceeds maximum {high}")
        return value

    @model_validator(mode="after")
    def _check_domain(self) -> "SweepConfig":
        if self.phi_range[0] < 0.0 or self.phi_range[1] > math.pi:
            raise ValueError(f"phi range {self.phi_range[:2]} leaves [0, pi]")
        if self.kappa_range[0] <= 0.0:
            raise ValueError(f"kappa range {self.kappa_range[:2]} must be positive")
        WorkbenchConfig.resolve_threads(self.threads)
        return self

    @property
    def workers(self) -> int:
        return WorkbenchConfig.resolve_threads(self.threads)

def load_sweep_config(path: Optional[str] = None, **overrides: Any) -> SweepConfig:
    """Merge a JSON config file with explicit settings; explicit ones win"""
    data: Dict[str, Any] = {}
    if path:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
        logger.debug(f"Loaded sweep config from {path}: {sorted(data)}")
    data.update({k: v for k, v in overrides.items() if v is not None})
    return SweepConfig(**data)

def grid_points(config: SweepConfig) -> List[ChannelParams]:
    """Grid in row-major order: phi outer, kappa inner"""
    phis = np.linspace(*config.phi_range)
    kappas = np.linspace(*config.kappa_range)
    return [ChannelParams(phi=float(p), kappa=float(k)) for p in phis for k in kappas]

def single_map_row(params: ChannelParams) -> Record:
    theta_sim, _ = optimal_theta(params, "simultaneous")
    theta_kappa, _ = optimal_theta(params, "kappa-individual")
    return {"phi": params.phi, "kappa": params.kappa, "theta_opt_sim": theta_sim,
            "theta_opt_kappa": theta_kappa, "R1": ratio_single(params)}

def two_map_row(params: ChannelParams) -> Record:
    alpha_phi, f_phi, _ = optimal_alpha(params, "phi-individual")
    alpha_kappa, f_kappa, _ = optimal_alpha(params, "kappa-individual")
    alpha_sim, delta_sim, _ = optimal_alpha(params, "simultaneous")
    return {"phi": params.phi, "kappa": params.kappa, "alpha_phi": alpha_phi,
            "alpha_kappa": alpha_kappa, "alpha_sim": alpha_sim,
            "R2": (1.0 / f_phi + 1.0 / f_kappa) / delta_sim}

def nopt_row(params: ChannelParams, n_max: int) -> Record:
    report = strategy_report(params, n_max, include_rows=False)
    return {"phi": params.phi, "kappa": params.kappa, "n_opt": report.n_opt,
            "delta_min": report.delta_min, "winner": report.winning_strategy,
            "case_label": report.case_label}

def run_grid(row: Callable[[ChannelParams], Record], config: SweepConfig) -> List[Record]:
    """Evaluate ``row`` on every grid point, results in grid order"""
    points = grid_points(config)
    workers = config.workers
    logger.info(f"Evaluating {len(points)} grid points on {workers} worker(s)")
    if workers == 1:
        return [row(p) for p in points]
    chunk = max(1, len(points) // (4 * workers))
    with Pool(workers) as pool:
        return list(pool.imap(row, points, chunksize=chunk))

def nopt_map(config: SweepConfig) -> List[Record]:
    return run_grid(partial(nopt_row, n_max=config.n_max), config)

def format_value(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.{SIGNIFICANT_DIGITS - 1}e}"
    return str(value)

def _json_value(value: Any) -> Any:
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        # JSON has no inf/nan
        return float(format_value(value)) if math.isfinite(value) else None
    return value

def render(records: Iterable[Record], columns: Sequence[str], fmt: str) -> str:
    """CSV with a header row and LF endings, or a JSON array of records"""
    if fmt == "json":
        payload = [{c: _json_value(r[c]) for c in columns} for r in records]
        return json.dumps(payload, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns), extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for r in records:
        writer.writerow({c: format_value(r[c]) for c in columns})
    return buf.getvalue()

def write_output(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    directory = os.path.dirname(out)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(out, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    logger.info(f"Wrote {out}")
