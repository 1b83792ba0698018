"""
Command line entry point: ``phasebench <command> [options]``.

Data goes to stdout (or --out), log records to stderr.  Exit codes:
0 success, 2 invalid input, 3 I/O failure, 4 numerical failure.
"""
import argparse
import logging
import sys
import time
from typing import List, Optional

from pydantic import ValidationError

from .channel import channel_scalars
from .config import WorkbenchConfig, configure_logging
from .errors import ConvergenceError, DomainError, NumericalError
from .models import ChannelParams
from .strategy import m_saturation_curve, scan_strategies, strategy_report
from .sweep import (NOPT_MAP_COLUMNS, SINGLE_MAP_COLUMNS, TWO_MAP_COLUMNS, SweepConfig,
                    load_sweep_config, nopt_map, parse_range, render, run_grid,
                    single_map_row, two_map_row, write_output)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_IO = 3
EXIT_NUMERICAL = 4

SCALAR_COLUMNS = ["phi", "kappa", "b", "c_re", "c_im", "lambda_par", "lambda_perp", "g",
                  "db_dphi", "db_dkappa", "dc_dphi_re", "dc_dphi_im", "dc_dkappa_re", "dc_dkappa_im"]
CURVE_COLUMNS = ["N", "delta_ind", "delta_sim", "delta_sql", "R"]
MSAT_COLUMNS = ["M", "delta", "ratio_to_full"]
REPORT_COLUMNS = ["phi", "kappa", "n_opt", "delta_min", "winner", "case_label",
                  "n_opt_ind", "n_opt_sim", "classical_dominated", "scan_saturated"]

def _params(args: argparse.Namespace) -> ChannelParams:
    return ChannelParams(phi=args.phi, kappa=args.kappa)

def _sweep_config(args: argparse.Namespace) -> SweepConfig:
    """Flags over the JSON config; the resolved output path is written back to args"""
    config = load_sweep_config(args.config, phi_range=args.phi_range, kappa_range=args.kappa_range,
                               n_max=args.n_max, out=args.out, format=args.format, threads=args.threads)
    args.out = config.out
    return config

def cmd_scalars(args: argparse.Namespace) -> str:
    params = _params(args)
    sc = channel_scalars(params)
    record = {"phi": params.phi, "kappa": params.kappa, "b": sc.b, "c_re": sc.c.real,
              "c_im": sc.c.imag, "lambda_par": sc.lambda_par, "lambda_perp": sc.lambda_perp,
              "g": sc.g, "db_dphi": sc.db_dphi, "db_dkappa": sc.db_dkappa,
              "dc_dphi_re": sc.dc_dphi.real, "dc_dphi_im": sc.dc_dphi.imag,
              "dc_dkappa_re": sc.dc_dkappa.real, "dc_dkappa_im": sc.dc_dkappa.imag}
    return render([record], SCALAR_COLUMNS, args.format or "csv")

def cmd_single_map(args: argparse.Namespace) -> str:
    config = _sweep_config(args)
    return render(run_grid(single_map_row, config), SINGLE_MAP_COLUMNS, config.format)

def cmd_two_map(args: argparse.Namespace) -> str:
    config = _sweep_config(args)
    return render(run_grid(two_map_row, config), TWO_MAP_COLUMNS, config.format)

def cmd_nopt_map(args: argparse.Namespace) -> str:
    config = _sweep_config(args)
    return render(nopt_map(config), NOPT_MAP_COLUMNS, config.format)

def cmd_ghz_curves(args: argparse.Namespace) -> str:
    curves = scan_strategies(_params(args), args.n_max, early_exit=False)
    records = [{"N": r.n, "delta_ind": r.delta_ind, "delta_sim": r.delta_sim,
                "delta_sql": r.delta_sql, "R": r.ratio} for r in curves.rows()]
    return render(records, CURVE_COLUMNS, args.format or "csv")

def cmd_msat(args: argparse.Namespace) -> str:
    curve = m_saturation_curve(_params(args), args.n_total)
    logger.info(f"{curve.strategy} strategy, within 5% of the full GHZ error from M={curve.saturation_m}")
    records = [{"M": r.m, "delta": r.delta, "ratio_to_full": r.ratio_to_full} for r in curve.rows]
    return render(records, MSAT_COLUMNS, args.format or "csv")

def cmd_report(args: argparse.Namespace) -> str:
    params = _params(args)
    report = strategy_report(params, args.n_max, include_rows=False)
    record = {"phi": params.phi, "kappa": params.kappa, "n_opt": report.n_opt,
              "delta_min": report.delta_min, "winner": report.winning_strategy,
              "case_label": report.case_label, "n_opt_ind": report.n_opt_ind,
              "n_opt_sim": report.n_opt_sim, "classical_dominated": report.classical_dominated,
              "scan_saturated": report.scan_saturated}
    return render([record], REPORT_COLUMNS, args.format or "csv")

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phasebench",
        description="Estimate a phase and its random-axis concentration: QFIM maps and strategy curves",
    )
    parser.add_argument("--log-level", default=None, help="debug, info, warning or error (env LOGLEVEL)")
    commands = parser.add_subparsers(dest="command", required=True)

    output = argparse.ArgumentParser(add_help=False)
    output.add_argument("--out", default=None, help="output file (default stdout)")
    output.add_argument("--format", choices=["csv", "json"], default=None)

    point = argparse.ArgumentParser(add_help=False)
    point.add_argument("--phi", type=float, required=True)
    point.add_argument("--kappa", type=float, required=True)

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--phi-range", type=parse_range, default=None, help="min:max:count")
    grid.add_argument("--kappa-range", type=parse_range, default=None, help="min:max:count")
    grid.add_argument("--threads", default=None, help="worker processes, integer or 'auto'")
    grid.add_argument("--config", default=None, help="JSON sweep config; flags take precedence")

    def add(name: str, handler, parents, help_text: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, parents=parents, help=help_text)
        sub.set_defaults(handler=handler)
        return sub

    add("scalars", cmd_scalars, [point, output], "channel scalars and their partials")
    add("single-map", cmd_single_map, [grid, output], "optimal single-qubit probes and R1 over a grid")
    add("two-map", cmd_two_map, [grid, output], "optimal two-qubit probes and R2 over a grid")
    nopt = add("nopt-map", cmd_nopt_map, [grid, output], "N_opt, error minimum, winner and case over a grid")
    nopt.add_argument("--n-max", type=int, default=None)
    curves = add("ghz-curves", cmd_ghz_curves, [point, output], "strategy errors against N")
    curves.add_argument("--n-max", type=int, default=WorkbenchConfig.N_MAX)
    msat = add("msat", cmd_msat, [point, output], "hybrid-scheme error over the divisors of N_total")
    msat.add_argument("--n-total", type=int, required=True)
    report = add("report", cmd_report, [point, output], "strategy summary at one point")
    report.add_argument("--n-max", type=int, default=WorkbenchConfig.N_MAX)
    for name in ("single-map", "two-map"):
        commands.choices[name].set_defaults(n_max=None)
    return parser

def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    start = time.time()
    try:
        configure_logging(args.log_level)
        text = args.handler(args)
        write_output(text, args.out)
    except (NumericalError, ConvergenceError, FloatingPointError) as e:
        logger.error(f"Numerical failure: {str(e)}")
        return EXIT_NUMERICAL
    except (ValidationError, DomainError, ValueError) as e:
        logger.error(f"Invalid input: {str(e)}")
        return EXIT_INVALID
    except OSError as e:
        logger.error(f"I/O failure: {str(e)}")
        return EXIT_IO
    logger.info(f"{args.command} completed in {time.time() - start:.2f} seconds")
    return EXIT_OK

if __name__ == "__main__":
    sys.exit(main())
