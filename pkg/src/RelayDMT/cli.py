from __future__ import annotations
import argparse
import json
import logging
import math
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

from .config import RunConfig, RunMode, parse_config
from .errors import ConfigError, DmtError
from .exponents import cf_exponent, dcf_dmt, fixed_listen_dmt
from .montecarlo import fit_messages, simulate_curve
from .protocols import make_protocol
from .results import Table, write_results
from .tradeoff import (
    MultiplexingPair,
    cf_dmt,
    df_region,
    df_symmetric_dmt,
    df_threshold,
    outer_bound,
)

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


def analytic_tables(config: RunConfig) -> list[Table]:
    ant = config.antennas
    curve = Table(
        "curve", ("r", "cf_dmt", "outer_bound_d1", "outer_bound_d2", "df_symmetric_dmt")
    )
    for r in config.r_grid:
        bound = outer_bound(ant, MultiplexingPair(r, r))
        curve.add(r, cf_dmt(ant, r), bound.d1, bound.d2, df_symmetric_dmt(ant, r))

    threshold = df_threshold(ant)
    d = threshold if config.diversity is None else config.diversity
    region = Table("df_region", ("d", "r1", "r2"))
    for r1, r2 in df_region(ant, d).vertices():
        region.add(d, r1, r2)

    thresh = Table("threshold", ("df_threshold",))
    thresh.add(threshold)
    return [curve, region, thresh]


def simulate_tables(config: RunConfig, progress: Optional[bool] = None) -> list[Table]:
    if config.multiplexing is None:
        raise ConfigError("missing required section", key="multiplexing")
    proto = make_protocol(config.protocol, config.listen_fraction)
    messages = (1,) if proto.one_way else (1, 2)
    estimates = simulate_curve(
        proto, config.antennas, config.multiplexing, config.snr_grid, config.plan, progress
    )

    outage = Table("outage", ("snr_db", "message", "trials", "failures", "p_hat", "stderr"))
    for est in estimates:
        for msg in messages:
            idx = msg - 1
            outage.add(
                est.snr.db, msg, est.trials, est.failures[idx], est.p_hat[idx], est.stderr[idx]
            )

    fit = Table("fit", ("message", "d_hat", "stderr", "points_used"))
    for msg, slope in fit_messages(estimates, messages).items():
        if slope is None:
            fit.add(msg, math.nan, math.nan, 0)
        else:
            fit.add(msg, slope.d_hat, slope.stderr, slope.points_used)
    return [outage, fit]


def optimize_tables(config: RunConfig) -> list[Table]:
    ant = config.antennas
    columns: tuple[str, ...] = ("r", "dcf_dmt", "full_duplex_dmt")
    if config.listen_fraction is not None:
        columns += ("fixed_listen_dmt",)
    curve = Table("curve", columns)
    for r in config.r_grid:
        row: list[Any] = [
            r,
            dcf_dmt(ant, r, config.method, config.resolution),
            cf_exponent(ant, r),
        ]
        if config.listen_fraction is not None:
            row.append(
                fixed_listen_dmt(ant, r, config.listen_fraction, config.method, config.resolution)
            )
        curve.add(*row)
    return [curve]


def region_tables(config: RunConfig) -> list[Table]:
    if config.diversity is None:
        raise ConfigError("missing required key", key="grids.diversity")
    region = df_region(config.antennas, config.diversity)
    constraints = Table("constraints", ("a", "b", "c"))
    for con in region.constraints:
        constraints.add(con.a, con.b, con.c)
    boundary = Table("boundary", ("r1", "r2"))
    for r1, r2 in region.vertices():
        boundary.add(r1, r2)
    return [constraints, boundary]


def build_tables(config: RunConfig, progress: Optional[bool] = None) -> list[Table]:
    if config.mode is RunMode.ANALYTIC:
        return analytic_tables(config)
    if config.mode is RunMode.SIMULATE:
        return simulate_tables(config, progress)
    if config.mode is RunMode.OPTIMIZE:
        return optimize_tables(config)
    return region_tables(config)


def run(config: RunConfig, progress: Optional[bool] = None) -> int:
    """Run one job and write its results; returns the exit status"""
    logger.info("%s run for %s with %s", config.mode.value, config.antennas, config.protocol.value)
    tables = build_tables(config, progress)
    write_results(config, tables, stream=sys.stdout)
    if config.output_path is not None:
        logger.info("wrote %s", config.output_path)
    return 0


def _read_document(path: str) -> dict[str, Any]:
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise ConfigError(f"cannot read {path}: {err.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise ConfigError(f"malformed JSON: {err.msg}", line=err.lineno) from None
    if not isinstance(doc, dict):
        raise ConfigError("a config document must be a JSON object")
    return doc


def apply_overrides(doc: dict[str, Any], args: argparse.Namespace) -> dict[str, Any]:
    """Fold command-line flags into a config document"""
    doc = dict(doc)
    doc["mode"] = args.mode
    if args.seed is not None:
        doc["plan"] = dict(doc.get("plan") or {}, seed=args.seed)
    output = dict(doc.get("output") or {})
    if args.out is not None:
        output["path"] = args.out
    if args.format is not None:
        output["format"] = args.format
    if args.no_timestamp:
        output["timestamp"] = False
    if output:
        doc["output"] = output
    return doc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="JSON run configuration")
    common.add_argument("--out", help="Result file; stdout when omitted")
    common.add_argument("--format", choices=("csv", "json"), help="Result file format")
    common.add_argument("--seed", type=int, help="Overrides plan.seed")
    common.add_argument(
        "--no-timestamp", action="store_true", help="Leave the generation time out of the metadata"
    )
    common.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for progress, -vv for debugging"
    )

    parser = argparse.ArgumentParser(
        prog="relay-dmt",
        description="Diversity-multiplexing tradeoff curves and outage simulation for MIMO relay channels",
    )
    sub = parser.add_subparsers(dest="mode", required=True)
    sub.add_parser("analytic", parents=[common], help="Closed-form CF / DF tradeoff curves")
    sub.add_parser("simulate", parents=[common], help="Monte Carlo outage and slope fits")
    sub.add_parser("optimize", parents=[common], help="Half-duplex DCF tradeoff from exponent search")
    sub.add_parser("region", parents=[common], help="DF multiplexing gain region at one diversity")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING
    if args.verbose == 1:
        level = logging.INFO
    elif args.verbose > 1:
        level = logging.DEBUG
    logging.basicConfig(level=level, format=LOG_FORMAT)

    try:
        doc = apply_overrides(_read_document(args.config), args)
        config = parse_config(doc)
        return run(config, progress=True if args.verbose else None)
    except DmtError as err:
        print(f"relay-dmt: error: {err}", file=sys.stderr)
        return 2
