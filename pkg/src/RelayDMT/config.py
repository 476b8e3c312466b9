"""Run configuration documents

A run is described by one JSON object::

    {
      "mode": "simulate",
      "antennas": {"m1": 1, "mr": 1, "m2": 1},
      "protocol": {"name": "CF", "listen_fraction": null},
      "multiplexing": {"r1": 0.25, "r2": 0.25},
      "grids": {"r": {"start": 0, "stop": 1, "step": 0.05},
                "snr_db": [25, 30, 35, 40],
                "diversity": 0.5},
      "plan": {"trials_per_point": 1000000, "seed": 0, "workers": 4, "chunk_trials": 65536},
      "optimizer": {"resolution": 0.01, "method": "grid+refine"},
      "output": {"path": "out.csv", "format": "csv", "timestamp": true}
    }

Grids are either explicit lists or {start, stop, step} ranges with an inclusive stop.
The r-grid must stay within [0, min(M*, Mr)].
Only `mode` and `antennas` are always required; the rest depends on the mode:

- simulate needs `multiplexing`, `grids.snr_db` and a `plan` section
- optimize needs `grids.r` and takes only DCF or DDF
- region needs `grids.diversity`
"""

from __future__ import annotations
import json
import logging
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Mapping, Optional, Union

from .channel import AntennaConfig
from .constants import (
    CHUNK_TRIALS,
    DEFAULT_R_STEP,
    DEFAULT_RESOLUTION,
    DEFAULT_SEED,
    DEFAULT_SNR_DB,
    DEFAULT_TRIALS,
    TOL,
)
from .errors import ConfigError, DmtError
from .exponents import SearchMethod
from .montecarlo import SnrGrid, TrialPlan, default_workers
from .protocols import ProtocolKind
from .run_options import OptionSection
from .tradeoff import MultiplexingPair
from .utils import frange

logger = logging.getLogger(__name__)


class RunMode(str, Enum):
    ANALYTIC = "analytic"
    SIMULATE = "simulate"
    OPTIMIZE = "optimize"
    REGION = "region"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


ONE_WAY = (ProtocolKind.DCF, ProtocolKind.DDF)


@dataclass(frozen=True)
class RunConfig:
    mode: RunMode
    antennas: AntennaConfig
    protocol: ProtocolKind
    listen_fraction: Optional[float]
    multiplexing: Optional[MultiplexingPair]
    r_grid: tuple[float, ...]
    snr_grid: SnrGrid
    diversity: Optional[float]
    plan: TrialPlan
    resolution: float
    method: SearchMethod
    output_path: Optional[str]
    output_format: OutputFormat
    timestamp: bool

    def to_document(self) -> dict[str, Any]:
        """The JSON document that `parse_config` maps back to this config"""
        doc: dict[str, Any] = {
            "mode": self.mode.value,
            "antennas": {"m1": self.antennas.m1, "mr": self.antennas.mr, "m2": self.antennas.m2},
            "protocol": {"name": self.protocol.value, "listen_fraction": self.listen_fraction},
        }
        if self.multiplexing is not None:
            doc["multiplexing"] = {"r1": self.multiplexing.r1, "r2": self.multiplexing.r2}
        grids: dict[str, Any] = {"r": list(self.r_grid), "snr_db": list(self.snr_grid.points_db)}
        if self.diversity is not None:
            grids["diversity"] = self.diversity
        doc["grids"] = grids
        doc["plan"] = {
            "trials_per_point": self.plan.trials_per_point,
            "seed": self.plan.seed,
            "workers": self.plan.workers,
            "chunk_trials": self.plan.chunk_trials,
        }
        doc["optimizer"] = {"resolution": self.resolution, "method": self.method.value}
        doc["output"] = {
            "path": self.output_path,
            "format": self.output_format.value,
            "timestamp": self.timestamp,
        }
        return doc


def _number(section: OptionSection, key: str, value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"expected a number, got {value!r}", key=section.keypath(key))
    if not math.isfinite(value):
        raise ConfigError(f"expected a finite number, got {value!r}", key=section.keypath(key))
    return float(value)


def _integer(section: OptionSection, key: str, value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"expected an integer, got {value!r}", key=section.keypath(key))
    return value


def _choice(section: OptionSection, key: str, value: Any, enum: type[Enum]):
    try:
        return enum(value)
    except ValueError:
        allowed = ", ".join(str(e.value) for e in enum)  # type: ignore[attr-defined]
        raise ConfigError(f"expected one of {allowed}, got {value!r}", key=section.keypath(key)) from None


def _grid(section: OptionSection, key: str) -> Optional[list[float]]:
    raw = section.get(key)
    if raw is None:
        return None
    if isinstance(raw, list):
        return [_number(section, key, v) for v in raw]
    bounds = section.section(key)
    start = _number(bounds, "start", bounds["start"])
    stop = _number(bounds, "stop", bounds["stop"])
    step = _number(bounds, "step", bounds["step"])
    bounds.finish()
    if step <= 0 or stop < start:
        raise ConfigError("need step > 0 and stop >= start", key=section.keypath(key))
    return frange(start, stop, step)


def _antennas(doc: OptionSection) -> AntennaConfig:
    sec = doc.section("antennas")
    if not sec.keys():
        raise ConfigError("missing required section", key="antennas")
    counts = {k: _integer(sec, k, sec[k]) for k in ("m1", "mr", "m2")}
    sec.finish()
    try:
        return AntennaConfig(**counts)
    except DmtError as err:
        raise ConfigError(str(err), key="antennas") from None


def _protocol(doc: OptionSection, mode: RunMode) -> tuple[ProtocolKind, Optional[float]]:
    sec = doc.section("protocol")
    default = ProtocolKind.DCF if mode is RunMode.OPTIMIZE else ProtocolKind.CF
    kind = _choice(sec, "name", sec.get("name", default.value), ProtocolKind)
    listen = sec.get("listen_fraction")
    sec.finish()
    if mode is RunMode.OPTIMIZE and kind not in ONE_WAY:
        raise ConfigError(
            f"optimize computes the half-duplex DCF curve, got {kind.value}", key="protocol.name"
        )
    if listen is None:
        return kind, None
    listen = _number(sec, "listen_fraction", listen)
    if kind is not ProtocolKind.DCF:
        raise ConfigError("a fixed listen fraction only applies to DCF", key="protocol.listen_fraction")
    if not (0.0 < listen < 1.0):
        raise ConfigError(f"must lie in (0, 1), got {listen}", key="protocol.listen_fraction")
    return kind, listen


def _multiplexing(
    doc: OptionSection, kind: ProtocolKind, antennas: AntennaConfig
) -> Optional[MultiplexingPair]:
    if "multiplexing" not in doc:
        return None
    sec = doc.section("multiplexing")
    r1 = _number(sec, "r1", sec["r1"])
    raw_r2 = sec.get("r2")
    sec.finish()
    if kind in ONE_WAY:
        r2 = 0.0 if raw_r2 is None else _number(sec, "r2", raw_r2)
        if r2 != 0.0:
            raise ConfigError(f"{kind.value} carries only message 1, so r2 must be 0", key="multiplexing.r2")
    else:
        r2 = r1 if raw_r2 is None else _number(sec, "r2", raw_r2)
    try:
        pair = MultiplexingPair(r1, r2)
        pair.check(antennas)
    except DmtError as err:
        raise ConfigError(str(err), key="multiplexing") from None
    return pair


def _plan(doc: OptionSection, mode: RunMode) -> TrialPlan:
    if mode is RunMode.SIMULATE and "plan" not in doc:
        raise ConfigError("missing required section", key="plan")
    sec = doc.section("plan")
    values = {}
    defaults = {
        "trials_per_point": DEFAULT_TRIALS,
        "seed": DEFAULT_SEED,
        "workers": None,
        "chunk_trials": CHUNK_TRIALS,
    }
    for key, default in defaults.items():
        raw = sec.get(key)
        if raw is None:
            if key == "workers":
                default = default_workers()
            if mode is RunMode.SIMULATE:
                logger.info("%s not set, using %s", sec.keypath(key), default)
            values[key] = default
        else:
            values[key] = _integer(sec, key, raw)
    sec.finish()
    return TrialPlan(**values)


def parse_config(text: Union[str, Mapping[str, Any]]) -> RunConfig:
    """Validate a config document (JSON text or an already-decoded mapping)"""
    if isinstance(text, str):
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as err:
            raise ConfigError(f"malformed JSON: {err.msg}", line=err.lineno) from None
    else:
        raw = dict(text)
    doc = OptionSection(raw)

    mode = _choice(doc, "mode", doc["mode"], RunMode)
    antennas = _antennas(doc)
    kind, listen = _protocol(doc, mode)
    multiplexing = _multiplexing(doc, kind, antennas)
    if mode is RunMode.SIMULATE and multiplexing is None:
        raise ConfigError("missing required section", key="multiplexing")

    grids = doc.section("grids")
    if mode is RunMode.SIMULATE and "snr_db" not in grids:
        raise ConfigError("missing required key", key="grids.snr_db")
    if mode is RunMode.OPTIMIZE and "r" not in grids:
        raise ConfigError("missing required key", key="grids.r")
    if mode is RunMode.REGION and "diversity" not in grids:
        raise ConfigError("missing required key", key="grids.diversity")

    r_grid = _grid(grids, "r")
    if r_grid is None:
        r_grid = frange(0.0, float(min(antennas.m_star, antennas.mr)), DEFAULT_R_STEP)
    rmax = min(antennas.m_star, antennas.mr)
    if any(r < 0 or r > rmax + TOL for r in r_grid):
        raise ConfigError(f"multiplexing gains must lie in [0, {rmax}] for {antennas}", key="grids.r")
    snr_db = _grid(grids, "snr_db")
    try:
        snr_grid = SnrGrid(tuple(DEFAULT_SNR_DB if snr_db is None else snr_db))
    except DmtError as err:
        raise ConfigError(str(err), key="grids.snr_db") from None
    if snr_grid.points_db[0] <= 0 and mode is RunMode.SIMULATE:
        raise ConfigError("simulated SNR points must be above 0 dB", key="grids.snr_db")
    diversity = grids.get("diversity")
    if diversity is not None:
        diversity = _number(grids, "diversity", diversity)
        dmax = antennas.m_star * antennas.mr
        if not (0.0 <= diversity <= dmax):
            raise ConfigError(f"must lie in [0, {dmax}] for {antennas}", key="grids.diversity")
    grids.finish()

    plan = _plan(doc, mode)

    opt = doc.section("optimizer")
    resolution = _number(opt, "resolution", opt.get("resolution", DEFAULT_RESOLUTION))
    if not (0.0 < resolution <= 1.0):
        raise ConfigError(f"must lie in (0, 1], got {resolution}", key="optimizer.resolution")
    method = _choice(opt, "method", opt.get("method", SearchMethod.GRID_REFINE.value), SearchMethod)
    opt.finish()

    out = doc.section("output")
    path = out.get("path")
    if path is not None and not isinstance(path, str):
        raise ConfigError(f"expected a string, got {path!r}", key="output.path")
    fmt = _choice(out, "format", out.get("format", OutputFormat.CSV.value), OutputFormat)
    timestamp = out.get("timestamp", True)
    if not isinstance(timestamp, bool):
        raise ConfigError(f"expected true or false, got {timestamp!r}", key="output.timestamp")
    out.finish()
    doc.finish()

    return RunConfig(
        mode=mode,
        antennas=antennas,
        protocol=kind,
        listen_fraction=listen,
        multiplexing=multiplexing,
        r_grid=tuple(r_grid),
        snr_grid=snr_grid,
        diversity=diversity,
        plan=plan,
        resolution=resolution,
        method=method,
        output_path=path,
        output_format=fmt,
        timestamp=timestamp,
    )


def load_config(path: Union[str, Path]) -> RunConfig:
    with Path(path).open() as f:
        return parse_config(f.read())
