"""Monte Carlo outage estimation and diversity slope fitting

Trials are cut into fixed-size chunks. Chunk c of stream key k draws from
SeedSequence(seed, spawn_key=(k, c)), so the counts depend only on the plan
and never on how chunks are spread over worker processes.
"""

from __future__ import annotations
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
from scipy.stats import linregress
from tqdm import tqdm

from .channel import AntennaConfig, SnrPoint, sample_batch
from .constants import CHUNK_TRIALS, DEFAULT_SEED, DEFAULT_TRIALS, MIN_FAILURES
from .errors import ConfigError, DomainError, InsufficientDataError
from .protocols import Protocol, ProtocolKind, RateAssignment, make_protocol
from .tradeoff import MultiplexingPair

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SnrGrid:
    points_db: tuple[float, ...]

    def __post_init__(self):
        pts = tuple(float(p) for p in self.points_db)
        if len(pts) < 2:
            raise DomainError("an SNR grid needs at least 2 points")
        if not all(math.isfinite(p) for p in pts):
            raise DomainError("SNR grid points must be finite")
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise DomainError("SNR grid points must be strictly increasing")
        object.__setattr__(self, "points_db", pts)

    def points(self) -> list[SnrPoint]:
        return [SnrPoint.from_db(p) for p in self.points_db]


@dataclass(frozen=True)
class TrialPlan:
    trials_per_point: int = DEFAULT_TRIALS
    seed: int = DEFAULT_SEED
    workers: int = 1
    chunk_trials: int = CHUNK_TRIALS

    def __post_init__(self):
        for name in ("trials_per_point", "workers", "chunk_trials"):
            val = getattr(self, name)
            if isinstance(val, bool) or not isinstance(val, int) or val < 1:
                raise ConfigError(f"must be a positive integer, got {val!r}", key=f"plan.{name}")
        if isinstance(self.seed, bool) or not isinstance(self.seed, int):
            raise ConfigError(f"must be an integer, got {self.seed!r}", key="plan.seed")
        if not (0 <= self.seed < 2**64):
            raise ConfigError(f"must fit in 64 unsigned bits, got {self.seed}", key="plan.seed")


@dataclass(frozen=True)
class OutageEstimate:
    """Outage counts of both messages at one SNR point"""

    snr: SnrPoint
    failures: tuple[int, int]
    trials: int

    @property
    def p_hat(self) -> tuple[float, float]:
        return (self.failures[0] / self.trials, self.failures[1] / self.trials)

    @property
    def stderr(self) -> tuple[float, float]:
        p1, p2 = self.p_hat
        return (
            math.sqrt(p1 * (1 - p1) / self.trials),
            math.sqrt(p2 * (1 - p2) / self.trials),
        )

    @property
    def rule_of_three(self) -> float:
        """95% upper bound on p for a point with no failures"""
        return 3.0 / self.trials


@dataclass(frozen=True)
class SlopeFit:
    """Fitted diversity gain of one message"""

    message: int
    d_hat: float
    stderr: float
    intercept: float
    points_used: int


def scaled_rates(r: MultiplexingPair, snr: SnrPoint) -> RateAssignment:
    """R_i = r_i log2(snr)"""
    if snr.linear <= 1.0:
        raise DomainError("multiplexing-scaled rates need snr > 1")
    log_snr = math.log2(snr.linear)
    return RateAssignment(r.r1 * log_snr, r.r2 * log_snr)


def chunk_stream(seed: int, stream_key: int, chunk: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(stream_key, chunk)))


def _count_chunk(
    task: tuple[Protocol, AntennaConfig, SnrPoint, RateAssignment, int, int, int, int],
) -> tuple[int, int]:
    protocol, config, snr, rates, seed, stream_key, chunk, size = task
    batch = sample_batch(config, chunk_stream(seed, stream_key, chunk), size)
    outage = protocol.outage_batch(batch, snr, rates)
    counts = outage.sum(axis=0)
    return int(counts[0]), int(counts[1])


def _resolve(protocol: Union[Protocol, ProtocolKind, str]) -> Protocol:
    if isinstance(protocol, Protocol):
        return protocol
    return make_protocol(protocol)


def estimate_outage(
    protocol: Union[Protocol, ProtocolKind, str],
    config: AntennaConfig,
    r: MultiplexingPair,
    snr: SnrPoint,
    plan: TrialPlan,
    stream_key: int = 0,
) -> OutageEstimate:
    """Empirical outage probability of both messages at one SNR point"""
    proto = _resolve(protocol)
    if proto.one_way and r.r2 > 0:
        raise ConfigError(f"{proto.name} carries only message 1, but r2 = {r.r2}")
    r.check(config)
    rates = scaled_rates(r, snr)

    tasks = []
    remaining = plan.trials_per_point
    chunk = 0
    while remaining > 0:
        size = min(plan.chunk_trials, remaining)
        tasks.append((proto, config, snr, rates, plan.seed, stream_key, chunk, size))
        remaining -= size
        chunk += 1

    if plan.workers == 1 or len(tasks) == 1:
        counts = list(map(_count_chunk, tasks))
    else:
        with ProcessPoolExecutor(max_workers=min(plan.workers, len(tasks))) as pool:
            counts = list(pool.map(_count_chunk, tasks))

    fail1 = sum(c[0] for c in counts)
    fail2 = sum(c[1] for c in counts)
    logger.debug(
        "%s %s at %.2f dB: %d chunks, failures (%d, %d) of %d",
        proto.name, config, snr.db, len(tasks), fail1, fail2, plan.trials_per_point,
    )
    return OutageEstimate(snr, (fail1, fail2), plan.trials_per_point)


def fit_diversity(
    estimates: Sequence[OutageEstimate], message: int = 1, min_failures: int = MIN_FAILURES
) -> SlopeFit:
    """Least-squares slope of -log10(p_hat) against log10(snr) for one message

    Points with fewer than `min_failures` failures are left out of the fit.
    """
    if message not in (1, 2):
        raise DomainError(f"message must be 1 or 2, got {message}")
    idx = message - 1
    xs, ys = [], []
    for est in estimates:
        if est.failures[idx] < min_failures:
            if est.failures[idx] == 0:
                logger.warning(
                    "message %d has no failures at %.2f dB (p < %.3g)",
                    message, est.snr.db, est.rule_of_three,
                )
            continue
        xs.append(math.log10(est.snr.linear))
        ys.append(-math.log10(est.p_hat[idx]))

    if len(xs) < 2:
        raise InsufficientDataError(
            f"message {message}: {len(xs)} usable points, need 2 with >= {min_failures} failures"
        )
    fit = linregress(xs, ys)
    return SlopeFit(message, float(fit.slope), float(fit.stderr), float(fit.intercept), len(xs))


def simulate_curve(
    protocol: Union[Protocol, ProtocolKind, str],
    config: AntennaConfig,
    r: MultiplexingPair,
    grid: SnrGrid,
    plan: TrialPlan,
    progress: Optional[bool] = None,
) -> list[OutageEstimate]:
    """Estimate every point of an SNR grid, each with its own stream key"""
    proto = _resolve(protocol)
    points = grid.points()
    estimates = []
    # disable=None lets tqdm switch itself off when stderr is not a terminal
    bar = tqdm(
        points,
        desc=f"{proto.name} {config}",
        disable=None if progress is None else not progress,
    )
    for key, snr in enumerate(bar):
        est = estimate_outage(proto, config, r, snr, plan, stream_key=key)
        logger.info(
            "%.2f dB: p_hat = (%.3g, %.3g) over %d trials",
            snr.db, est.p_hat[0], est.p_hat[1], est.trials,
        )
        estimates.append(est)
    return estimates


def fit_messages(
    estimates: Sequence[OutageEstimate], messages: Sequence[int] = (1, 2)
) -> dict[int, Optional[SlopeFit]]:
    """Slope fits per message, None where there is not enough data"""
    fits: dict[int, Optional[SlopeFit]] = {}
    for message in messages:
        try:
            fits[message] = fit_diversity(estimates, message)
        except InsufficientDataError as err:
            logger.warning("%s", err)
            fits[message] = None
    return fits


def default_workers() -> int:
    return os.cpu_count() or 1
