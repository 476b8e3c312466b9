"""Dynamic compress-and-forward over the half-duplex two-hop channel

Only user 1 transmits. The relay listens until it could have decoded a
message one bit larger than the real one, t = (1 + R1) / C1, then spends the
rest of the block forwarding its quantized observation to user 2.
"""

from __future__ import annotations
import logging
from typing import Optional

import numpy as np

from . import Events, OutageVerdict, Protocol, RateAssignment
from ..channel import (
    ChannelRealization,
    RealizationBatch,
    SnrPoint,
    batch_capacity,
    batch_half_power_capacity,
    capacity,
)
from ..errors import DomainError

logger = logging.getLogger(__name__)


def listen_fraction_from(c1: np.ndarray, rate1: float) -> np.ndarray:
    """(1 + R1) / C1 elementwise, +inf where C1 is zero"""
    c1 = np.asarray(c1, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(c1 > 0, (1.0 + rate1) / np.where(c1 > 0, c1, 1.0), np.inf)


def dcf_rate_threshold(c1: float, c4: float) -> float:
    """Rate above which the forwarding hop fails, solved for R1

    R1 > (1 - (1 + R1)/C1) C4 - (1 + R1)/C1 rearranges, for C1 > 0, to
    R1 > (C1 C4 - C4 - 1) / (1 + C1 + C4).
    """
    return (c1 * c4 - c4 - 1.0) / (1.0 + c1 + c4)


class DynamicCompressForward(Protocol):
    """Half-duplex CF with a listening time chosen per realization

    With `listen_fraction` set, the relay always listens for that fraction of
    the block instead; this is the fixed time-allocation baseline.
    """

    name = "DCF"
    one_way = True

    def __init__(self, listen_fraction: Optional[float] = None):
        if listen_fraction is not None and not (0.0 < listen_fraction < 1.0):
            raise DomainError(f"listen fraction must be in (0, 1), got {listen_fraction}")
        self.listen_fraction = listen_fraction

    def capacities(
        self, batch: RealizationBatch, snr: SnrPoint, rates: RateAssignment
    ) -> dict[str, np.ndarray]:
        m1 = batch.h1.shape[-1]
        mr = batch.h4.shape[-1]
        c1 = batch_capacity(batch.h1, m1, snr)
        if self.listen_fraction is None:
            listen = listen_fraction_from(c1, rates.rate1)
        else:
            listen = np.full(c1.shape, self.listen_fraction)
        return {
            "C1": c1,
            "C4": batch_capacity(batch.h4, mr, snr),
            "C1_half": batch_half_power_capacity(batch.h1, m1, snr),
            "listen_fraction": listen,
        }

    def events(
        self, caps: dict[str, np.ndarray], rates: RateAssignment
    ) -> tuple[Events, Events]:
        t = caps["listen_fraction"]
        finite = np.isfinite(t)
        t_safe = np.where(finite, t, 1.0)
        msg1 = {
            "relay_to_user2": finite & (rates.rate1 > (1.0 - t_safe) * caps["C4"] - t_safe),
            "user1_to_relay": finite & (rates.rate1 > t_safe * caps["C1_half"]),
        }
        if self.listen_fraction is None:
            msg1 = dict(listen_window=~finite | (t > 1.0), **msg1)
        msg2 = {"inactive": np.zeros(t.shape, dtype=bool)}
        return msg1, msg2

    def verdict(
        self, real: ChannelRealization, snr: SnrPoint, rates: RateAssignment
    ) -> OutageVerdict:
        out = super().verdict(real, snr, rates)
        if out.detail is not None:
            caps = out.detail.capacities
            gap = caps["C1"] - caps["C1_half"]
            if caps["C1"] > 0 and not (0.0 < gap <= 1.0):
                logger.debug(
                    "C1 - C1_half = %g bits falls outside (0, 1] for this realization", gap
                )
        return out


def dcf_listen_fraction(real: ChannelRealization, snr: SnrPoint, rate1: float) -> float:
    """Fraction of the block the relay listens for; +inf when C1 is zero"""
    c1 = capacity(real.h1, real.h1.cols, snr)
    return float(listen_fraction_from(c1, float(rate1)))


def dcf_outage(
    real: ChannelRealization,
    snr: SnrPoint,
    rate1: float,
    listen_fraction: Optional[float] = None,
) -> OutageVerdict:
    """Outage verdict of message 1 under dynamic (or fixed-time) CF"""
    return DynamicCompressForward(listen_fraction).verdict(real, snr, RateAssignment(rate1))
