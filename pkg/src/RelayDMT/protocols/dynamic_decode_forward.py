from __future__ import annotations
import numpy as np

from . import Events, OutageVerdict, Protocol, RateAssignment
from ..channel import ChannelRealization, RealizationBatch, SnrPoint, batch_capacity


class DynamicDecodeForward(Protocol):
    """Half-duplex decode-and-forward that listens until it can decode

    The relay listens for t = R1 / C1 of the block, then re-encodes the
    message for user 2 over the remaining 1 - t.
    """

    name = "DDF"
    one_way = True

    def capacities(
        self, batch: RealizationBatch, snr: SnrPoint, rates: RateAssignment
    ) -> dict[str, np.ndarray]:
        m1 = batch.h1.shape[-1]
        mr = batch.h4.shape[-1]
        c1 = batch_capacity(batch.h1, m1, snr)
        if rates.rate1 == 0:
            listen = np.zeros(c1.shape)
        else:
            with np.errstate(divide="ignore"):
                listen = np.where(c1 > 0, rates.rate1 / np.where(c1 > 0, c1, 1.0), np.inf)
        return {
            "C1": c1,
            "C4": batch_capacity(batch.h4, mr, snr),
            "listen_fraction": listen,
        }

    def events(
        self, caps: dict[str, np.ndarray], rates: RateAssignment
    ) -> tuple[Events, Events]:
        t = caps["listen_fraction"]
        finite = np.isfinite(t)
        t_safe = np.where(finite, t, 1.0)
        msg1 = {
            "listen_window": ~finite | (t > 1.0),
            "relay_to_user2": finite & (rates.rate1 > (1.0 - t_safe) * caps["C4"]),
        }
        return msg1, {"inactive": np.zeros(t.shape, dtype=bool)}


def ddf_outage(real: ChannelRealization, snr: SnrPoint, rate1: float) -> OutageVerdict:
    """Outage verdict of message 1 under dynamic decode-and-forward"""
    return DynamicDecodeForward().verdict(real, snr, RateAssignment(rate1))
