from __future__ import annotations
import numpy as np

from . import Events, OutageVerdict, Protocol, RateAssignment
from ..channel import (
    ChannelRealization,
    RealizationBatch,
    SnrPoint,
    batch_capacity,
    batch_mac_sum_capacity,
)


class DecodeForward(Protocol):
    """Full-duplex decode-and-forward over the separated two-way relay channel

    The relay decodes both messages from a multiple access phase, then
    broadcasts them; each user strips its own message as side information.
    A multiple access failure leaves the relay with nothing to forward, so it
    puts both messages in outage.
    """

    name = "DF"

    def capacities(
        self, batch: RealizationBatch, snr: SnrPoint, rates: RateAssignment
    ) -> dict[str, np.ndarray]:
        m1 = batch.h1.shape[-1]
        m2 = batch.h2.shape[-1]
        mr = batch.h3.shape[-1]
        return {
            "C1": batch_capacity(batch.h1, m1, snr),
            "C2": batch_capacity(batch.h2, m2, snr),
            "C3": batch_capacity(batch.h3, mr, snr),
            "C4": batch_capacity(batch.h4, mr, snr),
            "C_sum": batch_mac_sum_capacity(batch.h1, m1, batch.h2, m2, snr),
        }

    def events(
        self, caps: dict[str, np.ndarray], rates: RateAssignment
    ) -> tuple[Events, Events]:
        mac = {
            "mac_user1": rates.rate1 > caps["C1"],
            "mac_user2": rates.rate2 > caps["C2"],
            "mac_sum": rates.rate1 + rates.rate2 > caps["C_sum"],
        }
        msg1 = dict(mac, broadcast_to_user2=rates.rate1 > caps["C4"])
        msg2 = dict(mac, broadcast_to_user1=rates.rate2 > caps["C3"])
        return msg1, msg2


def df_outage(
    real: ChannelRealization, snr: SnrPoint, rates: RateAssignment
) -> OutageVerdict:
    """Outage verdict of both messages under decode-and-forward"""
    return DecodeForward().verdict(real, snr, rates)
