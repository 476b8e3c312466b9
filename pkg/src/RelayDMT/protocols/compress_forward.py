from __future__ import annotations
import numpy as np

from . import Events, OutageVerdict, Protocol, RateAssignment
from ..utils import positive_part
from ..channel import (
    ChannelRealization,
    RealizationBatch,
    SnrPoint,
    batch_capacity,
    batch_half_power_capacity,
)


class CompressForward(Protocol):
    """Full-duplex compress-and-forward over the separated two-way relay channel

    The relay quantizes its observation with unit quantization noise and
    broadcasts the index. Each user decodes the other's message using its own
    transmission as side information, so message 1 only sees h1 and h4.
    """

    name = "CF"

    def capacities(
        self, batch: RealizationBatch, snr: SnrPoint, rates: RateAssignment
    ) -> dict[str, np.ndarray]:
        m1 = batch.h1.shape[-1]
        m2 = batch.h2.shape[-1]
        mr = batch.h3.shape[-1]
        return {
            "C3": batch_capacity(batch.h3, mr, snr),
            "C4": batch_capacity(batch.h4, mr, snr),
            "C1_half": batch_half_power_capacity(batch.h1, m1, snr),
            "C2_half": batch_half_power_capacity(batch.h2, m2, snr),
        }

    def events(
        self, caps: dict[str, np.ndarray], rates: RateAssignment
    ) -> tuple[Events, Events]:
        msg1 = {
            "relay_to_user2": rates.rate1 > positive_part(caps["C4"] - 1.0),
            "user1_to_relay": rates.rate1 > caps["C1_half"],
        }
        msg2 = {
            "relay_to_user1": rates.rate2 > positive_part(caps["C3"] - 1.0),
            "user2_to_relay": rates.rate2 > caps["C2_half"],
        }
        return msg1, msg2


def cf_outage(
    real: ChannelRealization, snr: SnrPoint, rates: RateAssignment
) -> OutageVerdict:
    """Outage verdict of both messages under compress-and-forward"""
    return CompressForward().verdict(real, snr, rates)
