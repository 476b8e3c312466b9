from __future__ import annotations
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

import numpy as np

from ..channel import ChannelRealization, RealizationBatch, SnrPoint
from ..errors import ConfigError, DomainError, InputError

# Named outage events of one message, each a boolean array over the batch
Events = dict[str, np.ndarray]


@dataclass(frozen=True)
class RateAssignment:
    """Attempted rates in bits per channel use"""

    rate1: float
    rate2: float = 0.0

    def __post_init__(self):
        for name in ("rate1", "rate2"):
            val = float(getattr(self, name))
            if not math.isfinite(val) or val < 0:
                raise DomainError(f"{name} must be finite and nonnegative, got {val}")
            object.__setattr__(self, name, val)


@dataclass(frozen=True)
class OutageDetail:
    """Which inequalities fired, and the capacities they were evaluated with"""

    fired1: tuple[str, ...]
    fired2: tuple[str, ...]
    capacities: dict[str, float] = field(default_factory=dict)
    listen_fraction: Optional[float] = None


@dataclass(frozen=True)
class OutageVerdict:
    message1_in_outage: bool
    message2_in_outage: bool
    detail: Optional[OutageDetail] = None

    def __post_init__(self):
        if self.detail is None:
            return
        if bool(self.detail.fired1) != self.message1_in_outage:
            raise InputError("detail disagrees with the message 1 verdict")
        if bool(self.detail.fired2) != self.message2_in_outage:
            raise InputError("detail disagrees with the message 2 verdict")


def _any(events: Events, count: int) -> np.ndarray:
    out = np.zeros(count, dtype=bool)
    for arr in events.values():
        out |= np.broadcast_to(arr, (count,))
    return out


class Protocol:
    """A relaying protocol reduced to its per-realization outage events

    Subclasses provide `capacities` (the link quantities the protocol needs,
    as arrays over a batch) and `events` (named outage inequalities per
    message). Verdicts and batch counts are both derived from those two.
    """

    name: str = ""
    # only message 1 is active
    one_way: bool = False

    def capacities(
        self, batch: RealizationBatch, snr: SnrPoint, rates: RateAssignment
    ) -> dict[str, np.ndarray]:
        raise NotImplementedError("A Protocol must implement capacities")

    def events(
        self, caps: dict[str, np.ndarray], rates: RateAssignment
    ) -> tuple[Events, Events]:
        raise NotImplementedError("A Protocol must implement events")

    def check_rates(self, rates: RateAssignment):
        if self.one_way and rates.rate2 > 0:
            raise ConfigError(f"{self.name} carries only message 1, but rate2 = {rates.rate2}")

    def outage_batch(
        self, batch: RealizationBatch, snr: SnrPoint, rates: RateAssignment
    ) -> np.ndarray:
        """(n, 2) boolean array: column i is True where message i+1 is in outage"""
        self.check_rates(rates)
        caps = self.capacities(batch, snr, rates)
        ev1, ev2 = self.events(caps, rates)
        count = len(batch)
        return np.stack([_any(ev1, count), _any(ev2, count)], axis=1)

    def verdict(
        self, real: ChannelRealization, snr: SnrPoint, rates: RateAssignment
    ) -> OutageVerdict:
        self.check_rates(rates)
        batch = RealizationBatch.from_realization(real)
        caps = self.capacities(batch, snr, rates)
        ev1, ev2 = self.events(caps, rates)
        fired1 = tuple(name for name, arr in ev1.items() if np.ravel(arr)[0])
        fired2 = tuple(name for name, arr in ev2.items() if np.ravel(arr)[0])
        values = {k: float(np.ravel(v)[0]) for k, v in caps.items() if k != "listen_fraction"}
        listen = caps.get("listen_fraction")
        detail = OutageDetail(
            fired1,
            fired2,
            values,
            None if listen is None else float(np.ravel(listen)[0]),
        )
        return OutageVerdict(bool(fired1), bool(fired2), detail)


class ProtocolKind(str, Enum):
    CF = "CF"
    DF = "DF"
    DCF = "DCF"
    DDF = "DDF"


def make_protocol(
    kind: Union[ProtocolKind, str], listen_fraction: Optional[float] = None
) -> Protocol:
    """Build a protocol by name. `listen_fraction` fixes the DCF listening time"""
    from .compress_forward import CompressForward
    from .decode_forward import DecodeForward
    from .dynamic_compress_forward import DynamicCompressForward
    from .dynamic_decode_forward import DynamicDecodeForward

    try:
        kind = ProtocolKind(kind)
    except ValueError:
        raise ConfigError(f"unknown protocol {kind!r}", key="protocol.name") from None

    if listen_fraction is not None and kind is not ProtocolKind.DCF:
        raise ConfigError(
            f"a fixed listen fraction only applies to DCF, not {kind.value}",
            key="protocol.listen_fraction",
        )
    if kind is ProtocolKind.CF:
        return CompressForward()
    if kind is ProtocolKind.DF:
        return DecodeForward()
    if kind is ProtocolKind.DDF:
        return DynamicDecodeForward()
    return DynamicCompressForward(listen_fraction)


__all__ = [
    "Events",
    "OutageDetail",
    "OutageVerdict",
    "Protocol",
    "ProtocolKind",
    "RateAssignment",
    "make_protocol",
]
