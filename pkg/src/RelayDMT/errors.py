from __future__ import annotations
from typing import Optional


class DmtError(ValueError):
    """Base class for every error raised by this package"""


class DomainError(DmtError):
    """An argument lies outside the domain of a tradeoff curve or formula"""


class InputError(DmtError):
    """A channel input is malformed (non-finite entries, wrong shape)"""


class InsufficientDataError(DmtError):
    """Too few usable outage estimates to fit a slope"""


class ConfigError(DmtError):
    """An inconsistent protocol setup or an invalid run configuration

    Args:
        message: What is wrong
        key: Dotted path of the offending key, eg "plan.seed"
        line: Line number in the config document, when known
    """

    def __init__(
        self, message: str, key: Optional[str] = None, line: Optional[int] = None
    ):
        self.key = key
        self.line = line
        prefix = ""
        if line is not None:
            prefix += f"line {line}: "
        if key is not None:
            prefix += f"{key}: "
        super().__init__(prefix + message)
