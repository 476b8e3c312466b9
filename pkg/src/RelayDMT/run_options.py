from __future__ import annotations
from typing import Any, Optional

from .errors import ConfigError


class OptionSection:
    """Read-tracking view over one section of a config document

    Every key read through `[]` or `get` is remembered, so `finish` can reject
    the keys nobody asked for, naming them by their dotted path.
    """

    def __init__(self, opts: Optional[dict[str, Any]] = None, path: str = ""):
        if opts is None:
            opts = {}
        if not isinstance(opts, dict):
            raise ConfigError(f"expected an object, got {type(opts).__name__}", key=path or None)
        self._options: dict[str, Any] = opts
        self._path = path
        self._used: set[str] = set()

    def keypath(self, key: str) -> str:
        return f"{self._path}.{key}" if self._path else key

    def __getitem__(self, key: str):
        self._used.add(key)
        if key not in self._options:
            raise ConfigError("missing required key", key=self.keypath(key))
        return self._options[key]

    def __contains__(self, key: str) -> bool:
        return key in self._options

    def get(self, key, default=None) -> Any:
        self._used.add(key)
        return self._options.get(key, default)

    def keys(self):
        return self._options.keys()

    def section(self, key: str) -> OptionSection:
        """A nested section; an absent section reads as empty"""
        return OptionSection(self.get(key, {}), self.keypath(key))

    def finish(self):
        unknown = sorted(set(self._options) - self._used)
        if unknown:
            raise ConfigError("unknown key", key=self.keypath(unknown[0]))
