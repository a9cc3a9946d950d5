"""Size caps for the exhaustive computations."""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace
from typing import Mapping, Optional

from lmodule_engine.errors import CapExceededError, ConfigError

CAPS_ENV_VAR = "LML_CAPS"


@dataclass(frozen=True)
class Caps:
    """Upper bounds on enumeration sizes.

    Defaults are sized so the full test suite stays within minutes on
    rank <= 3 types.
    """

    weyl: int = 100_000
    rank: int = 6
    oracle_rank: int = 3
    irrep_dim: int = 2000
    ce_dim: int = 200_000

    def check(self, name: str, size: int, what: Optional[str] = None) -> None:
        """Raise CapExceededError if ``size`` is above the cap ``name``."""
        cap = getattr(self, name)
        if size > cap:
            raise CapExceededError(what or name, size, cap)

    def with_overrides(self, overrides: Mapping[str, object]) -> "Caps":
        """Return a copy with the given caps replaced."""
        known = {f.name for f in fields(self)}
        values = {}
        for name, raw in overrides.items():
            if name not in known:
                raise ConfigError(
                    f"unknown cap {name!r}; expected one of {sorted(known)}"
                )
            try:
                value = int(raw)
            except (TypeError, ValueError):
                raise ConfigError(f"cap {name!r} must be an integer, got {raw!r}")
            if value < 0:
                raise ConfigError(f"cap {name!r} must be nonnegative")
            values[name] = value
        return replace(self, **values)

    @classmethod
    def from_env(cls, environ: Optional[Mapping[str, str]] = None) -> "Caps":
        """Defaults, overridden by ``LML_CAPS="weyl=5000,irrep_dim=500"``."""
        environ = os.environ if environ is None else environ
        raw = environ.get(CAPS_ENV_VAR, "").strip()
        if not raw:
            return cls()
        overrides = {}
        for item in raw.split(","):
            item = item.strip()
            if not item:
                continue
            name, sep, value = item.partition("=")
            if not sep:
                raise ConfigError(f"{CAPS_ENV_VAR} entry {item!r} is not name=value")
            overrides[name.strip()] = value.strip()
        return cls().with_overrides(overrides)


DEFAULT_CAPS = Caps()
