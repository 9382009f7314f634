# Configuration: search bounds, logging level, worker count
#
# Precedence: CLI flags > ECDLAB_BOUNDS environment variable > defaults.

import logging
from dataclasses import dataclass, replace
from typing import Dict, Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from .errors import PreconditionError

logger = logging.getLogger(__name__)

BOUND_KEYS = ("enum", "search", "family")


@dataclass(frozen=True)
class Bounds:
    """Vertex-count limits for the exact searches"""
    enum: int = 24
    search: int = 64
    family: int = 12

    def __post_init__(self):
        for key in BOUND_KEYS:
            value = getattr(self, key)
            if value < 1:
                raise PreconditionError(f"bound '{key}' must be >= 1, got {value}")

    def merged(self, overrides: Dict[str, Optional[int]]) -> "Bounds":
        """Return a copy with every non-None override applied"""
        changes = {k: v for k, v in overrides.items() if v is not None}
        return replace(self, **changes) if changes else self


def parse_bounds_spec(spec: str, base: Optional[Bounds] = None) -> Bounds:
    """
    Parse "enum=24,search=64,family=12" (any subset of keys)

    Args:
        spec: Comma separated key=value list
        base: Bounds the parsed values are applied on top of

    Returns:
        The merged Bounds
    """
    base = base or Bounds()
    overrides: Dict[str, Optional[int]] = {}
    for item in spec.split(","):
        item = item.strip()
        if not item:
            continue
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in BOUND_KEYS:
            raise PreconditionError(f"invalid bounds entry '{item}' (expected one of {', '.join(BOUND_KEYS)})")
        try:
            overrides[key] = int(value)
        except ValueError:
            raise PreconditionError(f"bound '{key}' is not an integer: '{value.strip()}'") from None
    return base.merged(overrides)


class Settings(BaseSettings):
    """Environment-backed settings"""

    model_config = SettingsConfigDict(extra="ignore", populate_by_name=True)

    bounds_spec: Optional[str] = Field(default=None, validation_alias="ECDLAB_BOUNDS")
    log_level: str = Field(default="WARNING", validation_alias="LOG_LEVEL")
    workers: int = Field(default=1, ge=1, validation_alias="ECDLAB_WORKERS")

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        level = value.upper()
        if not isinstance(logging.getLevelName(level), int):
            raise ValueError(f"unknown log level '{value}'")
        return level

    @property
    def bounds(self) -> Bounds:
        if not self.bounds_spec:
            return Bounds()
        return parse_bounds_spec(self.bounds_spec)

    def resolve_bounds(self, enum: Optional[int] = None, search: Optional[int] = None,
                       family: Optional[int] = None) -> Bounds:
        """Apply CLI flag values over the environment/default bounds"""
        bounds = self.bounds.merged({"enum": enum, "search": search, "family": family})
        logger.debug(f"Resolved bounds: {bounds}")
        return bounds
