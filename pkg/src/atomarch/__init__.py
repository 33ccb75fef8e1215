"""Resource estimates for neutral-atom quantum computer architectures.

Rydberg gate error floors, surface-code sizing, logical-gate latency for
long-range, transport and lattice-surgery connectivity, and the NISQ
classical-simulation cost landscape.
"""

from atomarch.errors import (
    ConfigError,
    DimensionError,
    DomainError,
    ModelError,
    ParseError,
    UnknownEntryError,
)
from atomarch.units import Dimension, UnitValue, format_quantity, parse_quantity

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "Dimension",
    "DimensionError",
    "DomainError",
    "ModelError",
    "ParseError",
    "UnitValue",
    "UnknownEntryError",
    "format_quantity",
    "parse_quantity",
]
