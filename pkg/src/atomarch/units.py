"""Physical quantities and the small unit grammar used by scenarios and the CLI.

A quantity string is ``[2pi x] NUMBER UNIT``::

    >>> parse_quantity("198 us")
    UnitValue(magnitude=0.000198, dimension=<Dimension.TIME: 'time'>)
    >>> parse_quantity("2pi x 215 MHz").dimension
    <Dimension.ANGULAR_FREQUENCY: 'angular-frequency'>

Units are case-sensitive and there are no compound units. The ``2pi x``
prefix is only legal in front of a frequency unit and turns an ordinary
frequency into an angular one. A bare frequency stays an ordinary frequency;
model functions convert it to rad/s on entry (see :func:`as_angular`), so
all internal arithmetic is done with angular frequencies.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass

from scipy import constants as _c

from atomarch.errors import DimensionError, ParseError

TWO_PI = 2.0 * math.pi
ATOMIC_MASS_UNIT = _c.physical_constants["atomic mass constant"][0]


class Dimension(enum.Enum):
    TIME = "time"
    LENGTH = "length"
    MASS = "mass"
    ANGULAR_FREQUENCY = "angular-frequency"
    ORDINARY_FREQUENCY = "ordinary-frequency"
    TEMPERATURE = "temperature"
    ENERGY = "energy"
    DIMENSIONLESS = "dimensionless"


# unit symbol -> (scale to SI, dimension)
UNITS: dict[str, tuple[float, Dimension]] = {
    "s": (1.0, Dimension.TIME),
    "ms": (1e-3, Dimension.TIME),
    "us": (1e-6, Dimension.TIME),
    "ns": (1e-9, Dimension.TIME),
    "m": (1.0, Dimension.LENGTH),
    "mm": (1e-3, Dimension.LENGTH),
    "um": (1e-6, Dimension.LENGTH),
    "nm": (1e-9, Dimension.LENGTH),
    "kg": (1.0, Dimension.MASS),
    "u": (ATOMIC_MASS_UNIT, Dimension.MASS),
    "Hz": (1.0, Dimension.ORDINARY_FREQUENCY),
    "kHz": (1e3, Dimension.ORDINARY_FREQUENCY),
    "MHz": (1e6, Dimension.ORDINARY_FREQUENCY),
    "GHz": (1e9, Dimension.ORDINARY_FREQUENCY),
    "K": (1.0, Dimension.TEMPERATURE),
    "uK": (1e-6, Dimension.TEMPERATURE),
    "J": (1.0, Dimension.ENERGY),
}

_BASE_SYMBOL = {
    Dimension.TIME: "s",
    Dimension.LENGTH: "m",
    Dimension.MASS: "kg",
    Dimension.ORDINARY_FREQUENCY: "Hz",
    Dimension.TEMPERATURE: "K",
    Dimension.ENERGY: "J",
}

# console-friendly units, largest first
_HUMAN_UNITS = {
    Dimension.TIME: ["s", "ms", "us", "ns"],
    Dimension.LENGTH: ["m", "mm", "um", "nm"],
    Dimension.ORDINARY_FREQUENCY: ["GHz", "MHz", "kHz", "Hz"],
    Dimension.TEMPERATURE: ["K", "uK"],
}

_PREFIX_RE = re.compile(r"2pi\s*x\s*")
_NUMBER_RE = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")


@dataclass(frozen=True)
class UnitValue:
    """An SI magnitude tagged with one of the supported dimensions."""

    magnitude: float
    dimension: Dimension

    def __post_init__(self):
        if not isinstance(self.dimension, Dimension):
            raise DimensionError(f"unsupported dimension {self.dimension!r}")
        mag = float(self.magnitude)
        if not math.isfinite(mag):
            raise ValueError(f"magnitude must be finite, got {self.magnitude!r}")
        object.__setattr__(self, "magnitude", mag)

    def to(self, unit: str) -> float:
        """Magnitude expressed in ``unit`` (a grammar symbol, or ``rad/s``)."""
        if unit == "rad/s":
            return as_angular(self).magnitude
        scale, dim = _unit(unit)
        if dim is not self.dimension:
            if {dim, self.dimension} == {
                Dimension.ORDINARY_FREQUENCY,
                Dimension.ANGULAR_FREQUENCY,
            }:
                return as_ordinary(self).magnitude / scale
            raise DimensionError(
                f"cannot express {self.dimension.value} in {unit} ({dim.value})"
            )
        return self.magnitude / scale

    def _same(self, other, op):
        if not isinstance(other, UnitValue):
            raise DimensionError(f"cannot {op} {self.dimension.value} and a bare number")
        if other.dimension is not self.dimension:
            raise DimensionError(
                f"cannot {op} {self.dimension.value} and {other.dimension.value}"
            )
        return other.magnitude

    def __add__(self, other):
        return UnitValue(self.magnitude + self._same(other, "add"), self.dimension)

    def __sub__(self, other):
        return UnitValue(self.magnitude - self._same(other, "subtract"), self.dimension)

    def __neg__(self):
        return UnitValue(-self.magnitude, self.dimension)

    def __abs__(self):
        return UnitValue(abs(self.magnitude), self.dimension)

    def __mul__(self, other):
        if isinstance(other, UnitValue):
            dims = {self.dimension, other.dimension}
            product = self.magnitude * other.magnitude
            if other.dimension is Dimension.DIMENSIONLESS:
                return UnitValue(product, self.dimension)
            if self.dimension is Dimension.DIMENSIONLESS:
                return UnitValue(product, other.dimension)
            if dims in (
                {Dimension.TIME, Dimension.ANGULAR_FREQUENCY},
                {Dimension.TIME, Dimension.ORDINARY_FREQUENCY},
            ):
                return product
            raise DimensionError(
                f"product of {self.dimension.value} and {other.dimension.value} "
                "is not a supported dimension"
            )
        if isinstance(other, (int, float)) and not isinstance(other, bool):
            return UnitValue(self.magnitude * other, self.dimension)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, UnitValue):
            if other.dimension is self.dimension:
                return self.magnitude / other.magnitude
            if other.dimension is Dimension.DIMENSIONLESS:
                return UnitValue(self.magnitude / other.magnitude, self.dimension)
            raise DimensionError(
                f"quotient of {self.dimension.value} and {other.dimension.value} "
                "is not a supported dimension"
            )
        if isinstance(other, (int, float)) and not isinstance(other, bool):
            return UnitValue(self.magnitude / other, self.dimension)
        return NotImplemented

    def __lt__(self, other):
        return self.magnitude < self._same(other, "compare")

    def __le__(self, other):
        return self.magnitude <= self._same(other, "compare")

    def __gt__(self, other):
        return self.magnitude > self._same(other, "compare")

    def __ge__(self, other):
        return self.magnitude >= self._same(other, "compare")

    def __str__(self):
        return format_human(self)


def _unit(symbol: str) -> tuple[float, Dimension]:
    try:
        return UNITS[symbol]
    except KeyError:
        raise ParseError(
            f"unknown unit {symbol!r} (known: {', '.join(UNITS)})"
        ) from None


def quantity(magnitude: float, unit: str) -> UnitValue:
    """Build a UnitValue from a magnitude in a grammar unit, e.g. ``quantity(198, "us")``."""
    if unit == "rad/s":
        return UnitValue(magnitude, Dimension.ANGULAR_FREQUENCY)
    scale, dim = _unit(unit)
    return UnitValue(magnitude * scale, dim)


def parse_quantity(text: str) -> UnitValue:
    """Parse ``[2pi x] NUMBER UNIT`` into base-SI units.

    Raises ParseError naming the offending token on a missing or unknown
    unit, a malformed number, or a ``2pi x`` prefix on a non-frequency unit.
    """
    if not isinstance(text, str):
        raise ParseError(f"expected a quantity string, got {text!r}")
    rest = text.strip()
    angular = False
    prefix = _PREFIX_RE.match(rest)
    if prefix:
        angular = True
        rest = rest[prefix.end():]
    number = _NUMBER_RE.match(rest)
    if not number:
        token = rest.split()[0] if rest.split() else rest
        raise ParseError(f"expected a number in {text!r}, found {token!r}")
    unit = rest[number.end():].strip()
    if not unit:
        raise ParseError(f"missing unit in {text!r} after {number.group()!r}")
    scale, dim = _unit(unit)
    value = float(number.group()) * scale
    if not math.isfinite(value):
        raise ParseError(f"number {number.group()!r} in {text!r} is not finite")
    if angular:
        if dim is not Dimension.ORDINARY_FREQUENCY:
            raise ParseError(
                f"'2pi x' prefix in {text!r} needs a frequency unit, got {unit!r}"
            )
        return UnitValue(TWO_PI * value, Dimension.ANGULAR_FREQUENCY)
    return UnitValue(value, dim)


def format_quantity(value: UnitValue) -> str:
    """Inverse of :func:`parse_quantity`, in base units with shortest round-trip digits.

    Angular frequencies come out as ``2pi x <f> Hz``. Dimensionless values
    have no unit in the grammar and are rendered as a bare number.
    """
    if value.dimension is Dimension.ANGULAR_FREQUENCY:
        return f"2pi x {value.magnitude / TWO_PI!r} Hz"
    if value.dimension is Dimension.DIMENSIONLESS:
        return repr(value.magnitude)
    return f"{value.magnitude!r} {_BASE_SYMBOL[value.dimension]}"


def format_human(value: UnitValue, digits: int = 4) -> str:
    """Short display string with a readable prefix, e.g. ``272.4 us``."""
    dim = value.dimension
    if dim is Dimension.ANGULAR_FREQUENCY:
        return "2pi x " + format_human(as_ordinary(value), digits)
    if dim is Dimension.DIMENSIONLESS:
        return f"{value.magnitude:.{digits}g}"
    if dim not in _HUMAN_UNITS:
        return f"{value.magnitude:.{digits}g} {_BASE_SYMBOL[dim]}"
    for unit in _HUMAN_UNITS[dim]:
        scaled = value.to(unit)
        if abs(scaled) >= 1.0:
            break
    return f"{scaled:.{digits}g} {unit}"


def as_angular(value: UnitValue) -> UnitValue:
    if value.dimension is Dimension.ANGULAR_FREQUENCY:
        return value
    if value.dimension is Dimension.ORDINARY_FREQUENCY:
        return UnitValue(TWO_PI * value.magnitude, Dimension.ANGULAR_FREQUENCY)
    raise DimensionError(f"expected a frequency, got {value.dimension.value}")


def as_ordinary(value: UnitValue) -> UnitValue:
    if value.dimension is Dimension.ORDINARY_FREQUENCY:
        return value
    if value.dimension is Dimension.ANGULAR_FREQUENCY:
        return UnitValue(value.magnitude / TWO_PI, Dimension.ORDINARY_FREQUENCY)
    raise DimensionError(f"expected a frequency, got {value.dimension.value}")


def require(value, dimension: Dimension, name: str) -> UnitValue:
    """Coerce ``value`` (UnitValue or quantity string) and check its dimension.

    Angular and ordinary frequencies are interchangeable here; the result is
    always angular when ``dimension`` is ANGULAR_FREQUENCY.
    """
    if isinstance(value, str):
        value = parse_quantity(value)
    if not isinstance(value, UnitValue):
        raise DimensionError(
            f"{name} must be a {dimension.value} quantity, got bare {value!r}"
        )
    if dimension is Dimension.ANGULAR_FREQUENCY and value.dimension in (
        Dimension.ANGULAR_FREQUENCY,
        Dimension.ORDINARY_FREQUENCY,
    ):
        return as_angular(value)
    if value.dimension is not dimension:
        raise DimensionError(
            f"{name} must be {dimension.value}, got {value.dimension.value}"
        )
    return value


def seconds(x: float) -> UnitValue:
    return UnitValue(x, Dimension.TIME)


def meters(x: float) -> UnitValue:
    return UnitValue(x, Dimension.LENGTH)


def rad_per_s(x: float) -> UnitValue:
    return UnitValue(x, Dimension.ANGULAR_FREQUENCY)
