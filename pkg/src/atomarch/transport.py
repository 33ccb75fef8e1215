"""Minimal-jerk atom transport: move time versus motional heating."""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import constants as _c

from atomarch.catalog import SpeciesParams, species_lookup
from atomarch.errors import DomainError
from atomarch.units import Dimension, UnitValue, meters, require, seconds

# 2^(1/2) 15^(1/3), prefactor of the minimal-jerk time
_MJ_PREFACTOR = math.sqrt(2.0) * 15.0 ** (1.0 / 3.0)


@dataclass(frozen=True)
class TransportSpec:
    species: SpeciesParams
    trap_frequency: UnitValue
    heating_budget: float = 0.1

    def __post_init__(self):
        if isinstance(self.species, str):
            object.__setattr__(self, "species", species_lookup(self.species))
        omega = require(self.trap_frequency, Dimension.ANGULAR_FREQUENCY, "trap_frequency")
        if omega.magnitude <= 0:
            raise DomainError("trap frequency must be positive")
        object.__setattr__(self, "trap_frequency", omega)
        if not self.heating_budget > 0:
            raise DomainError("heating budget must be positive")

    @property
    def omega0(self) -> float:
        return self.trap_frequency.magnitude


def _positive(value, dimension, name) -> float:
    value = require(value, dimension, name)
    if value.magnitude <= 0:
        raise DomainError(f"{name} must be positive")
    return value.magnitude


def harmonic_length(spec: TransportSpec) -> UnitValue:
    """Oscillator length sqrt(hbar / (2 m omega0))."""
    m = spec.species.mass.magnitude
    return meters(math.sqrt(_c.hbar / (2.0 * m * spec.omega0)))


def minimal_jerk_time(spec: TransportSpec, distance, delta_n: float) -> UnitValue:
    """Time to move ``distance`` while adding ``delta_n`` motional quanta."""
    R = _positive(distance, Dimension.LENGTH, "distance")
    if not delta_n > 0:
        raise DomainError(f"delta_n must be positive, got {delta_n}")
    x_ho = harmonic_length(spec).magnitude
    t = _MJ_PREFACTOR * R ** (1 / 3) / (delta_n ** (1 / 6) * x_ho ** (1 / 3) * spec.omega0)
    return seconds(t)


def heating_for_time(spec: TransportSpec, distance, duration) -> float:
    """Quanta added by a minimal-jerk move of ``distance`` lasting ``duration``."""
    R = _positive(distance, Dimension.LENGTH, "distance")
    t = _positive(duration, Dimension.TIME, "duration")
    x_ho = harmonic_length(spec).magnitude
    return (_MJ_PREFACTOR * R ** (1 / 3) / (x_ho ** (1 / 3) * spec.omega0 * t)) ** 6


def temperature_from_quanta(mean_n: float, trap_frequency) -> UnitValue:
    """1D temperature of a thermal oscillator with mean occupation ``mean_n``."""
    if not mean_n > 0:
        raise DomainError(f"mean occupation must be positive, got {mean_n}")
    omega = _positive(trap_frequency, Dimension.ANGULAR_FREQUENCY, "trap_frequency")
    # log1p keeps precision in the classical limit of large mean_n
    return UnitValue(_c.hbar * omega / (_c.k * math.log1p(1.0 / mean_n)), Dimension.TEMPERATURE)
