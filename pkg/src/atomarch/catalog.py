"""Built-in atomic species and Rydberg gate-protocol constants.

Each entry carries a ``source`` note so reports can say where a number
came from.
"""

from __future__ import annotations

from dataclasses import dataclass

from atomarch.errors import DomainError, UnknownEntryError
from atomarch.units import ATOMIC_MASS_UNIT, Dimension, UnitValue, require


@dataclass(frozen=True)
class SpeciesParams:
    name: str
    mass: UnitValue
    source: str = ""

    def __post_init__(self):
        mass = require(self.mass, Dimension.MASS, f"{self.name} mass")
        if mass.magnitude <= 0:
            raise DomainError(f"{self.name} mass must be positive")
        object.__setattr__(self, "mass", mass)


@dataclass(frozen=True)
class ProtocolEntry:
    """A gate protocol and its error overhead relative to the entanglement floor."""

    name: str
    overhead_ratio: float
    source: str = ""

    def __post_init__(self):
        if not self.overhead_ratio >= 1.0:
            raise DomainError(
                f"protocol {self.name!r}: overhead ratio must be >= 1, "
                f"got {self.overhead_ratio}"
            )


# standard atomic weights of the most abundant isotopes, in u
_MASS_NUMBERS = {
    "Rb": 86.909,
    "Cs": 132.905,
    "Sr": 87.906,
    "Yb": 170.936,
}

SPECIES = {
    name: SpeciesParams(
        name,
        UnitValue(amu * ATOMIC_MASS_UNIT, Dimension.MASS),
        source=f"standard atomic weight {amu} u",
    )
    for name, amu in _MASS_NUMBERS.items()
}

PROTOCOLS = {
    "dark-state": ProtocolEntry(
        "dark-state", 19.0, "two-atom dark-state gate, strong blockade (Petrosyan et al. 2017)"
    ),
    "time-optimal": ProtocolEntry(
        "time-optimal", 15.0, "time-optimal gate, strong blockade (Jandura & Pupillo 2022)"
    ),
    "weak-blockade": ProtocolEntry(
        "weak-blockade", 2.1, "modified time-optimal profile, weak blockade (Poole et al. 2025)"
    ),
    "weak-blockade-with-recoil": ProtocolEntry(
        "weak-blockade-with-recoil",
        3.0,
        "weak blockade incl. interaction dephasing and photon recoil (Poole et al. 2025)",
    ),
}


def species_lookup(name: str, extra: dict[str, SpeciesParams] | None = None) -> SpeciesParams:
    """Return the species called ``name``; ``extra`` holds user-defined species."""
    table = {**SPECIES, **(extra or {})}
    try:
        return table[name]
    except KeyError:
        raise UnknownEntryError(
            f"unknown species {name!r}; known species: {', '.join(sorted(table))}"
        ) from None


def protocol_lookup(name: str) -> ProtocolEntry:
    try:
        return PROTOCOLS[name]
    except KeyError:
        raise UnknownEntryError(
            f"unknown protocol {name!r}; known protocols: {', '.join(PROTOCOLS)}"
        ) from None
