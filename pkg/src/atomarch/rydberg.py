"""Rydberg interactions and the entanglement-limited gate error floor.

The pair interaction is a single Forster channel: the initial pair state is
coupled with strength C3*sqrt(D)/R^3 to a second pair state detuned by the
Forster defect. Diagonalizing that 2x2 block gives the resonant 1/R^3 law at
short range and the van der Waals C3^2 D / (delta R^6) law at long range.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np
import tomli
from scipy import constants as _c

from atomarch.catalog import ProtocolEntry, protocol_lookup
from atomarch.errors import ConfigError, DomainError, UnknownEntryError
from atomarch.units import (
    TWO_PI,
    Dimension,
    UnitValue,
    as_ordinary,
    rad_per_s,
    require,
    seconds,
)

BOHR_RADIUS = _c.physical_constants["Bohr radius"][0]

# e^2 a0^2 / (4 pi eps0 h), converted from Hz m^3 to Hz um^3
DIPOLE_CONSTANT_HZ_UM3 = (
    _c.e**2 * BOHR_RADIUS**2 / (4 * math.pi * _c.epsilon_0 * _c.h) * 1e18
)

# van der Waals regime: coupling below a tenth of the defect
VDW_REGIME_FRACTION = 0.1


@dataclass(frozen=True)
class ForsterChannel:
    """One Forster interaction channel.

    ``c3_times_sqrtD_over_h`` is C3*sqrt(D)/h in MHz um^3 with the angular
    factor already folded in. ``defect_over_h`` is the signed Forster defect
    delta/h in MHz.
    """

    c3_times_sqrtD_over_h: float
    defect_over_h: float
    lifetime: UnitValue
    label: str = ""

    def __post_init__(self):
        if not self.c3_times_sqrtD_over_h > 0:
            raise DomainError("channel constant C3*sqrt(D)/h must be positive")
        if not math.isfinite(self.defect_over_h):
            raise DomainError("Forster defect must be finite")
        lifetime = require(self.lifetime, Dimension.TIME, "lifetime")
        if lifetime.magnitude <= 0:
            raise DomainError("Rydberg lifetime must be positive")
        object.__setattr__(self, "lifetime", lifetime)

    @classmethod
    def from_mapping(cls, data: dict) -> ForsterChannel:
        """Build from a catalog/scenario table (``defect`` and ``lifetime`` as quantity strings)."""
        defect = require(data.get("defect", "0 MHz"), Dimension.ANGULAR_FREQUENCY, "defect")
        defect_mhz = as_ordinary(defect).to("MHz")
        if "c3_sqrtD_over_h" in data:
            constant = float(data["c3_sqrtD_over_h"])
        elif "fit_distance" in data and "fit_interaction" in data:
            constant = fit_channel_constant(
                data["fit_interaction"], data["fit_distance"], defect_mhz
            )
        else:
            raise ConfigError("channel needs c3_sqrtD_over_h or fit_distance + fit_interaction")
        return cls(constant, defect_mhz, data.get("lifetime", "198 us"), data.get("label", ""))

    def coupling(self, R) -> float:
        """Resonant dipole coupling C3*sqrt(D)/(hbar R^3) in rad/s."""
        R = _distance(R)
        r_um = R.magnitude * 1e6
        return TWO_PI * 1e6 * self.c3_times_sqrtD_over_h / r_um**3

    @property
    def defect(self) -> float:
        """Forster defect in rad/s."""
        return TWO_PI * 1e6 * self.defect_over_h

    def c6(self) -> float:
        """Van der Waals constant C6/h = (C3 sqrt(D)/h)^2 / (delta/h), in MHz um^6."""
        if self.defect_over_h == 0:
            raise DomainError("C6 is undefined at exact Forster resonance")
        return self.c3_times_sqrtD_over_h**2 / self.defect_over_h


@dataclass(frozen=True)
class PopulationTrace:
    """Rydberg populations sampled on a time grid (``t_s`` in seconds)."""

    t_s: np.ndarray
    p1: np.ndarray
    p2: np.ndarray
    p12: np.ndarray

    def __post_init__(self):
        arrays = {}
        for name in ("t_s", "p1", "p2", "p12"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.ndim != 1:
                raise DomainError(f"{name} must be one-dimensional")
            arr.setflags(write=False)
            arrays[name] = arr
            object.__setattr__(self, name, arr)
        n = arrays["t_s"].size
        if n == 0:
            raise DomainError("population trace is empty")
        if any(a.size != n for a in arrays.values()):
            raise DomainError("t_s, p1, p2, p12 must have the same length")
        if not np.all(np.isfinite(np.concatenate(list(arrays.values())))):
            raise DomainError("population trace contains non-finite values")
        if np.any(np.diff(arrays["t_s"]) <= 0):
            raise DomainError("trace times must be strictly ascending")
        tol = 1e-12
        for name in ("p1", "p2", "p12"):
            p = arrays[name]
            if np.any(p < -tol) or np.any(p > 1 + tol):
                raise DomainError(f"{name} must lie in [0, 1]")
        if np.any(arrays["p1"] + arrays["p12"] > 1 + tol) or np.any(
            arrays["p2"] + arrays["p12"] > 1 + tol
        ):
            raise DomainError("single-atom populations exceed 1 (p1+p12 or p2+p12 > 1)")

    @classmethod
    def from_csv(cls, path) -> PopulationTrace:
        """Read a ``t_s,p1,p2,p12`` CSV file."""
        path = Path(path)
        with path.open(newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames != ["t_s", "p1", "p2", "p12"]:
                raise ConfigError(
                    f"{path}: expected header t_s,p1,p2,p12, got {','.join(reader.fieldnames or [])}"
                )
            rows = []
            for lineno, row in enumerate(reader, start=2):
                try:
                    rows.append([float(row[k]) for k in ("t_s", "p1", "p2", "p12")])
                except (TypeError, ValueError):
                    raise ConfigError(f"{path}:{lineno}: malformed row") from None
        data = np.array(rows, dtype=float).reshape(-1, 4)
        return cls(data[:, 0], data[:, 1], data[:, 2], data[:, 3])


@dataclass(frozen=True)
class BoundCheck:
    satisfied: bool
    margin: float


def _distance(R) -> UnitValue:
    R = require(R, Dimension.LENGTH, "R")
    if R.magnitude <= 0:
        raise DomainError(f"separation must be positive, got {R.magnitude} m")
    return R


def _interaction_strength(V) -> float:
    V = require(V, Dimension.ANGULAR_FREQUENCY, "V")
    if V.magnitude == 0:
        raise DomainError("zero interaction: no entanglement is possible")
    return abs(V.magnitude)


def forster_c3(reduced_elem_a: float, reduced_elem_b: float, j_alpha: float, j_beta: float) -> float:
    """C3/h in Hz um^3 from reduced dipole matrix elements given in units of e*a0."""
    for j in (j_alpha, j_beta):
        if j <= 0 or not float(2 * j).is_integer() or int(2 * j) % 2 != 1:
            raise DomainError(f"j must be a positive half-integer, got {j}")
    return (
        DIPOLE_CONSTANT_HZ_UM3
        * reduced_elem_a
        * reduced_elem_b
        / (math.sqrt(2 * j_alpha + 1) * math.sqrt(2 * j_beta + 1))
    )


def interaction(channel: ForsterChannel, R) -> UnitValue:
    """Signed pair-state energy shift V/hbar at separation R, in rad/s.

    Eigenvalue of [[0, C], [C, delta]] on the branch that tends to zero as
    C -> 0. Written in the cancellation-free form so the far-field vdW tail
    keeps full precision.
    """
    coupling = channel.coupling(R)
    delta = channel.defect
    s = 1.0 if delta >= 0 else -1.0
    shift = -2.0 * coupling**2 / (delta + s * math.sqrt(delta**2 + 4.0 * coupling**2))
    return rad_per_s(shift)


def fit_channel_constant(target_interaction, R, defect_over_h: float = 0.0) -> float:
    """Channel constant (MHz um^3) for which ``interaction`` at R has magnitude ``target_interaction``."""
    V = as_ordinary(require(target_interaction, Dimension.ANGULAR_FREQUENCY, "interaction"))
    v_mhz = abs(V.to("MHz"))
    if v_mhz == 0:
        raise DomainError("cannot fit a channel to zero interaction")
    # shift is -|V| for delta >= 0 and +|V| otherwise; C^2 = V^2 - delta V
    signed = -v_mhz if defect_over_h >= 0 else v_mhz
    coupling_sq = signed**2 - defect_over_h * signed
    r_um = _distance(R).magnitude * 1e6
    return math.sqrt(coupling_sq) * r_um**3


def min_gate_error(V, lifetime) -> float:
    """Entanglement-limited error floor 2/(|V| tau_R)."""
    v = _interaction_strength(V)
    tau = require(lifetime, Dimension.TIME, "lifetime")
    if tau.magnitude <= 0:
        raise DomainError("lifetime must be positive")
    return 2.0 / (v * tau.magnitude)


def protocol_error(protocol: ProtocolEntry | str, V, lifetime) -> float:
    if isinstance(protocol, str):
        protocol = protocol_lookup(protocol)
    return protocol.overhead_ratio * min_gate_error(V, lifetime)


def integrated_population(trace: PopulationTrace) -> UnitValue:
    """Time integral of p1 + p2 + 2 p12 (trapezoid rule)."""
    integrand = trace.p1 + trace.p2 + 2.0 * trace.p12
    return seconds(float(np.trapezoid(integrand, trace.t_s)))


def entanglement_bound_check(trace: PopulationTrace, V) -> BoundCheck:
    """Compare the integrated population with the 2/|V| needed for one ebit.

    The bound assumes the qubits start in a separable pure state; that is
    not checked.
    """
    v = _interaction_strength(V)
    margin = integrated_population(trace).magnitude * v / 2.0
    return BoundCheck(margin >= 1.0, margin)


def mediated_interaction(channel: ForsterChannel, R, n_bus: int = 0) -> UnitValue:
    """Interaction across R with ``n_bus`` mediating atoms placed midway (0 or 1).

    With one bus atom this is the nearest-segment interaction V(R/2), an upper
    bound on the effective coupling; deep in the vdW regime it is 64 V(R).
    Every segment must be in the van der Waals regime.
    """
    if n_bus not in (0, 1):
        if isinstance(n_bus, int) and n_bus > 1:
            raise DomainError(f"chains of {n_bus} bus atoms are not supported (max 1)")
        raise DomainError(f"n_bus must be 0 or 1, got {n_bus!r}")
    R = _distance(R)
    segment = R / (n_bus + 1)
    if not abs(channel.coupling(segment)) < VDW_REGIME_FRACTION * abs(channel.defect):
        raise DomainError(
            "bus-atom enhancement needs the van der Waals regime: the dipole coupling "
            f"at {segment.to('um'):.4g} um must be below {VDW_REGIME_FRACTION} x |Forster defect|"
        )
    return interaction(channel, segment)


@lru_cache(maxsize=None)
def _channel_table() -> dict:
    text = resources.files("atomarch").joinpath("data/channels.toml").read_text()
    return tomli.loads(text)


def channel_lookup(name: str) -> ForsterChannel:
    table = _channel_table()
    if name not in table:
        raise UnknownEntryError(f"unknown channel {name!r}; known channels: {', '.join(table)}")
    return ForsterChannel.from_mapping(table[name])


def channel_source(name: str) -> str:
    return _channel_table().get(name, {}).get("source", "")
