"""Rotated surface-code sizing and the two-species repetition-code readout model."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from atomarch.errors import DomainError
from atomarch.units import Dimension, UnitValue, require

# largest distance min_distance_for_target will try
MAX_DISTANCE = 10_000


@dataclass(frozen=True)
class SurfaceCodeModel:
    """Fit p_L = prefactor * (p / threshold) ** (slope * d - offset)."""

    prefactor: float = 0.08
    slope: float = 0.58
    offset: float = 0.27
    threshold: float = 0.0053

    def __post_init__(self):
        for name in ("prefactor", "slope", "offset", "threshold"):
            if not getattr(self, name) > 0:
                raise DomainError(f"surface-code model {name} must be positive")
        if not self.threshold < 1:
            raise DomainError("threshold must be below 1")


@dataclass(frozen=True)
class CodeInstance:
    distance: int
    logical_count: int = 1

    def __post_init__(self):
        if int(self.distance) != self.distance or self.distance < 3:
            raise DomainError(f"code distance must be an integer >= 3, got {self.distance}")
        if int(self.logical_count) != self.logical_count or self.logical_count < 1:
            raise DomainError("logical_count must be a positive integer")

    @property
    def data_qubits(self) -> int:
        return self.distance**2


@dataclass(frozen=True)
class ReadoutModel:
    single_atom_measure_time: UnitValue
    repetition_size: int
    encode_time: UnitValue

    def __post_init__(self):
        t = require(self.single_atom_measure_time, Dimension.TIME, "single_atom_measure_time")
        enc = require(self.encode_time, Dimension.TIME, "encode_time")
        if t.magnitude <= 0:
            raise DomainError("single-atom measurement time must be positive")
        if enc.magnitude < 0:
            raise DomainError("encode time must be non-negative")
        if int(self.repetition_size) != self.repetition_size or self.repetition_size < 1:
            raise DomainError("repetition size must be a positive integer")
        object.__setattr__(self, "single_atom_measure_time", t)
        object.__setattr__(self, "encode_time", enc)


@dataclass(frozen=True)
class RepetitionState:
    """c0 |0>|0...0>_N + c1 |1>|1...1>_N, kept as its two branches."""

    c0: complex
    c1: complex
    n_copies: int

    @property
    def branches(self) -> tuple[tuple[str, complex], ...]:
        n = self.n_copies
        return (("0" + "0" * n, self.c0), ("1" + "1" * n, self.c1))

    @property
    def norm(self) -> float:
        return math.sqrt(abs(self.c0) ** 2 + abs(self.c1) ** 2)


def logical_error_rate(model: SurfaceCodeModel, p: float, d: int) -> float:
    """Raw fit value; it exceeds 1 well above threshold and is not clamped here."""
    if not 0 < p < 1:
        raise DomainError(f"physical error rate must lie in (0, 1), got {p}")
    if d < 3:
        raise DomainError(f"code distance must be >= 3, got {d}")
    return model.prefactor * (p / model.threshold) ** (model.slope * d - model.offset)


def min_distance_for_target(model: SurfaceCodeModel, p: float, target_inverse_pl: float) -> int:
    """Smallest d >= 3 whose 1/p_L reaches ``target_inverse_pl``."""
    if not 0 < p < 1:
        raise DomainError(f"physical error rate must lie in (0, 1), got {p}")
    if p >= model.threshold:
        raise DomainError(
            f"p={p} is above threshold {model.threshold}: no distance suppresses errors"
        )
    target_pl = 1.0 / target_inverse_pl
    # solve the continuous inequality, then settle on the integer by evaluation
    ratio = math.log(p / model.threshold)
    guess = (math.log(target_pl / model.prefactor) / ratio + model.offset) / model.slope
    d = max(3, math.floor(guess) - 1)
    while logical_error_rate(model, p, d) > target_pl:
        d += 1
        if d > MAX_DISTANCE:
            raise DomainError(f"target 1/p_L={target_inverse_pl} needs d > {MAX_DISTANCE}")
    while d > 3 and logical_error_rate(model, p, d - 1) <= target_pl:
        d -= 1
    return d


def physical_qubit_count(instance: CodeInstance) -> int:
    """Data plus ancilla qubits, with no ancilla reuse between X and Z rounds."""
    return instance.logical_count * (2 * instance.distance**2 - 1)


def repetition_readout_time(readout: ReadoutModel) -> UnitValue:
    """Encode, then image N atoms at once: N times the photon flux."""
    return readout.encode_time + readout.single_atom_measure_time / readout.repetition_size


def repetition_encode_state(c0: complex, c1: complex, n: int) -> RepetitionState:
    """Map c0|0> + c1|1> onto a repetition code of ``n`` auxiliary atoms.

    This is the entangled two-branch state, not n independent copies of the
    input state.
    """
    if int(n) != n or n < 1:
        raise DomainError(f"repetition size must be a positive integer, got {n}")
    c0, c1 = complex(c0), complex(c1)
    if not (cmath.isfinite(c0) and cmath.isfinite(c1)):
        raise DomainError("amplitudes must be finite")
    norm_sq = abs(c0) ** 2 + abs(c1) ** 2
    if abs(norm_sq - 1.0) > 1e-9:
        raise DomainError(f"input state is not normalized (|c0|^2+|c1|^2 = {norm_sq})")
    return RepetitionState(c0, c1, int(n))
