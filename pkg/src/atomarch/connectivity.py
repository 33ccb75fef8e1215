"""Logical CZ latency for long-range, transport and lattice-surgery connectivity.

Times are broken down into phases so that array averages can rescale only the
atom-moving phases: a minimal-jerk move over a distance D takes a time
proportional to D**(1/3), while Rydberg pulses and measurements do not depend
on how far apart the logical qubits are.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field

import numpy as np

from atomarch.errors import ConfigError, DomainError, ModelError
from atomarch.transport import TransportSpec, minimal_jerk_time
from atomarch.units import Dimension, UnitValue, format_human, require, seconds

STRATEGIES = (
    "long-range",
    "transport",
    "lattice-surgery-in-place",
    "lattice-surgery-transport",
)

# minimal-jerk time grows as distance**(1/3)
MOVE_TIME_EXPONENT = 1.0 / 3.0

PULSE_AREA_NOTE = (
    "pulse-area condition read as Omega*t_CZ >= 7.6 (dimensionless); the source writes "
    "'Omega t_CZ/hbar >= 7.6', taken to be a typo"
)


@dataclass(frozen=True)
class GateTimings:
    t_cz: UnitValue
    t_beam: UnitValue
    t_meas: UnitValue

    def __post_init__(self):
        for name in ("t_cz", "t_beam", "t_meas"):
            value = require(getattr(self, name), Dimension.TIME, name)
            if value.magnitude < 0:
                raise DomainError(f"{name} must be non-negative")
            object.__setattr__(self, name, value)


@dataclass(frozen=True)
class LayoutParams:
    """Gate-pair spacing r_g, array pitch r, and the crosstalk model knobs."""

    gate_pair_spacing: UnitValue
    array_pitch: UnitValue
    blockade_ratio: float = 20.0
    pulse_area: float = 7.6
    eta_max: float = 0.01

    def __post_init__(self):
        r_g = require(self.gate_pair_spacing, Dimension.LENGTH, "gate_pair_spacing")
        r = require(self.array_pitch, Dimension.LENGTH, "array_pitch")
        object.__setattr__(self, "gate_pair_spacing", r_g)
        object.__setattr__(self, "array_pitch", r)
        for name in ("blockade_ratio", "pulse_area", "eta_max"):
            if not getattr(self, name) > 0:
                raise DomainError(f"layout {name} must be positive")
        if not r_g.magnitude > 0:
            raise DomainError("gate_pair_spacing must be positive")
        if r < r_g:
            raise DomainError("array pitch must be at least the gate-pair spacing")


@dataclass(frozen=True)
class LogicalGrid:
    """Logical qubits on a width x height grid, in units of the logical pitch."""

    width: int
    height: int
    zone: tuple[float, float] | None = None

    def __post_init__(self):
        if int(self.width) != self.width or int(self.height) != self.height:
            raise DomainError("grid dimensions must be integers")
        if self.width < 1 or self.height < 1:
            raise DomainError("grid dimensions must be positive")
        if self.zone is not None:
            zx, zy = (float(v) for v in self.zone)
            object.__setattr__(self, "zone", (zx, zy))

    @property
    def sites(self) -> int:
        return self.width * self.height


@dataclass(frozen=True)
class Phase:
    name: str
    duration: UnitValue
    scales_with_distance: bool = False


@dataclass(frozen=True)
class StrategyReport:
    """Latency of one strategy. ``error`` is set (and times are None) if its model failed."""

    strategy: str
    neighbor_time: UnitValue | None
    array_average_time: UnitValue | None
    breakdown: tuple[Phase, ...] = ()
    assumptions: tuple[str, ...] = ()
    error: str | None = None

    def to_dict(self) -> dict:
        def s(v):
            return None if v is None else v.magnitude

        return {
            "strategy": self.strategy,
            "neighbor_time_s": s(self.neighbor_time),
            "array_average_time_s": s(self.array_average_time),
            "breakdown": [
                {
                    "phase": p.name,
                    "duration_s": p.duration.magnitude,
                    "scales_with_distance": p.scales_with_distance,
                }
                for p in self.breakdown
            ],
            "assumptions": list(self.assumptions),
            "error": self.error,
        }


def _report(strategy, phases, assumptions) -> StrategyReport:
    # summed in breakdown order so neighbor_time == sum of phases exactly
    total = seconds(sum(p.duration.magnitude for p in phases))
    return StrategyReport(strategy, total, total, tuple(phases), tuple(assumptions))


def longrange_transversal_time(d: int, timings: GateTimings, parallel_factor: int = 1) -> UnitValue:
    """ceil(d^2 / parallel_factor) rounds of (t_cz + t_beam)."""
    _check_distance(d)
    if int(parallel_factor) != parallel_factor or parallel_factor < 1:
        raise DomainError("parallel_factor must be a positive integer")
    rounds = math.ceil(d * d / parallel_factor)
    return seconds(rounds * (timings.t_cz.magnitude + timings.t_beam.magnitude))


def longrange_report(
    d: int,
    timings: GateTimings,
    parallel_factor: int = 1,
    physical_spacing=None,
    max_range=None,
) -> StrategyReport:
    total = longrange_transversal_time(d, timings, parallel_factor)
    rounds = math.ceil(d * d / parallel_factor)
    t_pair = timings.t_cz.magnitude + timings.t_beam.magnitude
    phases = [Phase(f"{rounds} rounds of pulse + beam pointing", total)]
    notes = [
        f"{d * d} physical CZ gates in {rounds} rounds (parallel factor {parallel_factor}), "
        f"{format_human(seconds(t_pair))} per round"
    ]
    if physical_spacing is not None and max_range is not None:
        spacing = require(physical_spacing, Dimension.LENGTH, "physical_spacing")
        limit = require(max_range, Dimension.LENGTH, "max_range")
        reach = spacing * d
        if reach > limit:
            notes.append(
                f"WARNING: interaction distance d*r = {format_human(reach)} exceeds the "
                f"maximum Rydberg range {format_human(limit)}"
            )
        else:
            notes.append(
                f"interaction distance d*r = {format_human(reach)} within range "
                f"{format_human(limit)}"
            )
    notes.append("distance independent: array average equals the neighbor time")
    return _report("long-range", phases, notes)


def crosstalk_eta(layout: LayoutParams) -> float:
    """Worst-case crosstalk 4 * V/(hbar Omega) * Omega t_CZ * (r_g/r)^6 / (2 pi)."""
    ratio = layout.gate_pair_spacing / layout.array_pitch
    return 4.0 * layout.blockade_ratio * layout.pulse_area * ratio**6 / (2.0 * math.pi)


def min_pair_pitch(layout: LayoutParams) -> UnitValue:
    """Smallest array pitch keeping the worst-case crosstalk at eta_max (not rounded)."""
    factor = (
        4.0 * layout.blockade_ratio * layout.pulse_area / (2.0 * math.pi * layout.eta_max)
    ) ** (1.0 / 6.0)
    return layout.gate_pair_spacing * factor


def transport_transversal_time(
    d: int,
    layout: LayoutParams,
    spec: TransportSpec,
    timings: GateTimings,
    round_trip_budget: float,
) -> StrategyReport:
    """Move one patch d*r onto its neighbor, pulse all pairs at once, move back."""
    _check_distance(d)
    if not round_trip_budget > 0:
        raise DomainError("round-trip heating budget must be positive")
    distance = layout.array_pitch * d
    per_move = round_trip_budget / 2.0
    t_move = minimal_jerk_time(spec, distance, per_move)
    phases = [
        Phase("move out", t_move, True),
        Phase("Rydberg pulse", timings.t_cz),
        Phase("move back", t_move, True),
    ]
    notes = [
        f"move distance d*r = {format_human(distance)}",
        f"round-trip heating budget {round_trip_budget:g} quanta split evenly: "
        f"{per_move:g} per move",
        "all d^2 pairs pulsed in one global step",
        PULSE_AREA_NOTE,
    ]
    needed = min_pair_pitch(layout)
    if layout.array_pitch < needed:
        notes.append(
            f"WARNING: pitch {format_human(layout.array_pitch)} is below the crosstalk "
            f"bound {format_human(needed)} (eta = {crosstalk_eta(layout):.4g} > "
            f"{layout.eta_max:g})"
        )
    return _report("transport", phases, notes)


def lattice_surgery_time(
    d: int,
    timings: GateTimings,
    mode: str = "in-place",
    spec: TransportSpec | None = None,
    move_distance=None,
    budget: float | None = None,
) -> StrategyReport:
    """Merge then split along patch boundaries, each with d measurement rounds."""
    _check_distance(d)
    rounds = seconds(d * timings.t_meas.magnitude)
    if mode == "in-place":
        gates = seconds(d * (timings.t_cz.magnitude + timings.t_beam.magnitude))
        phases = [
            Phase(f"merge: {d} scanned gates", gates),
            Phase(f"merge: {d} measurement rounds", rounds),
            Phase(f"split: {d} scanned gates", gates),
            Phase(f"split: {d} measurement rounds", rounds),
        ]
        notes = ["gates applied in place with scanned addressing beams"]
        return _report("lattice-surgery-in-place", phases, notes + _ls_notes())
    if mode != "transport":
        raise ConfigError(f"lattice surgery mode must be 'in-place' or 'transport', got {mode!r}")
    missing = [
        name
        for name, value in (("spec", spec), ("move_distance", move_distance), ("budget", budget))
        if value is None
    ]
    if missing:
        raise ConfigError(f"transport lattice surgery needs {', '.join(missing)}")
    if not budget > 0:
        raise DomainError("heating budget must be positive")
    per_move = budget / 4.0
    t_move = minimal_jerk_time(spec, move_distance, per_move)
    phases = [
        Phase("merge: move in", t_move),
        Phase("merge: global CZ", timings.t_cz),
        Phase("merge: move out", t_move),
        Phase(f"merge: {d} measurement rounds", rounds),
        Phase("split: move in", t_move),
        Phase("split: global CZ", timings.t_cz),
        Phase("split: move out", t_move),
        Phase(f"split: {d} measurement rounds", rounds),
    ]
    notes = [
        f"moves of one lattice period {format_human(require(move_distance, Dimension.LENGTH, 'move_distance'))}",
        f"sequence heating budget {budget:g} quanta split over 4 moves: {per_move:g} per move",
    ]
    return _report("lattice-surgery-transport", phases, notes + _ls_notes())


def _ls_notes():
    return [
        "Hadamards converting CZ to CNOT neglected",
        "distance independent: array average equals the neighbor time",
    ]


def _check_distance(d):
    if int(d) != d or d < 3:
        raise DomainError(f"code distance must be an integer >= 3, got {d}")


def _offset_counts(grid: LogicalGrid):
    """Ordered site pairs per (|dx|, |dy|): each nonzero offset occurs in both signs."""
    dx = np.arange(grid.width)
    dy = np.arange(grid.height)
    cx = np.where(dx == 0, 1, 2) * (grid.width - dx)
    cy = np.where(dy == 0, 1, 2) * (grid.height - dy)
    counts = np.outer(cx, cy).astype(float)
    dist = (dx[:, None] + dy[None, :]).astype(float)
    return dist, counts


def manhattan_stats(grid: LogicalGrid, exponent: float) -> float:
    """Mean of D**exponent over ordered pairs of distinct sites."""
    if grid.sites < 2:
        raise DomainError("pair statistics need at least two sites")
    dist, counts = _offset_counts(grid)
    counts[0, 0] = 0.0  # drop same-site pairs
    powered = np.zeros_like(dist)
    nz = dist > 0
    powered[nz] = dist[nz] ** exponent
    return float((powered * counts).sum() / counts.sum())


def zone_stats(grid: LogicalGrid, exponent: float) -> float:
    """Mean over sites of the Manhattan distance to the entangling zone, to ``exponent``."""
    if grid.zone is None:
        raise ConfigError("zone routing needs an entangling-zone position")
    zx, zy = grid.zone
    xs, ys = np.meshgrid(np.arange(grid.width), np.arange(grid.height), indexing="ij")
    dist = np.abs(xs - zx) + np.abs(ys - zy)
    if exponent <= 0 and np.any(dist == 0):
        raise DomainError("non-positive exponent with the zone on a grid site")
    return float(np.mean(dist**exponent))


def average_logical_gate_time(
    report: StrategyReport, grid: LogicalGrid, routing: str = "pairwise"
) -> UnitValue:
    """Array-averaged gate time from a neighbor report with unit-distance moves.

    Only phases flagged ``scales_with_distance`` are rescaled, by the mean of
    D**(1/3); everything else is kept as is.
    """
    if report.neighbor_time is None:
        raise ModelError(f"{report.strategy}: no neighbor time ({report.error})")
    if routing not in ("pairwise", "zone"):
        raise ConfigError(f"routing must be 'pairwise' or 'zone', got {routing!r}")
    fixed = sum(p.duration.magnitude for p in report.breakdown if not p.scales_with_distance)
    moving = sum(p.duration.magnitude for p in report.breakdown if p.scales_with_distance)
    if moving == 0:
        return report.neighbor_time
    if routing == "pairwise":
        factor = manhattan_stats(grid, MOVE_TIME_EXPONENT)
    else:
        factor = zone_stats(grid, MOVE_TIME_EXPONENT)
    return seconds(fixed + factor * moving)


def compare_strategies(
    d: int,
    timings: GateTimings,
    layout: LayoutParams,
    spec: TransportSpec,
    grid: LogicalGrid,
    round_trip_budget: float,
    parallel_factor: int = 1,
    max_range=None,
    routing: str = "pairwise",
) -> list[StrategyReport]:
    """One report per strategy, fastest array average first; failures go last."""
    builders = {
        "long-range": lambda: longrange_report(
            d, timings, parallel_factor, layout.gate_pair_spacing, max_range
        ),
        "transport": lambda: transport_transversal_time(
            d, layout, spec, timings, round_trip_budget
        ),
        "lattice-surgery-in-place": lambda: lattice_surgery_time(d, timings, "in-place"),
        "lattice-surgery-transport": lambda: lattice_surgery_time(
            d, timings, "transport", spec, layout.array_pitch, round_trip_budget
        ),
    }
    reports = []
    for name in STRATEGIES:
        try:
            report = builders[name]()
            average = average_logical_gate_time(report, grid, routing)
            notes = report.assumptions
            if any(p.scales_with_distance for p in report.breakdown):
                notes += (_routing_note(grid, routing),)
            report = dataclasses.replace(report, array_average_time=average, assumptions=notes)
        except ModelError as exc:
            report = StrategyReport(name, None, None, error=f"{type(exc).__name__}: {exc}")
        reports.append(report)
    return sorted(reports, key=_sort_key)


def _routing_note(grid: LogicalGrid, routing: str) -> str:
    if routing == "zone":
        return (
            f"zone routing: every site moves to the zone at {grid.zone} (logical-pitch units); "
            f"mean D^(1/3) over sites = {zone_stats(grid, MOVE_TIME_EXPONENT):.4f}"
        )
    return (
        f"pairwise routing on a {grid.width}x{grid.height} grid: mean D^(1/3) over "
        f"distinct ordered pairs = {manhattan_stats(grid, MOVE_TIME_EXPONENT):.4f}; "
        "only move phases rescaled"
    )


def _sort_key(report: StrategyReport):
    if report.array_average_time is None:
        return (1, math.inf, STRATEGIES.index(report.strategy))
    return (0, report.array_average_time.magnitude, STRATEGIES.index(report.strategy))
