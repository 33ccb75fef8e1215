"""Scenario files: TOML sections of quantity strings, validated into model objects.

Missing keys fall back to the bundled ``paper-defaults.toml`` and every such
fallback is recorded so reports can list it.
"""

from __future__ import annotations

import copy
import hashlib
import json
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

import tomli

from atomarch.catalog import SpeciesParams, protocol_lookup, species_lookup
from atomarch.connectivity import GateTimings, LayoutParams, LogicalGrid, min_pair_pitch
from atomarch.errors import ConfigError, DimensionError, ModelError, ParseError
from atomarch.rydberg import ForsterChannel, interaction
from atomarch.surfacecode import (
    CodeInstance,
    ReadoutModel,
    SurfaceCodeModel,
    min_distance_for_target,
)
from atomarch.transport import TransportSpec
from atomarch.units import Dimension, UnitValue, as_ordinary, parse_quantity, require

DEFAULTS_FILE = "paper-defaults.toml"

Q = Dimension  # quantity keys are typed by their dimension

# section -> key -> kind; kinds: a Dimension, float, int, str, "zone"
SCHEMA: dict[str, dict[str, object]] = {
    "atom": {"species": str, "mass": Q.MASS},
    "trap": {"omega0": Q.ANGULAR_FREQUENCY},
    "channel": {
        "c3_sqrtD_over_h": float,
        "defect": Q.ANGULAR_FREQUENCY,
        "lifetime": Q.TIME,
        "label": str,
        "interaction": Q.ANGULAR_FREQUENCY,
        "distance": Q.LENGTH,
    },
    "gates": {
        "t_cz": Q.TIME,
        "t_beam": Q.TIME,
        "t_meas": Q.TIME,
        "protocol": str,
        "parallel_factor": int,
        "max_range": Q.LENGTH,
    },
    "layout": {
        "r_g": Q.LENGTH,
        "r": Q.LENGTH,
        "blockade_ratio": float,
        "pulse_area": float,
        "eta_max": float,
    },
    "code": {
        "d": int,
        "target_inverse_pl": float,
        "p": float,
        "logical_count": int,
        "prefactor": float,
        "slope": float,
        "offset": float,
        "threshold": float,
    },
    "grid": {"width": int, "height": int, "zone": "zone", "routing": str},
    "transport": {"round_trip_budget": float},
    "readout": {"t_meas": Q.TIME, "repetition_size": int, "encode_time": Q.TIME},
}

# keys that may legitimately stay unset
OPTIONAL = {
    ("atom", "mass"),
    ("channel", "interaction"),
    ("code", "target_inverse_pl"),
    ("grid", "zone"),
}

# keys that accept "auto" in place of a quantity
AUTO = {("layout", "r"), ("channel", "interaction")}

# defaults not spelled out in the defaults file
EXTRA_DEFAULTS = {("grid", "routing"): "pairwise"}


@lru_cache(maxsize=None)
def default_text() -> str:
    return resources.files("atomarch").joinpath(f"data/{DEFAULTS_FILE}").read_text()


def defaults_path() -> Path:
    return Path(str(resources.files("atomarch").joinpath(f"data/{DEFAULTS_FILE}")))


def _defaults() -> dict:
    data = tomli.loads(default_text())
    for (section, key), value in EXTRA_DEFAULTS.items():
        data.setdefault(section, {}).setdefault(key, value)
    return data


@dataclass(frozen=True)
class Scenario:
    raw: dict
    defaults_applied: tuple[str, ...]
    source: str
    species: SpeciesParams
    transport: TransportSpec
    channel: ForsterChannel
    bound_interaction: UnitValue
    timings: GateTimings
    protocol: str
    parallel_factor: int
    max_range: UnitValue
    layout: LayoutParams
    code_model: SurfaceCodeModel
    code: CodeInstance
    physical_error: float
    target_inverse_pl: float | None
    grid: LogicalGrid
    routing: str
    round_trip_budget: float
    readout: ReadoutModel
    notes: tuple[str, ...] = field(default=())

    @property
    def sha256(self) -> str:
        return scenario_hash(self.raw)

    def footer(self) -> dict:
        return {
            "source": self.source,
            "sha256": self.sha256,
            "defaults_applied": list(self.defaults_applied),
        }


def scenario_hash(raw: dict) -> str:
    canonical = json.dumps(raw, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def _key_line(text: str, section: str, key: str) -> int | None:
    current = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        header = re.match(r"\[\s*([^\]]+?)\s*\]", stripped)
        if header:
            current = header.group(1)
            continue
        if current == section and re.match(rf"{re.escape(key)}\s*=", stripped):
            return lineno
    return None


def _coerce(kind, value, where: str, auto: bool = False):
    if isinstance(kind, Dimension):
        if auto and value == "auto":
            return value
        try:
            quantity = require(value, kind, where)
        except DimensionError:
            if isinstance(value, str):
                got = parse_quantity(value).dimension.value
            elif isinstance(value, UnitValue):
                got = value.dimension.value
            else:
                got = f"bare {type(value).__name__} {value!r}"
            raise DimensionError(f"{where}: expected {kind.value}, got {got}") from None
        except ParseError as exc:
            raise ParseError(f"{where}: {exc}") from None
        return quantity
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{where}: expected a number, got {value!r}")
        return float(value)
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{where}: expected an integer, got {value!r}")
        return value
    if kind is str:
        if not isinstance(value, str):
            raise ConfigError(f"{where}: expected a string, got {value!r}")
        return value
    if kind == "zone":
        if (
            not isinstance(value, list)
            or len(value) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
        ):
            raise ConfigError(f"{where}: expected [x, y], got {value!r}")
        return (float(value[0]), float(value[1]))
    raise AssertionError(kind)


def parse_override(assignment: str) -> tuple[str, str, object]:
    """Split ``section.key=value`` and convert the value to its TOML-level type."""
    match = re.fullmatch(r"\s*([A-Za-z_]+)\.([A-Za-z0-9_]+)\s*=(.*)", assignment)
    if not match:
        raise ConfigError(f"--set expects section.key=value, got {assignment!r}")
    section, key, text = match.group(1), match.group(2), match.group(3).strip()
    kind = SCHEMA.get(section, {}).get(key)
    if kind is None:
        raise ConfigError(f"--set: unknown scenario key {section}.{key}")
    where = f"--set {section}.{key}"
    if isinstance(kind, Dimension) or kind is str:
        value: object = text
    elif kind is float:
        try:
            value = float(text)
        except ValueError:
            raise ConfigError(f"{where}: expected a number, got {text!r}") from None
    elif kind is int:
        try:
            value = int(text)
        except ValueError:
            raise ConfigError(f"{where}: expected an integer, got {text!r}") from None
    else:
        try:
            value = [float(v) for v in text.strip("[]()").split(",")]
        except ValueError:
            raise ConfigError(f"{where}: expected x,y, got {text!r}") from None
    return section, key, value


def load_scenario(path=None, overrides=()) -> Scenario:
    """Read a scenario file (or none), apply ``section.key=value`` overrides, validate."""
    text = ""
    source = "<defaults>"
    if path is not None:
        path = Path(path)
        source = path.name
        try:
            text = path.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read scenario {path}: {exc.strerror}") from None
        try:
            user = tomli.loads(text)
        except tomli.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from None
    else:
        user = {}
    label = str(path) if path is not None else source

    def where(section, key):
        line = _key_line(text, section, key)
        return f"{label}:{line}: {section}.{key}" if line else f"{label}: {section}.{key}"

    for section, body in user.items():
        if section not in SCHEMA:
            raise ConfigError(f"{label}: unknown section [{section}]")
        if not isinstance(body, dict):
            raise ConfigError(f"{label}: {section} must be a table")
        for key in body:
            if key not in SCHEMA[section]:
                raise ConfigError(f"{where(section, key)}: unknown key")

    merged = copy.deepcopy(user)
    for assignment in overrides:
        section, key, value = parse_override(assignment)
        merged.setdefault(section, {})[key] = value

    defaults = _defaults()
    raw: dict = {}
    applied = []
    for section, keys in SCHEMA.items():
        raw[section] = {}
        for key in keys:
            if key in merged.get(section, {}):
                raw[section][key] = merged[section][key]
            elif key in defaults.get(section, {}):
                raw[section][key] = defaults[section][key]
                applied.append(f"{section}.{key}")

    values: dict = {}
    for section, keys in SCHEMA.items():
        for key, kind in keys.items():
            if key in raw[section]:
                values[(section, key)] = _coerce(
                    kind, raw[section][key], where(section, key), (section, key) in AUTO
                )
            elif (section, key) not in OPTIONAL:
                raise ConfigError(f"{label}: missing {section}.{key}")

    user_keys = {(s, k) for s, body in merged.items() for k in body}
    try:
        return _build(values, raw, tuple(applied), source, user_keys)
    except ModelError as exc:
        raise type(exc)(f"{label}: {exc}") from None


def _build(values, raw, applied, source, user_keys) -> Scenario:
    v = values.get
    notes = []

    name = v(("atom", "species"))
    if ("atom", "mass") in values:
        species = SpeciesParams(name, v(("atom", "mass")), source="scenario")
    else:
        species = species_lookup(name)

    budget = v(("transport", "round_trip_budget"))
    transport = TransportSpec(species, v(("trap", "omega0")), budget)

    channel = ForsterChannel(
        v(("channel", "c3_sqrtD_over_h")),
        _mhz(v(("channel", "defect"))),
        v(("channel", "lifetime")),
        v(("channel", "label")),
    )
    bound_v = v(("channel", "interaction"))
    if bound_v in (None, "auto"):
        bound_v = interaction(channel, v(("channel", "distance")))
        notes.append("bound interaction evaluated from the channel at channel.distance")

    protocol = v(("gates", "protocol"))
    protocol_lookup(protocol)
    timings = GateTimings(v(("gates", "t_cz")), v(("gates", "t_beam")), v(("gates", "t_meas")))

    r = v(("layout", "r"))
    r_g = v(("layout", "r_g"))
    knobs = dict(
        blockade_ratio=v(("layout", "blockade_ratio")),
        pulse_area=v(("layout", "pulse_area")),
        eta_max=v(("layout", "eta_max")),
    )
    if r == "auto":
        r = min_pair_pitch(LayoutParams(r_g, r_g, **knobs))
        notes.append("array pitch derived from the crosstalk bound")
    layout = LayoutParams(r_g, r, **knobs)

    model = SurfaceCodeModel(
        v(("code", "prefactor")), v(("code", "slope")), v(("code", "offset")), v(("code", "threshold"))
    )
    p = v(("code", "p"))
    target = v(("code", "target_inverse_pl"))
    d = v(("code", "d"))
    if target is not None and ("code", "d") not in user_keys:
        d = min_distance_for_target(model, p, target)
        notes.append(f"code distance solved from target 1/p_L = {target:g}")
    code = CodeInstance(d, v(("code", "logical_count")))

    grid = LogicalGrid(v(("grid", "width")), v(("grid", "height")), v(("grid", "zone")))
    routing = v(("grid", "routing"))
    if routing not in ("pairwise", "zone"):
        raise ConfigError(f"grid.routing must be 'pairwise' or 'zone', got {routing!r}")

    readout = ReadoutModel(
        v(("readout", "t_meas")), v(("readout", "repetition_size")), v(("readout", "encode_time"))
    )
    return Scenario(
        raw=raw,
        defaults_applied=applied,
        source=source,
        species=species,
        transport=transport,
        channel=channel,
        bound_interaction=bound_v,
        timings=timings,
        protocol=protocol,
        parallel_factor=v(("gates", "parallel_factor")),
        max_range=v(("gates", "max_range")),
        layout=layout,
        code_model=model,
        code=code,
        physical_error=p,
        target_inverse_pl=target,
        grid=grid,
        routing=routing,
        round_trip_budget=budget,
        readout=readout,
        notes=tuple(notes),
    )


def _mhz(defect: UnitValue) -> float:
    return as_ordinary(defect).to("MHz")
