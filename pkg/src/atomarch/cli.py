"""Command-line entry point: ``atomarch <subcommand> [--scenario FILE] ...``.

Exit status 0 on success, 1 on a model or scenario error, 2 on a usage error.
Artifacts are written only after every number has been computed, each through
a temporary file that is renamed into place.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from atomarch import connectivity as conn
from atomarch import nisq, rydberg, surfacecode, transport
from atomarch.catalog import PROTOCOLS
from atomarch.errors import ConfigError, ModelError
from atomarch.scenario import load_scenario
from atomarch.units import (
    Dimension,
    UnitValue,
    format_human,
    meters,
    parse_quantity,
    require,
    seconds,
)

TEMPERATURE_INSET_N = (0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0)
CLAMP_NOTE = "p_L above 1 is shown clamped to 1; the JSON carries the raw fit value"
READOUT_NOTE = "readout speedup is an optimistic bound: exactly 1/N of the single-atom time"
TRACE_NOTE = "the entanglement bound assumes a separable pure initial state; not checked"
HEATING_NOTE = "heating from successive moves is summed linearly (no rethermalization)"


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# artifact output


def atomic_write(path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def json_text(payload) -> str:
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return v


class Output:
    """Collects artifacts and writes them together once the run has succeeded."""

    def __init__(self, args, scenario):
        self.args = args
        self.scenario = scenario
        self.files: list[tuple[Path, str]] = []

    def meta(self, command) -> dict:
        return {"command": command, "scenario": self.scenario.footer()}

    def json(self, command, results):
        if self.args.json:
            payload = self.meta(command)
            payload["results"] = results
            self.files.append((Path(self.args.json), json_text(payload)))

    def csv(self, command, header, rows, path=None):
        path = path or self.args.csv
        if path:
            path = Path(path)
            self.files.append((path, csv_text(header, rows)))
            # csv has no room for a footer, so it goes in a sidecar file
            sidecar = path.with_name(path.name + ".meta.json")
            self.files.append((sidecar, json_text(self.meta(command))))

    def commit(self):
        for path, _ in self.files:
            if not path.parent.is_dir():
                raise ConfigError(f"output directory {path.parent} does not exist")
        for path, text in self.files:
            atomic_write(path, text)


def echo(line=""):
    print(line)


# ---------------------------------------------------------------------------
# subcommands


def cmd_bound(args, sc, out):
    V = sc.bound_interaction
    tau = sc.channel.lifetime
    floor = rydberg.min_gate_error(V, tau)
    echo(f"interaction V = {format_human(V)}, Rydberg lifetime = {format_human(tau)}")
    echo(f"entanglement-limited error floor eps_min = {floor:.4g}")
    protocols = []
    for name, entry in PROTOCOLS.items():
        err = rydberg.protocol_error(entry, V, tau)
        marker = "*" if name == sc.protocol else " "
        echo(f" {marker} {name:<27s} x{entry.overhead_ratio:<5g} eps = {err:.4g}")
        protocols.append(
            {"name": name, "overhead_ratio": entry.overhead_ratio, "error": err, "source": entry.source}
        )
    results = {
        "interaction_rad_per_s": V.magnitude,
        "lifetime_s": tau.magnitude,
        "min_gate_error": floor,
        "selected_protocol": sc.protocol,
        "protocols": protocols,
        "notes": list(sc.notes),
    }
    if args.trace:
        trace = rydberg.PopulationTrace.from_csv(args.trace)
        check = rydberg.entanglement_bound_check(trace, V)
        p_r = rydberg.integrated_population(trace)
        echo(
            f"trace {Path(args.trace).name}: P_R = {format_human(p_r)}, "
            f"2/|V| = {format_human(seconds(2 / abs(V.magnitude)))}, "
            f"margin {check.margin:.4g} -> {'satisfies' if check.satisfied else 'VIOLATES'} bound"
        )
        echo(f"note: {TRACE_NOTE}")
        results["trace"] = {
            "integrated_population_s": p_r.magnitude,
            "satisfied": check.satisfied,
            "margin": check.margin,
            "note": TRACE_NOTE,
        }
    out.json("bound", results)
    out.csv(
        "bound",
        ["protocol", "overhead_ratio", "error"],
        [("entanglement-floor", 1.0, floor)]
        + [(p["name"], p["overhead_ratio"], p["error"]) for p in protocols],
    )


def cmd_transport(args, sc, out):
    spec = sc.transport
    d = sc.code.distance
    budget = sc.round_trip_budget
    x_ho = transport.harmonic_length(spec)
    echo(
        f"{spec.species.name}, omega0 = {format_human(spec.trap_frequency)}, "
        f"x_ho = {format_human(x_ho)}"
    )
    distances = [parse_quantity(t) for t in args.distances] if args.distances else [
        sc.layout.array_pitch * d,
        sc.layout.array_pitch,
    ]
    rows = []
    echo(f"{'distance':>12s} {'dn/move':>9s} {'t_move':>12s} {'round trip':>12s}")
    for R in distances:
        R = require(R, Dimension.LENGTH, "distance")
        for per_move in (budget / 2, budget / 4):
            t = transport.minimal_jerk_time(spec, R, per_move)
            rows.append((R.magnitude, per_move, t.magnitude, 2 * t.magnitude))
            echo(
                f"{format_human(R):>12s} {per_move:>9.4g} {format_human(t):>12s} "
                f"{format_human(t * 2):>12s}"
            )
    temps = [
        (n, transport.temperature_from_quanta(n, spec.trap_frequency).magnitude)
        for n in TEMPERATURE_INSET_N
    ]
    echo("mean quanta -> 1D temperature: " + ", ".join(
        f"{n:g}: {format_human(UnitValue(T, Dimension.TEMPERATURE))}" for n, T in temps
    ))
    echo(f"note: {HEATING_NOTE}")
    out.json(
        "transport",
        {
            "species": spec.species.name,
            "mass_kg": spec.species.mass.magnitude,
            "omega0_rad_per_s": spec.omega0,
            "harmonic_length_m": x_ho.magnitude,
            "moves": [
                {"distance_m": r, "delta_n": dn, "move_time_s": t, "round_trip_time_s": rt}
                for r, dn, t, rt in rows
            ],
            "temperature": [{"mean_n": n, "temperature_K": T} for n, T in temps],
            "notes": [HEATING_NOTE],
        },
    )
    out.csv(
        "transport",
        ["distance_m", "delta_n_per_move", "move_time_s", "round_trip_time_s"],
        rows,
    )


def cmd_code(args, sc, out):
    model, code, p = sc.code_model, sc.code, sc.physical_error
    p_l = surfacecode.logical_error_rate(model, p, code.distance)
    shown = min(p_l, 1.0)
    qubits = surfacecode.physical_qubit_count(code)
    readout = surfacecode.repetition_readout_time(sc.readout)
    echo(f"p = {p:g}, threshold = {model.threshold:g}, d = {code.distance}")
    echo(f"p_L = {shown:.4g}  (1/p_L = {1 / shown:.4g})")
    if sc.target_inverse_pl is not None:
        need = surfacecode.min_distance_for_target(model, p, sc.target_inverse_pl)
        echo(f"smallest d reaching 1/p_L >= {sc.target_inverse_pl:g}: {need}")
    echo(f"{code.logical_count} logical qubits x (2d^2-1) = {qubits} physical qubits")
    echo(
        f"repetition readout (N={sc.readout.repetition_size}): {format_human(readout)} "
        f"vs single atom {format_human(sc.readout.single_atom_measure_time)}"
    )
    notes = [CLAMP_NOTE, READOUT_NOTE] + list(sc.notes)
    for note in notes:
        echo(f"note: {note}")
    results = {
        "p": p,
        "distance": code.distance,
        "logical_error_rate": p_l,
        "inverse_logical_error_rate": 1 / p_l,
        "logical_count": code.logical_count,
        "physical_qubits": qubits,
        "readout_time_s": readout.magnitude,
        "notes": notes,
    }
    if sc.target_inverse_pl is not None:
        results["target_inverse_pl"] = sc.target_inverse_pl
    out.json("code", results)
    out.csv(
        "code",
        ["p", "distance", "logical_error_rate", "physical_qubits", "readout_time_s"],
        [(p, code.distance, p_l, qubits, readout.magnitude)],
    )


def cmd_connectivity(args, sc, out):
    routing = args.routing or sc.routing
    reports = conn.compare_strategies(
        sc.code.distance,
        sc.timings,
        sc.layout,
        sc.transport,
        sc.grid,
        sc.round_trip_budget,
        parallel_factor=sc.parallel_factor,
        max_range=sc.max_range,
        routing=routing,
    )
    echo(f"logical CZ, d = {sc.code.distance}, {sc.grid.width}x{sc.grid.height} grid, {routing} routing")
    for rep in reports:
        if rep.error:
            echo(f"  {rep.strategy:<27s} FAILED: {rep.error}")
            continue
        echo(
            f"  {rep.strategy:<27s} neighbor {format_human(rep.neighbor_time):>11s}   "
            f"array average {format_human(rep.array_average_time):>11s}"
        )
        for note in rep.assumptions:
            if note.startswith("WARNING"):
                echo(f"      {note}")
    out.json(
        "connectivity",
        {
            "distance": sc.code.distance,
            "routing": routing,
            "strategies": [rep.to_dict() for rep in reports],
        },
    )
    out.csv(
        "connectivity",
        ["strategy", "neighbor_time_s", "array_average_time_s", "error"],
        [
            (
                rep.strategy,
                None if rep.neighbor_time is None else rep.neighbor_time.magnitude,
                None if rep.array_average_time is None else rep.array_average_time.magnitude,
                rep.error,
            )
            for rep in reports
        ],
    )


def _nisq(args, out, command):
    n_range = _float_range(args.n_range, "--n-range")
    eps_range = _float_range(args.eps_range, "--eps-range")
    cells = nisq.cost_grid(n_range, eps_range, args.resolution, args.n_spacing)
    echo(
        f"{len(cells)} cells, n in [{n_range[0]:g}, {n_range[1]:g}] ({args.n_spacing}), "
        f"epsilon in [{eps_range[0]:g}, {eps_range[1]:g}] (log)"
    )
    out.csv(command, ["n", "epsilon", "loglog_cost"], cells)
    out.json(
        command,
        {
            "n_range": list(n_range),
            "epsilon_range": list(eps_range),
            "resolution": args.resolution,
            "n_spacing": args.n_spacing,
            "cells": len(cells),
            "notes": ["unit prefactors in all scaling relations; model estimates only"],
        },
    )


def cmd_nisq_grid(args, sc, out):
    _nisq(args, out, "nisq-grid")


def cmd_figure(args, sc, out):
    if args.name == "fig2":
        _nisq(args, out, "figure fig2")
    elif args.name == "fig5":
        _fig5(args, sc, out)
    else:
        _fig8(args, sc, out)


def _fig5(args, sc, out):
    d = args.d or sc.code.distance
    t_cz = _axis(args.t_cz_range, Dimension.TIME, args.resolution, "--t-cz-range")
    t_beam = _axis(args.t_beam_range, Dimension.TIME, args.resolution, "--t-beam-range")
    rows = []
    for a in t_cz:
        for b in t_beam:
            timings = conn.GateTimings(seconds(a), seconds(b), seconds(0.0))
            t = conn.longrange_transversal_time(d, timings, sc.parallel_factor)
            rows.append((a, b, t.magnitude))
    echo(f"fig5: sequential transversal CZ time, d = {d}, {len(rows)} cells")
    out.csv("figure fig5", ["t_cz_s", "t_beam_s", "t_gate_s"], rows)
    out.json("figure fig5", {"distance": d, "cells": len(rows)})


def _fig8(args, sc, out):
    spec = sc.transport
    Rs = _axis(args.R_range, Dimension.LENGTH, args.resolution, "--R-range")
    lo, hi = _float_range(args.budget_range, "--budget-range")
    budgets = np.geomspace(lo, hi, args.resolution)
    rows = []
    for R in Rs:
        for budget in budgets:
            t = transport.minimal_jerk_time(spec, meters(float(R)), budget / 2)
            rows.append((float(R), float(budget), 2 * t.magnitude))
    inset = [
        (n, transport.temperature_from_quanta(n, spec.trap_frequency).magnitude)
        for n in np.geomspace(0.01, 10.0, args.resolution)
    ]
    d = args.d or sc.code.distance
    R_ref = sc.layout.array_pitch * d
    t_ref = transport.minimal_jerk_time(spec, R_ref, sc.round_trip_budget / 2) * 2
    echo(
        f"fig8: round-trip minimal-jerk time, {len(rows)} cells; d = {d}: "
        f"R = {format_human(R_ref)}, budget {sc.round_trip_budget:g} -> {format_human(t_ref)}"
    )
    out.csv("figure fig8", ["R_m", "round_trip_budget", "round_trip_time_s"], rows)
    if out.args.csv:
        main = Path(out.args.csv)
        inset_path = main.with_name(f"{main.stem}_inset{main.suffix or '.csv'}")
        out.csv("figure fig8 inset", ["mean_n", "temperature_K"], inset, path=inset_path)
    out.json(
        "figure fig8",
        {
            "distance": d,
            "reference_distance_m": R_ref.magnitude,
            "reference_round_trip_time_s": t_ref.magnitude,
            "cells": len(rows),
            "inset": [{"mean_n": float(n), "temperature_K": T} for n, T in inset],
        },
    )


def _split_range(text: str, flag: str) -> tuple[str, str]:
    parts = text.split(":")
    if len(parts) != 2:
        raise UsageError(f"{flag} expects LOW:HIGH, got {text!r}")
    return parts[0], parts[1]


def _float_range(text: str, flag: str) -> tuple[float, float]:
    lo, hi = _split_range(text, flag)
    try:
        return float(lo), float(hi)
    except ValueError:
        raise UsageError(f"{flag} expects numbers, got {text!r}") from None


def _axis(text: str, dimension: Dimension, count: int, flag: str) -> np.ndarray:
    lo, hi = (require(t, dimension, flag).magnitude for t in _split_range(text, flag))
    if not (0 < lo < hi) or count < 2:
        raise ConfigError(f"{flag} needs 0 < low < high and resolution >= 2")
    return np.linspace(lo, hi, count)


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", metavar="PATH", help="scenario TOML file (default: bundled paper-defaults.toml)")
    common.add_argument("--json", metavar="PATH", help="write the JSON report here")
    common.add_argument("--csv", metavar="PATH", help="write the CSV table here")
    common.add_argument(
        "--set",
        metavar="SECTION.KEY=VALUE",
        action="append",
        default=[],
        help="override one scenario value (repeatable)",
    )

    parser = argparse.ArgumentParser(
        prog="atomarch", description="Neutral-atom architecture resource estimates."
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="SUBCOMMAND")

    p = sub.add_parser("bound", parents=[common], help="Rydberg gate error floor and protocol errors")
    p.add_argument("--trace", metavar="CSV", help="population trace (t_s,p1,p2,p12) to check")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("transport", parents=[common], help="minimal-jerk move times")
    p.add_argument("--distance", dest="distances", action="append", metavar="QUANTITY")
    p.set_defaults(func=cmd_transport)

    p = sub.add_parser("code", parents=[common], help="surface-code error rate and sizing")
    p.set_defaults(func=cmd_code)

    p = sub.add_parser("connectivity", parents=[common], help="compare logical CZ strategies")
    p.add_argument("--routing", choices=("pairwise", "zone"))
    p.set_defaults(func=cmd_connectivity)

    nisq_flags = argparse.ArgumentParser(add_help=False)
    nisq_flags.add_argument("--n-range", default="10:1000")
    nisq_flags.add_argument("--eps-range", default="1e-4:1e-2")
    nisq_flags.add_argument("--n-spacing", choices=("linear", "log"), default="linear")

    p = sub.add_parser("nisq-grid", parents=[common, nisq_flags], help="classical cost contour grid")
    p.add_argument("--resolution", type=int, default=50)
    p.set_defaults(func=cmd_nisq_grid)

    p = sub.add_parser("figure", parents=[common, nisq_flags], help="figure data grids")
    p.add_argument("name", choices=("fig2", "fig5", "fig8"))
    p.add_argument("--d", type=int)
    p.add_argument("--resolution", type=int, default=40)
    p.add_argument("--t-cz-range", default="0.1us:1us")
    p.add_argument("--t-beam-range", default="0.1us:2us")
    p.add_argument("--R-range", default="10um:200um")
    p.add_argument("--budget-range", default="0.01:1")
    p.set_defaults(func=cmd_figure)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on usage errors
    try:
        scenario = load_scenario(args.scenario, args.set)
        out = Output(args, scenario)
        args.func(args, scenario, out)
        out.commit()
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"atomarch: error: {exc}", file=sys.stderr)
        return 2
    except ModelError as exc:
        print(f"atomarch: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
