import dataclasses
import itertools
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from atomarch.connectivity import (
    GateTimings,
    LayoutParams,
    LogicalGrid,
    Phase,
    StrategyReport,
    average_logical_gate_time,
    compare_strategies,
    crosstalk_eta,
    lattice_surgery_time,
    longrange_report,
    longrange_transversal_time,
    manhattan_stats,
    min_pair_pitch,
    transport_transversal_time,
    zone_stats,
)
from atomarch.errors import ConfigError, DomainError
from atomarch.transport import TransportSpec, minimal_jerk_time
from atomarch.units import quantity, seconds
from conftest import q

TIMINGS = GateTimings(q("0.46 us"), q("0.5 us"), q("1 ms"))
LAYOUT = LayoutParams(q("1.4 um"), q("6.44 um"))
GRID = LogicalGrid(10, 10, (4.5, -1.0))


def brute_pairs(w, h, exponent):
    sites = list(itertools.product(range(w), range(h)))
    vals = [
        (abs(a[0] - b[0]) + abs(a[1] - b[1])) ** exponent
        for a in sites
        for b in sites
        if a != b
    ]
    return sum(vals) / len(vals)


def brute_zone(w, h, zone, exponent):
    vals = [(abs(x - zone[0]) + abs(y - zone[1])) ** exponent for x in range(w) for y in range(h)]
    return sum(vals) / len(vals)


def sum_matches(report):
    return report.neighbor_time.magnitude == sum(p.duration.magnitude for p in report.breakdown)


# --- long range ---------------------------------------------------------------

def test_longrange_serial():
    assert longrange_transversal_time(10, TIMINGS).to("us") == pytest.approx(96.0, rel=1e-12)
    assert longrange_transversal_time(10, TIMINGS).to("us") == pytest.approx(90, rel=0.1)


def test_longrange_full_parallel():
    assert longrange_transversal_time(10, TIMINGS, 100).to("us") == pytest.approx(0.96, rel=1e-12)
    assert longrange_transversal_time(10, TIMINGS, 30).to("us") == pytest.approx(4 * 0.96, rel=1e-12)


def test_longrange_slow_beam():
    slow = GateTimings(q("0.46 us"), q("2 us"), q("1 ms"))
    assert longrange_transversal_time(10, slow).to("us") == pytest.approx(246.0, rel=1e-12)


def test_longrange_range_warning():
    ok = longrange_report(10, TIMINGS, 1, q("1.4 um"), q("14 um"))
    assert not any(n.startswith("WARNING") for n in ok.assumptions)
    far = longrange_report(15, TIMINGS, 1, q("1.4 um"), q("14 um"))
    assert any(n.startswith("WARNING") for n in far.assumptions)
    assert sum_matches(far)


# --- crosstalk ----------------------------------------------------------------

def test_eta_prefactor_at_unit_ratio():
    layout = LayoutParams(q("1.4 um"), q("1.4 um"))
    assert crosstalk_eta(layout) == pytest.approx(4 * 20 * 7.6 / (2 * math.pi), rel=1e-14)
    assert crosstalk_eta(layout) == pytest.approx(96.8, abs=0.05)


def test_eta_at_bound_ratio():
    layout = LayoutParams(q("1.4 um"), quantity(4.616 * 1.4, "um"))
    assert crosstalk_eta(layout) == pytest.approx(0.01, rel=0.005)


def test_eta_sixth_power():
    far = dataclasses.replace(LAYOUT, array_pitch=LAYOUT.array_pitch * 2)
    assert crosstalk_eta(far) == pytest.approx(crosstalk_eta(LAYOUT) / 64, rel=1e-14)


def test_min_pitch():
    ratio = min_pair_pitch(LAYOUT) / LAYOUT.gate_pair_spacing
    assert ratio == pytest.approx(4.616, abs=5e-4)
    assert round(ratio, 1) == 4.6
    assert (4.6 * LAYOUT.gate_pair_spacing).to("um") == pytest.approx(6.44)
    loose = dataclasses.replace(LAYOUT, eta_max=0.64)
    assert min_pair_pitch(loose) / min_pair_pitch(LAYOUT) == pytest.approx(0.5, rel=1e-14)


@given(st.floats(1, 100), st.floats(1, 20), st.floats(1e-4, 0.1), st.floats(0.5, 5))
def test_eta_at_min_pitch_is_eta_max(ratio, area, eta_max, r_g):
    base = LayoutParams(quantity(r_g, "um"), quantity(r_g, "um"), ratio, area, eta_max)
    at_bound = dataclasses.replace(base, array_pitch=max(min_pair_pitch(base), base.gate_pair_spacing))
    if min_pair_pitch(base) >= base.gate_pair_spacing:
        assert crosstalk_eta(at_bound) == pytest.approx(eta_max, rel=1e-12)


def test_layout_validation():
    with pytest.raises(DomainError):
        LayoutParams(q("2 um"), q("1 um"))
    with pytest.raises(DomainError):
        LayoutParams(q("1 um"), q("2 um"), eta_max=0)


# --- transport strategy -------------------------------------------------------

def test_transport_neighbor_gate(cs_spec):
    rep = transport_transversal_time(10, LAYOUT, cs_spec, TIMINGS, 0.1)
    assert rep.neighbor_time.to("us") == pytest.approx(270, rel=0.02)
    assert rep.neighbor_time.to("us") == pytest.approx(272.85, abs=0.01)
    assert [p.name for p in rep.breakdown] == ["move out", "Rydberg pulse", "move back"]
    assert sum_matches(rep)
    assert any(n.startswith("WARNING") for n in rep.assumptions)  # 6.44 < unrounded 6.463


def test_transport_budget_scaling(cs_spec):
    a = transport_transversal_time(10, LAYOUT, cs_spec, TIMINGS, 0.1)
    b = transport_transversal_time(10, LAYOUT, cs_spec, TIMINGS, 6.4)
    assert b.breakdown[0].duration / a.breakdown[0].duration == pytest.approx(0.5, rel=1e-13)


def test_transport_d5(cs_spec):
    rep = transport_transversal_time(5, LAYOUT, cs_spec, TIMINGS, 0.1)
    assert rep.breakdown[0].duration.to("us") == pytest.approx(108.1, abs=0.05)
    assert rep.neighbor_time.to("us") == pytest.approx(2 * 108.096 + 0.46, abs=0.01)


def test_transport_monotone(cs_spec):
    times = [transport_transversal_time(d, LAYOUT, cs_spec, TIMINGS, 0.1).neighbor_time.magnitude for d in range(3, 20)]
    assert times == sorted(times)
    budgets = [transport_transversal_time(10, LAYOUT, cs_spec, TIMINGS, b).neighbor_time.magnitude for b in (0.01, 0.1, 1)]
    assert budgets == sorted(budgets, reverse=True)


# --- lattice surgery ----------------------------------------------------------

def test_ls_in_place():
    rep = lattice_surgery_time(10, TIMINGS, "in-place")
    assert rep.neighbor_time.to("ms") == pytest.approx(20.0192, rel=1e-12)
    assert sum_matches(rep)


def test_ls_transport(cs_spec):
    rep = lattice_surgery_time(10, TIMINGS, "transport", cs_spec, q("6.44 um"), 0.1)
    t_move = minimal_jerk_time(cs_spec, q("6.44 um"), 0.025).magnitude
    assert rep.neighbor_time.magnitude == pytest.approx(2 * 0.46e-6 + 4 * t_move + 20e-3, rel=1e-12)
    assert rep.neighbor_time.to("ms") == pytest.approx(20.3, rel=0.005)
    assert sum_matches(rep)


def test_ls_measurement_free_limit():
    free = GateTimings(q("0.46 us"), q("0.5 us"), q("0 ms"))
    assert lattice_surgery_time(10, free).neighbor_time.to("us") == pytest.approx(19.2, rel=1e-12)


def test_ls_transport_needs_kinematics():
    with pytest.raises(ConfigError, match="spec"):
        lattice_surgery_time(10, TIMINGS, "transport")
    with pytest.raises(ConfigError):
        lattice_surgery_time(10, TIMINGS, "teleport")


# --- routing statistics -------------------------------------------------------

def test_manhattan_10x10():
    assert manhattan_stats(LogicalGrid(10, 10), 1) == pytest.approx(20 / 3, rel=1e-14)
    assert manhattan_stats(LogicalGrid(10, 10), 1 / 3) == pytest.approx(1.82, abs=0.005)
    assert manhattan_stats(LogicalGrid(10, 10), 1 / 3) == pytest.approx(brute_pairs(10, 10, 1 / 3), rel=1e-13)


def test_manhattan_two_sites():
    assert manhattan_stats(LogicalGrid(2, 1), 1) == 1.0


@pytest.mark.parametrize("n", [2, 3, 5, 10, 17])
def test_manhattan_closed_form(n):
    closed = 2 * ((n * n - 1) / (3 * n)) * n * n / (n * n - 1)
    assert manhattan_stats(LogicalGrid(n, n), 1) == pytest.approx(closed, rel=1e-13)


@given(st.integers(1, 9), st.integers(1, 9), st.sampled_from([1 / 3, 0.5, 1.0, 2.0]))
def test_manhattan_matches_enumeration(w, h, exponent):
    if w * h < 2:
        return
    grid = LogicalGrid(w, h)
    assert manhattan_stats(grid, exponent) == pytest.approx(brute_pairs(w, h, exponent), rel=1e-12)
    # Jensen: E[D^(1/3)] <= E[D]^(1/3)
    assert manhattan_stats(grid, 1 / 3) <= manhattan_stats(grid, 1) ** (1 / 3) + 1e-12


def test_manhattan_single_site():
    with pytest.raises(DomainError):
        manhattan_stats(LogicalGrid(1, 1), 1)


def test_zone_edge_middle():
    assert zone_stats(GRID, 1 / 3) == pytest.approx(1.96, abs=0.02)
    assert zone_stats(GRID, 1 / 3) == pytest.approx(brute_zone(10, 10, (4.5, -1), 1 / 3), rel=1e-13)


def test_zone_on_site_and_trivial():
    g = LogicalGrid(4, 3, (1, 2))
    assert zone_stats(g, 1) == pytest.approx(brute_zone(4, 3, (1, 2), 1), rel=1e-14)
    assert zone_stats(LogicalGrid(1, 1, (0, 1)), 1 / 3) == 1.0
    with pytest.raises(ConfigError):
        zone_stats(LogicalGrid(3, 3), 1)


# --- array averages -----------------------------------------------------------

def neighbor_270():
    t = seconds(135e-6)
    return StrategyReport(
        "transport",
        seconds(270e-6),
        seconds(270e-6),
        (Phase("move out", t, True), Phase("move back", t, True)),
    )


def test_average_pairwise():
    avg = average_logical_gate_time(neighbor_270(), LogicalGrid(10, 10), "pairwise")
    assert avg.to("us") == pytest.approx(490, rel=0.02)


def test_average_zone():
    avg = average_logical_gate_time(neighbor_270(), GRID, "zone")
    assert avg.to("us") == pytest.approx(530, rel=0.02)


def test_average_unit_grid_and_fixed_phases(cs_spec):
    rep = transport_transversal_time(10, LAYOUT, cs_spec, TIMINGS, 0.1)
    assert average_logical_gate_time(rep, LogicalGrid(1, 2)) == rep.neighbor_time
    ls = lattice_surgery_time(10, TIMINGS)
    assert average_logical_gate_time(ls, GRID, "zone") == ls.neighbor_time
    with pytest.raises(ConfigError):
        average_logical_gate_time(rep, LogicalGrid(10, 10), "zone")


# --- comparison ---------------------------------------------------------------

def test_compare_paper_defaults(cs_spec):
    reports = compare_strategies(10, TIMINGS, LAYOUT, cs_spec, GRID, 0.1, max_range=q("14 um"))
    order = [r.strategy for r in reports]
    assert order == ["long-range", "transport", "lattice-surgery-in-place", "lattice-surgery-transport"]
    by = {r.strategy: r for r in reports}
    assert by["long-range"].neighbor_time.to("us") == pytest.approx(96)
    assert by["transport"].neighbor_time.to("us") == pytest.approx(273, abs=0.5)
    assert by["transport"].array_average_time.to("us") == pytest.approx(490, rel=0.02)
    assert by["lattice-surgery-in-place"].neighbor_time.to("ms") == pytest.approx(20.02, rel=1e-3)
    assert all(sum_matches(r) for r in reports)


def test_compare_fast_measurement_reorders(cs_spec):
    fast = GateTimings(q("0.46 us"), q("0.5 us"), q("1 us"))
    reports = compare_strategies(10, fast, LAYOUT, cs_spec, GRID, 0.1)
    by = {r.strategy: r for r in reports}
    assert by["lattice-surgery-in-place"].neighbor_time.to("us") == pytest.approx(39.2, rel=1e-12)
    assert reports[0].strategy == "lattice-surgery-in-place"


def test_compare_d3_desk_check(cs_spec):
    reports = {r.strategy: r for r in compare_strategies(3, TIMINGS, LAYOUT, cs_spec, GRID, 0.1)}
    assert len(reports) == 4
    assert reports["long-range"].neighbor_time.magnitude == pytest.approx(9 * 0.96e-6)
    t3 = minimal_jerk_time(cs_spec, LAYOUT.array_pitch * 3, 0.05).magnitude
    assert reports["transport"].neighbor_time.magnitude == pytest.approx(2 * t3 + 0.46e-6)
    assert reports["lattice-surgery-in-place"].neighbor_time.magnitude == pytest.approx(6 * (0.96e-6 + 1e-3))


def test_compare_isolates_failures(cs_spec):
    grid = LogicalGrid(10, 10)  # no zone
    reports = compare_strategies(10, TIMINGS, LAYOUT, cs_spec, grid, 0.1, routing="zone")
    failed = [r for r in reports if r.error]
    assert [r.strategy for r in failed] == ["transport"]
    assert reports[-1].strategy == "transport"
    assert failed[0].neighbor_time is None
    assert all(r.neighbor_time is not None for r in reports if not r.error)


def test_report_dict_shape(cs_spec):
    rep = transport_transversal_time(10, LAYOUT, cs_spec, TIMINGS, 0.1)
    d = rep.to_dict()
    assert set(d) == {"strategy", "neighbor_time_s", "array_average_time_s", "breakdown", "assumptions", "error"}
    assert d["breakdown"][0] == {
        "phase": "move out",
        "duration_s": rep.breakdown[0].duration.magnitude,
        "scales_with_distance": True,
    }
