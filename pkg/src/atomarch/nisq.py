"""NISQ cost landscape: observable fidelity versus classical simulation cost.

A tensor-network estimate of an expectation value costs C = 2**A with
A = sqrt(n) * t for a square array of n qubits run to depth t. Taking the
useful depth to be t = 1/epsilon gives A = sqrt(n)/epsilon. All "~" scaling
relations are used as equalities with unit prefactors, so the numbers are
model estimates only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from atomarch.errors import ConfigError, DomainError

LOG10_2 = math.log10(2.0)


@dataclass(frozen=True)
class CostPoint:
    qubit_count: float
    gate_infidelity: float
    circuit_volume: float | None = None

    def __post_init__(self):
        if not self.qubit_count >= 1:
            raise DomainError(f"qubit count must be >= 1, got {self.qubit_count}")
        if not 0 < self.gate_infidelity < 1:
            raise DomainError(f"gate infidelity must lie in (0, 1), got {self.gate_infidelity}")


def effective_fidelity(epsilon: float, v_eff: float) -> float:
    """exp(-epsilon * V_eff), the damping of a noisy expectation value."""
    if epsilon < 0 or v_eff < 0:
        raise DomainError("epsilon and V_eff must be non-negative")
    return math.exp(-epsilon * v_eff)


def cost_exponent(point: CostPoint, depth: float | None = None) -> float:
    """Base-2 exponent A of the classical cost.

    ``depth`` overrides the default t = 1/epsilon for fixed-depth circuits.
    """
    if depth is None:
        return math.sqrt(point.qubit_count) / point.gate_infidelity
    if not depth > 0:
        raise DomainError("circuit depth must be positive")
    return math.sqrt(point.qubit_count) * depth


def double_log_cost(point: CostPoint) -> float:
    """log10(log10(C)) = log10(A * log10 2)."""
    inner = cost_exponent(point) * LOG10_2
    if not inner > 1:
        raise DomainError(
            f"cost too small for double-log scale (log10 C = {inner:.4g} <= 1)"
        )
    return math.log10(inner)


def _axis(lo: float, hi: float, count: int, log: bool, name: str) -> np.ndarray:
    if not (0 < lo < hi) or not (math.isfinite(lo) and math.isfinite(hi)):
        raise ConfigError(f"{name} range must satisfy 0 < low < high, got {lo}:{hi}")
    if count < 2:
        raise ConfigError(f"{name} resolution must be at least 2")
    return np.geomspace(lo, hi, count) if log else np.linspace(lo, hi, count)


def cost_grid(
    n_range: tuple[float, float],
    epsilon_range: tuple[float, float],
    resolution: int | tuple[int, int],
    n_spacing: str = "linear",
) -> list[tuple[float, float, float]]:
    """Row-major (n, epsilon, double_log_cost) cells, n outer, epsilon log-spaced inner.

    ``n`` is treated as continuous so the grid can be log-spaced.
    """
    if n_spacing not in ("linear", "log"):
        raise ConfigError(f"n spacing must be 'linear' or 'log', got {n_spacing!r}")
    n_res, e_res = (resolution, resolution) if isinstance(resolution, int) else resolution
    ns = _axis(*n_range, n_res, n_spacing == "log", "n")
    eps = _axis(*epsilon_range, e_res, True, "epsilon")
    if ns[0] < 1 or eps[-1] >= 1:
        raise ConfigError("grid needs n >= 1 and epsilon < 1")
    return [
        (float(n), float(e), double_log_cost(CostPoint(float(n), float(e))))
        for n in ns
        for e in eps
    ]
