"""Structural certification of configurations.

Checks the four defining identities of a solved configuration (zero mean,
sum of squares N-1, antisymmetry x_n = -x_{N+1-n}, strict decrease), the
mesh bound delta_N <= 2/sqrt(log N), the lower bound x_1 >= sqrt(log N)/2,
the interworld Hamiltonian equality H = U + V = 2(N-1), and the
correspondence between configuration values and normal quantiles.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import NamedTuple

import mpmath as mp
import numpy as np

from .errors import DegenerateConfigurationError, InvalidInputError
from .solver import Configuration, normal_upper_quantile


@dataclass(frozen=True)
class PropertyReport:
    """Measured identity defects for one configuration.

    ``checks`` maps each property name to its pass flag at ``tolerance``:
    zero_mean and sum_of_squares are compared to tolerance*N, symmetry to
    tolerance, monotone/mesh_bound/x1_lower_bound are exact comparisons.
    """

    N: int
    sum: float
    sum_of_squares_minus: float
    max_symmetry_defect: float
    monotone: bool
    mesh: float
    mesh_bound: float
    x1_lower_bound_ok: bool
    tolerance: float
    checks: dict[str, bool]

    @property
    def all_ok(self) -> bool:
        return all(self.checks.values())

    def failed(self) -> list[str]:
        return [name for name, ok in self.checks.items() if not ok]


@dataclass(frozen=True)
class HamiltonianReport:
    V: float  # classical potential, sum of squares
    U: float  # interworld potential
    H: float  # U + V
    ground_state_energy: float  # 2(N-1)
    defect: float  # |H - 2(N-1)|


class QuantilePoint(NamedTuple):
    n: int
    x_n: float
    q_n: float
    deviation: float


def verify_properties(cfg: Configuration, tol: float = 1e-8) -> PropertyReport:
    """Measure all structural identities of cfg; reports, never raises."""
    n = cfg.N
    with mp.workdps(cfg.precision_digits):
        total = cfg.cumsums[-1]
        sq = sum(v * v for v in cfg.values) - (n - 1)
        defect = max(abs(cfg.values[k] + cfg.values[n - 1 - k]) for k in range(n))
        mesh = max(
            cfg.values[k] - cfg.values[k + 1] for k in range(n - 1)
        )
    monotone = all(cfg.values[k] > cfg.values[k + 1] for k in range(n - 1))
    mesh_f = float(mesh)
    mesh_bound = 2.0 / math.sqrt(math.log(n))
    x1_ok = float(cfg.x1) >= math.sqrt(math.log(n)) / 2.0
    checks = {
        "zero_mean": abs(float(total)) <= tol * n,
        "sum_of_squares": abs(float(sq)) <= tol * n,
        "symmetry": float(defect) <= tol,
        "monotone": monotone,
        "mesh_bound": mesh_f <= mesh_bound,
        "x1_lower_bound": x1_ok,
    }
    return PropertyReport(
        N=n,
        sum=float(total),
        sum_of_squares_minus=float(sq),
        max_symmetry_defect=float(defect),
        monotone=monotone,
        mesh=mesh_f,
        mesh_bound=mesh_bound,
        x1_lower_bound_ok=x1_ok,
        tolerance=tol,
        checks=checks,
    )


def _sequence_of(cfg_or_values) -> Sequence:
    if isinstance(cfg_or_values, Configuration):
        return cfg_or_values.values
    return list(cfg_or_values)


def hamiltonian(cfg_or_values) -> HamiltonianReport:
    """Energy split H = U + V for a strictly decreasing configuration.

    V is the sum of squares; U sums the squared differences of reciprocal
    gaps, with the boundary conventions x_0 = +inf and x_{N+1} = -inf
    entering as exactly zero reciprocal terms.  Accepts a solved
    Configuration (evaluated at its working precision) or any strictly
    decreasing sequence of numbers.
    """
    xs = _sequence_of(cfg_or_values)
    n = len(xs)
    if n < 2:
        raise InvalidInputError("need at least 2 values")
    gaps = [xs[k] - xs[k + 1] for k in range(n - 1)]
    for k, g in enumerate(gaps):
        if g == 0:
            raise DegenerateConfigurationError(
                f"repeated value at positions {k + 1}, {k + 2}"
            )
        if g < 0:
            raise InvalidInputError("values must be strictly decreasing")
    # recips[k] = 1/(x_k - x_{k+1}) for k = 1..N-1, zero at both ends
    recips = [0 * xs[0]] + [1 / g for g in gaps] + [0 * xs[0]]
    u = sum((recips[k] - recips[k + 1]) ** 2 for k in range(n))
    v = sum(x * x for x in xs)
    h = u + v
    energy = 2.0 * (n - 1)
    return HamiltonianReport(
        V=float(v), U=float(u), H=float(h),
        ground_state_energy=energy, defect=abs(float(h) - energy),
    )


def quantile_deviation(cfg: Configuration) -> list[QuantilePoint]:
    """Compare each x_n to the upper (n-1/2)/N standard-normal quantile.

    The half offset matches the empirical accuracy of the 1/(2N) quantile
    as a starting guess for x_1.
    """
    n = cfg.N
    out = []
    for k in range(1, n + 1):
        q = float(normal_upper_quantile((k - 0.5) / n, 30))
        x = float(cfg.values[k - 1])
        out.append(QuantilePoint(n=k, x_n=x, q_n=q, deviation=x - q))
    return out
