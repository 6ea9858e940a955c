"""Distances between the configuration's empirical law, its zero-bias
density, and the standard normal, with the matching upper/lower bounds.

All Wasserstein integrals are evaluated in closed form.  Against the
normal, the step-CDF difference is integrated piecewise between atoms
using int Phi = x Phi(x) + phi(x), with analytic tails
int_{x1}^inf (1 - Phi) = phi(x1) - x1 (1 - Phi(x1)).  Against the
zero-bias density both CDFs are piecewise linear/step, so each segment
integral of |difference| is elementary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from .errors import InvariantViolationError
from .solver import Configuration
from .zero_bias import ZeroBiasDensity, build_density, density_at


@dataclass(frozen=True)
class DistanceReport:
    N: int
    dW_to_normal: float
    dW_empirical_to_zerobias: float
    stein_upper: float      # 4 x1 / (N-1)
    sawtooth_lower: float   # x1 / [2(N-1)]
    mesh_upper: float       # 4 / sqrt(log N)
    ks_to_normal: float
    sup_density_gap: float  # max over grid of |y_N - phi|


def _int_phi_cdf(a: float, b: float) -> float:
    """integral of Phi over [a, b] via antiderivative x Phi(x) + phi(x)."""
    ia = a * norm.cdf(a) + norm.pdf(a)
    ib = b * norm.cdf(b) + norm.pdf(b)
    return ib - ia


def _segment_abs_diff(a: float, b: float, c: float) -> float:
    """integral over [a, b] of |c - Phi(x)| for constant c in [0, 1]."""
    if a >= b:
        return 0.0
    if c <= 0.0:
        return _int_phi_cdf(a, b)
    if c >= 1.0:
        return c * (b - a) - _int_phi_cdf(a, b)
    xc = norm.ppf(c)
    if xc <= a:  # Phi >= c on the whole segment
        return _int_phi_cdf(a, b) - c * (b - a)
    if xc >= b:  # Phi <= c
        return c * (b - a) - _int_phi_cdf(a, b)
    left = c * (xc - a) - _int_phi_cdf(a, xc)
    right = _int_phi_cdf(xc, b) - c * (b - xc)
    return left + right


def wasserstein_to_normal(cfg: Configuration) -> float:
    """d_W between the empirical law of cfg and N(0,1): exact piecewise
    integral of |step CDF - Phi| plus analytic tails."""
    atoms = np.sort(cfg.as_floats())
    n = cfg.N
    # lower tail: integral of Phi up to the smallest atom (F_N = 0 there)
    total = atoms[0] * norm.cdf(atoms[0]) + norm.pdf(atoms[0])
    for i in range(1, n):
        total += _segment_abs_diff(atoms[i - 1], atoms[i], i / n)
    top = atoms[-1]
    total += norm.pdf(top) - top * (1.0 - norm.cdf(top))  # upper tail
    return float(total)


def wasserstein_empirical_to_zerobias(cfg: Configuration) -> float:
    """d_W between the empirical law and the zero-bias density.

    On the segment between ascending atoms i and i+1 the CDF difference
    runs linearly from (N-i)/(N(N-1)) down to -i/(N(N-1)); integrating
    the absolute value and summing gives
    sum_i gap_i ((N-i)^2 + i^2) / (2 N^2 (N-1)).
    """
    n = cfg.N
    gaps = cfg.gaps()[::-1]  # ascending order
    i = np.arange(1, n)
    weights = ((n - i) ** 2 + i ** 2).astype(float)
    return float(np.dot(gaps, weights) / (2.0 * n * n * (n - 1)))


def stein_upper_bound(cfg: Configuration) -> float:
    """Coupling-based upper bound 4 x1 / (N-1) on d_W to the normal."""
    return 4.0 * float(cfg.x1) / (cfg.N - 1)


def sawtooth_at(cfg: Configuration, x) -> float:
    """The 1-Lipschitz sawtooth vanishing at every atom and peaking at
    (x_n - x_{n+1})/2 at interval midpoints; zero outside the support."""
    asc = np.sort(cfg.as_floats())
    xv = np.asarray(x, dtype=float)
    idx = np.clip(np.searchsorted(asc, xv, side="right"), 1, len(asc) - 1)
    lo = asc[idx - 1]
    hi = asc[idx]
    inside = (xv >= asc[0]) & (xv <= asc[-1])
    tent = np.minimum(xv - lo, hi - xv)
    out = np.where(inside, np.maximum(tent, 0.0), 0.0)
    return float(out) if np.ndim(x) == 0 else out


def sawtooth_lower_bound(cfg: Configuration) -> float:
    """x1 / [2(N-1)]: the sawtooth's mean under the zero-bias density,
    a lower bound on d_W(empirical, zero-bias).

    Also evaluates that mean directly (per-interval integral of the tent
    against the interval height) and checks agreement to 1e-10.
    """
    n = cfg.N
    bound = float(cfg.x1) / (2.0 * (n - 1))
    dens = build_density(cfg)
    gaps = cfg.gaps()
    direct = float(np.dot(dens.heights, gaps * gaps / 4.0))
    if not math.isclose(direct, bound, rel_tol=1e-10, abs_tol=1e-12):
        raise InvariantViolationError(
            f"sawtooth expectation {direct!r} != x1/[2(N-1)] = {bound!r}",
            failures=["sawtooth_expectation"],
        )
    return bound


def ks_distance_to_normal(cfg: Configuration) -> float:
    """sup_x |F_N(x) - Phi(x)|, attained at an atom (one-sided limits)."""
    atoms = np.sort(cfg.as_floats())
    n = cfg.N
    cdf = norm.cdf(atoms)
    steps_hi = np.arange(1, n + 1) / n
    steps_lo = np.arange(0, n) / n
    return float(np.max(np.maximum(np.abs(steps_hi - cdf), np.abs(steps_lo - cdf))))


def sup_density_gap(cfg: Configuration, points_per_interval: int = 10,
                    tail_points: int = 50) -> float:
    """max |y_N - phi| over atoms, interior grid points, and a tail grid
    out to +-(x1 + 1)."""
    dens = build_density(cfg)
    bp = dens.breakpoints[::-1]
    xs = [bp]
    for i in range(len(bp) - 1):
        xs.append(np.linspace(bp[i], bp[i + 1], points_per_interval + 2)[1:-1])
    x1 = float(cfg.x1)
    xs.append(np.linspace(x1, x1 + 1.0, tail_points))
    xs.append(np.linspace(-x1 - 1.0, -x1, tail_points))
    grid = np.concatenate(xs)
    return float(np.max(np.abs(density_at(dens, grid) - norm.pdf(grid))))


def distance_report(cfg: Configuration) -> DistanceReport:
    return DistanceReport(
        N=cfg.N,
        dW_to_normal=wasserstein_to_normal(cfg),
        dW_empirical_to_zerobias=wasserstein_empirical_to_zerobias(cfg),
        stein_upper=stein_upper_bound(cfg),
        sawtooth_lower=sawtooth_lower_bound(cfg),
        mesh_upper=4.0 / math.sqrt(math.log(cfg.N)),
        ks_to_normal=ks_distance_to_normal(cfg),
        sup_density_gap=sup_density_gap(cfg),
    )
