"""Piecewise-constant zero-bias density of a configuration and its
coupling with the empirical distribution.

For a solved configuration the density y_N places mass 1/(N-1) uniformly
on each interval between successive values; its height on (x_{n+1}, x_n)
is S_n/(N-1) = 1/[(N-1)(x_n - x_{n+1})].  Splitting each interval's mass
between its two endpoints so that every atom collects exactly 1/N yields
a coupling (X, X_tilde) with X ~ atoms, X_tilde ~ y_N and |X - X_tilde|
never exceeding the containing interval's length.

Interval mass splits, counting intervals outward from zero with L toward
zero and R away from it: L_j = (2j-1)/(2N) - (j-1)/(N-1) and
R_j = 1/(N-1) - L_j.  For odd N the count j is integral (the first
interval's L_1 = 1/(2N) feeds the median atom at 0).  For even N the
innermost interval straddles zero and is split in half at 0, one half per
adjacent atom; the remaining intervals use the same L/R expressions at
half-integer counts j = k + 1/2.  (Integral counts would over-assign the
innermost atoms, breaking the exact-1/N property; the half-integer offset
is the unique choice consistent with it, verified by exact rational
arithmetic in the tests.)
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DegenerateConfigurationError, InvalidInputError
from .solver import Configuration


@dataclass(frozen=True)
class ZeroBiasDensity:
    """breakpoints: the N configuration values, decreasing.
    heights[i]: density on (breakpoints[i+1], breakpoints[i]), i 0-based.
    masses[i]: interval mass, exactly 1/(N-1) each.
    """

    breakpoints: np.ndarray
    heights: np.ndarray
    masses: np.ndarray

    @property
    def N(self) -> int:
        return len(self.breakpoints)

    def support(self) -> tuple[float, float]:
        return float(self.breakpoints[-1]), float(self.breakpoints[0])


@dataclass(frozen=True)
class CouplingTable:
    """Mass splits of every interval toward its two endpoints.

    ``left_mass[i]``/``right_mass[i]`` go to the lower/upper endpoint of
    interval i (between breakpoints i+1 and i in decreasing order);
    ``atom_masses[n]`` is the total collected by configuration value n.
    ``left_fraction[i]`` is the fraction of the interval length whose
    points are assigned to the lower endpoint (uniform density makes mass
    fraction equal length fraction).
    """

    N: int
    left_mass: np.ndarray
    right_mass: np.ndarray
    atom_masses: np.ndarray
    left_fraction: np.ndarray


def build_density(cfg: Configuration) -> ZeroBiasDensity:
    """Construct y_N from a solved configuration."""
    n = cfg.N
    bp = cfg.as_floats()
    gaps = cfg.gaps()
    if np.any(gaps <= 0):
        raise DegenerateConfigurationError("configuration values must strictly decrease")
    heights = np.array(
        [float(cfg.cumsums[k] / (n - 1)) for k in range(n - 1)], dtype=float
    )
    masses = np.full(n - 1, 1.0 / (n - 1))
    return ZeroBiasDensity(breakpoints=bp, heights=heights, masses=masses)


def density_at(dens: ZeroBiasDensity, x):
    """Evaluate y_N at x (scalar or array).

    Right-continuous: a breakpoint takes the height of the interval it
    bounds from below (x_{n+1} <= x < x_n), and the density is 0 for
    x >= x_1 and x < x_N.
    """
    asc = dens.breakpoints[::-1]  # ascending values
    h_asc = np.concatenate(([0.0], dens.heights[::-1], [0.0]))
    idx = np.searchsorted(asc, x, side="right")
    return h_asc[idx] if np.ndim(x) else float(h_asc[idx])


def density_mean(dens: ZeroBiasDensity) -> float:
    """Exact mean of y_N: mass-weighted interval midpoints."""
    bp = dens.breakpoints
    mids = (bp[:-1] + bp[1:]) / 2.0
    return float(np.dot(dens.masses, mids))


def density_second_moment(dens: ZeroBiasDensity) -> float:
    """Exact second moment: sum of mass * (a^2 + ab + b^2)/3 per interval."""
    a = dens.breakpoints[1:]
    b = dens.breakpoints[:-1]
    return float(np.dot(dens.masses, (a * a + a * b + b * b) / 3.0))


def _split_masses(n: int, one):
    """Per-interval (lower, upper) endpoint masses in the arithmetic of
    ``one`` (pass 1.0 for floats, Fraction(1) for exact rationals).

    Interval i (0-based) lies between configuration values i+1 and i
    (1-based, decreasing).  Returns (lo, hi) lists of length N-1.
    """
    if n < 3:
        raise InvalidInputError("N must be >= 3")
    unit = one / (n - 1)
    lo = [None] * (n - 1)
    hi = [None] * (n - 1)

    def l_mass(twice_j):
        # L_j = (2j-1)/(2N) - (j-1)/(N-1) evaluated at j = twice_j/2
        return (twice_j - 1) * one / (2 * n) - (twice_j - 2) * one / (2 * (n - 1))

    if n % 2 == 1:
        m = (n + 1) // 2
        for i in range(n - 1):
            interval = i + 1  # 1-based interval index
            if interval < m:
                j2 = 2 * (m - interval)  # j = m - interval, doubled
                lo[i] = l_mass(j2)
                hi[i] = unit - lo[i]
            else:
                j2 = 2 * (interval - m + 1)
                hi[i] = l_mass(j2)
                lo[i] = unit - hi[i]
    else:
        m = n // 2
        for i in range(n - 1):
            interval = i + 1
            if interval == m:
                lo[i] = unit / 2
                hi[i] = unit / 2
            elif interval < m:
                j2 = 2 * (m - interval) + 1  # j = (m - interval) + 1/2
                lo[i] = l_mass(j2)
                hi[i] = unit - lo[i]
            else:
                j2 = 2 * (interval - m) + 1
                hi[i] = l_mass(j2)
                lo[i] = unit - hi[i]
    return lo, hi


def coupling_table_exact(n: int) -> tuple[list[Fraction], list[Fraction], list[Fraction]]:
    """(lower, upper, atom) masses as exact rationals; atoms are 1/N."""
    lo, hi = _split_masses(n, Fraction(1))
    atoms = [Fraction(0)] * n
    for i in range(n - 1):
        atoms[i] += hi[i]       # upper endpoint of interval i is value i
        atoms[i + 1] += lo[i]   # lower endpoint is value i+1
    return lo, hi, atoms


def coupling_masses(cfg: Configuration) -> CouplingTable:
    """Float coupling table for a configuration (geometry-independent:
    the masses depend only on N and parity)."""
    n = cfg.N
    lo, hi = _split_masses(n, 1.0)
    lo = np.array(lo)
    hi = np.array(hi)
    atoms = np.zeros(n)
    atoms[:-1] += hi
    atoms[1:] += lo
    return CouplingTable(
        N=n,
        left_mass=lo,
        right_mass=hi,
        atom_masses=atoms,
        left_fraction=lo * (n - 1),
    )


def sample_zero_bias(dens: ZeroBiasDensity, rng: np.random.Generator, size=None):
    """Draw from y_N: uniform interval choice, uniform position within."""
    n = dens.N
    scalar = size is None
    k = 1 if scalar else int(size)
    idx = rng.integers(0, n - 1, size=k)
    u = rng.random(size=k)
    lower = dens.breakpoints[idx + 1]
    upper = dens.breakpoints[idx]
    x = lower + u * (upper - lower)
    return float(x[0]) if scalar else x


def coupled_sample(cfg: Configuration, rng: np.random.Generator, size=None):
    """Draw (X, X_tilde) with X ~ atoms of cfg, X_tilde ~ y_N, and
    |X - X_tilde| bounded by the length of the interval containing
    X_tilde.

    The interval is chosen with probability 1/(N-1), X_tilde uniformly
    within it, and X snaps to the lower or upper endpoint according to
    which side of the interval's split point X_tilde fell on.
    """
    n = cfg.N
    table = coupling_masses(cfg)
    bp = cfg.as_floats()
    scalar = size is None
    k = 1 if scalar else int(size)
    idx = rng.integers(0, n - 1, size=k)
    u = rng.random(size=k)
    lower = bp[idx + 1]
    upper = bp[idx]
    x_tilde = lower + u * (upper - lower)
    x = np.where(u < table.left_fraction[idx], lower, upper)
    if scalar:
        return float(x[0]), float(x_tilde[0])
    return x, x_tilde
