"""Shooting solver for the interacting-worlds oscillator recursion.

The recursion is x_{n+1} = x_n - 1/S_n with S_n = x_1 + ... + x_n.  The
ground-state configuration for N worlds is its unique strictly decreasing
zero-mean solution; it is pinned down by a zero-median condition at the
middle of the sequence, which turns the boundary problem into root-finding
on x_1 (shooting).  Forward iteration amplifies perturbations of x_1, so
all orbit arithmetic runs at a configurable decimal precision via mpmath.

The shooting residual is x_m(x_1) for odd N (m = (N+1)/2) and
x_m(x_1) + x_{m+1}(x_1) for even N (m = N/2).  The wanted x_1 is the
largest root of the residual; past it the residual is increasing, so the
solver brackets from above (doubling up from twice the normal-quantile
seed) and from below (halving down from the seed) and bisects.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath as mp
import numpy as np

from .errors import (
    BisectionNotConvergedError,
    BracketNotFoundError,
    InvalidInputError,
    InvariantViolationError,
)

STATUS_COMPLETE = "complete"
STATUS_CUMSUM_NONPOSITIVE = "cumsum_nonpositive"

_MAX_EXPANSIONS = 64


def default_precision_digits(n_worlds: int) -> int:
    """Working decimal precision: 30 digits up to N=100, 60 beyond.

    Validated by the doubled-precision stability test: re-solving with
    twice the digits moves x_1 by less than the coarser bisection width.
    """
    return 30 if n_worlds <= 100 else 60


def median_index(n_worlds: int) -> int:
    """Index m of the zero-median condition: (N+1)/2 odd, N/2 even."""
    return (n_worlds + 1) // 2 if n_worlds % 2 == 1 else n_worlds // 2


@dataclass(frozen=True)
class SolverOptions:
    """Tuning knobs for the shooting solver.

    precision_digits None means "choose by N" (see
    ``default_precision_digits``).  ``bracket_seed_scale`` multiplies the
    quantile seed to form the initial (lower, upper) bracket candidates.
    """

    precision_digits: int | None = None
    residual_tolerance: float = 1e-12
    bracket_seed_scale: tuple[float, float] = (1.0, 2.0)
    max_bisection_steps: int = 400

    def __post_init__(self):
        if self.residual_tolerance <= 0:
            raise InvalidInputError("residual_tolerance must be > 0")
        if self.max_bisection_steps < 1:
            raise InvalidInputError("max_bisection_steps must be >= 1")
        lo, hi = self.bracket_seed_scale
        if not (0 < lo <= hi):
            raise InvalidInputError("bracket_seed_scale must satisfy 0 < lo <= hi")

    def digits_for(self, n_worlds: int) -> int:
        return self.precision_digits or default_precision_digits(n_worlds)


@dataclass(frozen=True)
class Trajectory:
    """Forward orbit of the recursion from a trial x_1.

    ``values`` holds x_1..x_k and ``cumsums`` S_1..S_k as mpmath floats.
    ``status`` is "complete" when n_max values were produced, or
    "cumsum_nonpositive" with ``stop_index`` = k when S_k <= 0 blocked the
    next division.
    """

    n_reached: int
    values: tuple
    cumsums: tuple
    status: str
    stop_index: int | None = None

    @property
    def complete(self) -> bool:
        return self.status == STATUS_COMPLETE


@dataclass(frozen=True)
class Configuration:
    """A solved ground-state configuration x_1 > ... > x_N.

    Values and cumulative sums are mpmath floats carried at
    ``precision_digits``; ``residual`` is the achieved shooting residual.
    """

    N: int
    values: tuple
    cumsums: tuple
    x1: mp.mpf
    residual: float
    precision_digits: int
    solver_iterations: int

    def as_floats(self) -> np.ndarray:
        """Values as a float64 array (decreasing order)."""
        return np.array([float(v) for v in self.values], dtype=float)

    def gaps(self) -> np.ndarray:
        """Consecutive gaps x_n - x_{n+1} (length N-1), differenced at
        full precision before rounding to float64."""
        return np.array(
            [float(self.values[i] - self.values[i + 1]) for i in range(self.N - 1)],
            dtype=float,
        )


def _require_positive_finite(x1) -> None:
    try:
        ok = mp.isfinite(mp.mpf(x1))
    except (TypeError, ValueError):
        raise InvalidInputError(f"x1 must be a real number, got {x1!r}")
    if not ok:
        raise InvalidInputError("x1 must be finite")
    if mp.mpf(x1) <= 0:
        raise InvalidInputError("x1 must be > 0")


def iterate_recursion(x1, n_max: int, precision_digits: int = 30) -> Trajectory:
    """Iterate x_{k+1} = x_k - 1/S_k from x_1, guarding against S_k <= 0.

    Stops early (status "cumsum_nonpositive", stop_index=k) if another
    value is still needed but S_k <= 0 would be the divisor.
    """
    _require_positive_finite(x1)
    if n_max < 1:
        raise InvalidInputError("n_max must be >= 1")
    with mp.workdps(precision_digits):
        x = mp.mpf(x1)
        s = x
        values = [x]
        cumsums = [s]
        for k in range(1, n_max):
            if s <= 0:
                return Trajectory(
                    n_reached=k,
                    values=tuple(values),
                    cumsums=tuple(cumsums),
                    status=STATUS_CUMSUM_NONPOSITIVE,
                    stop_index=k,
                )
            x = x - 1 / s
            s = s + x
            values.append(x)
            cumsums.append(s)
    return Trajectory(
        n_reached=n_max,
        values=tuple(values),
        cumsums=tuple(cumsums),
        status=STATUS_COMPLETE,
    )


def _residual_from_trajectory(traj: Trajectory, n_worlds: int):
    m = median_index(n_worlds)
    if n_worlds % 2 == 1:
        if traj.n_reached < m:
            return mp.mpf("-inf")
        return traj.values[m - 1]
    if traj.n_reached < m + 1:
        return mp.mpf("-inf")
    return traj.values[m - 1] + traj.values[m]


def shooting_residual(x1, n_worlds: int, precision_digits: int | None = None):
    """Median residual of the orbit started at x_1.

    Odd N: x_m(x_1); even N: x_m(x_1) + x_{m+1}(x_1).  Returns -inf when
    the orbit hits S_k <= 0 before the median index, which certifies the
    candidate lies below the feasible region of the target root.
    """
    if n_worlds < 3:
        raise InvalidInputError("N must be >= 3")
    dps = precision_digits or default_precision_digits(n_worlds)
    m = median_index(n_worlds)
    need = m if n_worlds % 2 == 1 else m + 1
    traj = iterate_recursion(x1, need, precision_digits=dps)
    return _residual_from_trajectory(traj, n_worlds)


def normal_upper_quantile(p, precision_digits: int = 30):
    """z such that 1 - Phi(z) = p for the standard normal CDF Phi.

    Computed as sqrt(2) * erfinv(1 - 2p) with guard digits; accurate to at
    least ``precision_digits`` significant digits.
    """
    try:
        pv = float(p)
    except (TypeError, ValueError):
        raise InvalidInputError(f"p must be a real number, got {p!r}")
    if not (0.0 < pv < 1.0) or math.isnan(pv):
        raise InvalidInputError("p must lie strictly between 0 and 1")
    with mp.workdps(precision_digits + 10):
        z = mp.sqrt(2) * mp.erfinv(1 - 2 * mp.mpf(p))
    with mp.workdps(precision_digits):
        return +z


def _bracket_and_bisect(f, seed, opts: SolverOptions, dps: int, what: str):
    """Locate the largest root of f by expanding a bracket around seed.

    f must be negative (or -inf) below the root and positive above it in
    the searched region.  Returns (root, function_evaluations).
    """
    with mp.workdps(dps):
        lo_scale, hi_scale = opts.bracket_seed_scale
        hi = mp.mpf(seed) * mp.mpf(hi_scale)
        lo = mp.mpf(seed) * mp.mpf(lo_scale)
        evals = 0
        for _ in range(_MAX_EXPANSIONS):
            evals += 1
            if f(hi) > 0:
                break
            hi *= 2
        else:
            raise BracketNotFoundError(
                f"{what}: no positive residual up to {mp.nstr(hi, 8)}"
            )
        for _ in range(_MAX_EXPANSIONS):
            evals += 1
            if f(lo) < 0:
                break
            lo /= 2
        else:
            raise BracketNotFoundError(
                f"{what}: no negative residual down to {mp.nstr(lo, 8)}"
            )
        if lo >= hi:
            raise BracketNotFoundError(f"{what}: degenerate bracket")
        # Stop at 10^-(dps-10) relative width: leaves headroom between
        # arithmetic precision and reported accuracy.
        width_tol = mp.mpf(10) ** (-(dps - 10)) * hi
        steps = 0
        while hi - lo > width_tol:
            if steps >= opts.max_bisection_steps:
                raise BisectionNotConvergedError(
                    f"{what}: bracket width {mp.nstr(hi - lo, 5)} after "
                    f"{opts.max_bisection_steps} steps"
                )
            mid = (lo + hi) / 2
            r = f(mid)
            steps += 1
            evals += 1
            if r > 0:
                hi = mid
            elif r < 0:
                lo = mid
            else:
                return mid, evals
        return (lo + hi) / 2, evals


def _validate_configuration(cfg: Configuration, tol: float) -> None:
    failures = []
    if abs(cfg.cumsums[-1]) > tol:
        failures.append("zero_mean")
    sq = sum(v * v for v in cfg.values)
    if abs(sq - (cfg.N - 1)) > tol:
        failures.append("sum_of_squares")
    defect = max(
        abs(cfg.values[n] + cfg.values[cfg.N - 1 - n]) for n in range(cfg.N)
    )
    if defect > tol:
        failures.append("symmetry")
    if any(cfg.values[i] <= cfg.values[i + 1] for i in range(cfg.N - 1)):
        failures.append("monotone")
    if failures:
        raise InvariantViolationError(
            f"solved configuration for N={cfg.N} violates: {', '.join(failures)}",
            failures=failures,
        )


def solve_ground_state(n_worlds: int, opts: SolverOptions | None = None) -> Configuration:
    """Solve for the strictly decreasing zero-mean configuration at N.

    x_1 is the largest root of the shooting residual, found by bracketed
    bisection seeded at the upper 1/(2N) normal quantile.  The returned
    configuration is validated against the zero-mean, sum-of-squares,
    symmetry and monotonicity identities.
    """
    if not isinstance(n_worlds, (int, np.integer)) or n_worlds < 3:
        raise InvalidInputError("N must be an integer >= 3")
    n_worlds = int(n_worlds)
    opts = opts or SolverOptions()
    dps = opts.digits_for(n_worlds)
    with mp.workdps(dps):
        seed = normal_upper_quantile(mp.mpf(1) / (2 * n_worlds), dps)

        def f(x1):
            return shooting_residual(x1, n_worlds, precision_digits=dps)

        root, evals = _bracket_and_bisect(f, seed, opts, dps, f"solve N={n_worlds}")
        traj = iterate_recursion(root, n_worlds, precision_digits=dps)
        if not traj.complete:
            raise BisectionNotConvergedError(
                f"orbit from solved x1 stalled at index {traj.stop_index}"
            )
        res = _residual_from_trajectory(traj, n_worlds)
        if abs(res) > opts.residual_tolerance:
            raise BisectionNotConvergedError(
                f"achieved residual {mp.nstr(res, 5)} exceeds tolerance "
                f"{opts.residual_tolerance}"
            )
        cfg = Configuration(
            N=n_worlds,
            values=traj.values,
            cumsums=traj.cumsums,
            x1=root,
            residual=float(res),
            precision_digits=dps,
            solver_iterations=evals,
        )
        _validate_configuration(cfg, 10 * opts.residual_tolerance * n_worlds)
        return cfg


def _root_scan_seed(n: int, dps: int):
    # The largest root of x_n corresponds to the ground state of 2n-1
    # worlds, so the quantile seed for that size lands near it.
    return normal_upper_quantile(1.0 / (2 * (2 * n - 1)), dps)


def find_largest_root_xn(n: int, opts: SolverOptions | None = None):
    """Largest x_1 at which the orbit value x_n vanishes (root a_n)."""
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise InvalidInputError("n must be an integer >= 2")
    n = int(n)
    opts = opts or SolverOptions()
    dps = opts.digits_for(2 * n - 1)
    with mp.workdps(dps):
        seed = _root_scan_seed(n, dps)

        def f(x1):
            traj = iterate_recursion(x1, n, precision_digits=dps)
            if traj.n_reached < n:
                return mp.mpf("-inf")
            return traj.values[n - 1]

        root, _ = _bracket_and_bisect(f, seed, opts, dps, f"a_{n}")
        return root


def find_largest_root_Sn(n: int, opts: SolverOptions | None = None):
    """Largest x_1 at which the cumulative sum S_n vanishes (root b_n)."""
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise InvalidInputError("n must be an integer >= 2")
    n = int(n)
    opts = opts or SolverOptions()
    dps = opts.digits_for(2 * n - 1)
    with mp.workdps(dps):
        seed = _root_scan_seed(n, dps)

        def f(x1):
            traj = iterate_recursion(x1, n, precision_digits=dps)
            if traj.n_reached < n:
                return mp.mpf("-inf")
            return traj.cumsums[n - 1]

        root, _ = _bracket_and_bisect(f, seed, opts, dps, f"b_{n}")
        return root
