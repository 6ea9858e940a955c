"""Random-single-replacement Markov chain over m-samples and its rescaled
sum process.

A chain state holds m independent draws from a source (the standard
normal, or the atoms of a solved configuration); each step replaces one
uniformly chosen entry with a fresh draw.  The sum Y_k then follows an
AR(1) law with parameter 1 - 1/m, and the rescaled step function
X(t) = Y_[mt]/sqrt(m) approaches the stationary Ornstein-Uhlenbeck
process dX = -X dt + sqrt(2) dW (unit stationary variance, exponential
autocorrelation).  ``ar1_reference`` simulates the AR(1) law directly as
an exact-law twin for distributional comparisons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .solver import Configuration

_RESUM_EVERY = 1_000_000  # bound float accumulation drift in Y


class NormalSource:
    """Independent N(0,1) draws."""

    label = "standard-normal"
    single_draw_variance = 1.0

    def draw(self, rng: np.random.Generator, size=None):
        return rng.standard_normal() if size is None else rng.standard_normal(size)


class ConfigurationSource:
    """Uniform draws (with replacement) from a configuration's N atoms."""

    def __init__(self, cfg: Configuration):
        self._atoms = cfg.as_floats()
        self.N = cfg.N
        self.label = f"configuration(N={cfg.N})"
        self.single_draw_variance = 1.0 - 1.0 / cfg.N  # exact, by the
        # sum-of-squares identity

    def draw(self, rng: np.random.Generator, size=None):
        if size is None:
            return float(self._atoms[rng.integers(0, self.N)])
        return self._atoms[rng.integers(0, self.N, size)]


@dataclass
class ChainState:
    """m-sample, its running sum, and the owned RNG."""

    m: int
    source: object
    sample: np.ndarray
    Y: float
    step_index: int
    rng: np.random.Generator

    def resum(self) -> float:
        """Recompute Y from the sample (drift control)."""
        self.Y = float(self.sample.sum())
        return self.Y


def init_chain(source, m: int, seed) -> ChainState:
    """Stationary start: m independent draws from the source."""
    if m < 1:
        raise InvalidInputError("m must be >= 1")
    rng = np.random.default_rng(seed)
    sample = np.asarray(source.draw(rng, m), dtype=float)
    return ChainState(
        m=m, source=source, sample=sample,
        Y=float(sample.sum()), step_index=0, rng=rng,
    )


def step(chain: ChainState) -> ChainState:
    """Replace one uniformly chosen entry by a fresh draw; Y is updated
    incrementally and re-summed every million steps."""
    i = int(chain.rng.integers(0, chain.m))
    new = float(chain.source.draw(chain.rng))
    chain.Y += new - float(chain.sample[i])
    chain.sample[i] = new
    chain.step_index += 1
    if chain.step_index % _RESUM_EVERY == 0:
        chain.resum()
    return chain


@dataclass(frozen=True)
class RescaledPath:
    """X(t) = Y_[mt]/sqrt(m) sampled on the grid t_k = k/m."""

    m: int
    times: np.ndarray
    values: np.ndarray


def run_rescaled(chain: ChainState, T: float) -> RescaledPath:
    """Advance the chain [mT] steps, recording the rescaled sum path."""
    if T <= 0:
        raise InvalidInputError("T must be > 0")
    steps = int(chain.m * T)
    root_m = math.sqrt(chain.m)
    values = np.empty(steps + 1)
    values[0] = chain.Y / root_m
    # inline the single-replacement step: the loop dominates runtime
    rng = chain.rng
    sample = chain.sample
    idx = rng.integers(0, chain.m, size=steps)
    fresh = np.asarray(chain.source.draw(rng, steps), dtype=float)
    y = chain.Y
    before = chain.step_index // _RESUM_EVERY
    for k in range(steps):
        i = idx[k]
        y += fresh[k] - sample[i]
        sample[i] = fresh[k]
        values[k + 1] = y / root_m
    chain.Y = y
    chain.step_index += steps
    if chain.step_index // _RESUM_EVERY > before:
        chain.resum()
    times = np.arange(steps + 1) / chain.m
    return RescaledPath(m=chain.m, times=times, values=values)


def ar1_reference(m: int, steps: int, seed) -> np.ndarray:
    """Directly simulated AR(1) twin of the normal-source sum chain:
    Y_0 ~ N(0, m), Y_k = (1 - 1/m) Y_{k-1} + eps_k, eps ~ N(0, 2 - 1/m).
    """
    if m < 1:
        raise InvalidInputError("m must be >= 1")
    rng = np.random.default_rng(seed)
    lam = 1.0 / m
    y = np.empty(steps + 1)
    y[0] = math.sqrt(m) * rng.standard_normal()
    eps = math.sqrt(2.0 - lam) * rng.standard_normal(steps)
    a = 1.0 - lam
    for k in range(steps):
        y[k + 1] = a * y[k] + eps[k]
    return y


@dataclass(frozen=True)
class PathStatistics:
    m: int
    steps: int
    reps: int
    stationary_variance: float
    autocorrelation: list[tuple[float, float, float]]  # (t, estimate, e^-t)
    lag1_sum_corr: float
    lag1_sum_corr_reference: float


def ou_statistics(paths: list[RescaledPath],
                  lags: tuple[float, ...] = (0.5, 1.0, 2.0)) -> PathStatistics:
    """Pooled stationary variance and autocorrelation of rescaled paths,
    with the OU references Var = 1 and Corr(t) = e^-t attached.

    The chains start stationary, so every time point contributes (no
    burn-in).  All paths must share m and grid length.
    """
    if len(paths) < 2:
        raise InvalidInputError("need at least 2 paths")
    m = paths[0].m
    klen = len(paths[0].values)
    if any(p.m != m or len(p.values) != klen for p in paths):
        raise InvalidInputError("paths must share m and a common grid")
    arr = np.stack([p.values for p in paths])
    centered = arr - arr.mean()
    var = float(np.mean(centered ** 2))
    acf = []
    for t in lags:
        ell = int(round(t * m))
        if ell >= klen:
            raise InvalidInputError(f"lag {t} exceeds the path horizon")
        est = float(np.mean(centered[:, :klen - ell] * centered[:, ell:]) / var)
        acf.append((float(t), est, math.exp(-t)))
    lag1 = float(np.mean(centered[:, :-1] * centered[:, 1:]) / var)
    return PathStatistics(
        m=m,
        steps=klen - 1,
        reps=len(paths),
        stationary_variance=var,
        autocorrelation=acf,
        lag1_sum_corr=lag1,
        lag1_sum_corr_reference=1.0 - 1.0 / m,
    )
