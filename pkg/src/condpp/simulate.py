"""Exact samplers and the conditional immigration-death chain.

The target law Po^(m) is a Poisson process on a ground space conditioned on
carrying at least m points.  Its count distribution is the Poisson law
truncated below m; given the count, locations are iid from the normalized
intensity.  The immigration-death chain with immigration rate Lambda, unit
per-capita death rate, and deaths suppressed at the floor (population equal
to m) leaves Po^(m) invariant and is the engine behind every estimator here.

Draw discipline is fixed so runs are reproducible from the stream alone:
each chain event consumes a holding-time uniform, then a type uniform, then
either the location draws (immigration) or one victim-index uniform (death).
The type uniform is consumed even when the floor forces immigration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import poisson_pmf, poisson_tail
from .groundspace import Configuration, GroundSpace, RandomStream

__all__ = [
    "BudgetError",
    "CountPMF",
    "conditional_count_pmf",
    "conditional_poisson_count_pmf",
    "count_tv_distance",
    "sample_poisson_process",
    "sample_conditional_poisson",
    "sample_bernoulli_process",
    "sample_binomial_process",
    "bernoulli_site_configuration",
    "Trajectory",
    "simulate_cid_chain",
]

# Refuse rejection sampling below this acceptance probability.
_MIN_ACCEPTANCE = 1e-6

# Poisson count inversion walks at most this far past the mean.
_COUNT_WALK_SLACK = 60.0


class BudgetError(RuntimeError):
    """A sampler or simulation refused to run within its stated budget."""


@dataclass(frozen=True)
class CountPMF:
    """Count law of Po^(m): Poisson(lam) truncated to {m, m+1, ...}."""

    lam: float
    m: int

    def __post_init__(self):
        if not (self.lam > 0.0 and math.isfinite(self.lam)):
            raise ValueError("lam must be positive and finite")
        if self.m < 0:
            raise ValueError("m must be nonnegative")

    def pmf(self, j: int) -> float:
        if j < self.m:
            return 0.0
        return poisson_pmf(self.lam, j) / poisson_tail(self.lam, self.m)

    def mean(self) -> float:
        # Identity: E|Po^(m)| = lam + m * P(Po(lam) = m) / P(Po(lam) >= m)
        # follows from shifting the truncated series once.
        tail = poisson_tail(self.lam, self.m)
        return self.lam * poisson_tail(self.lam, self.m - 1) / tail if self.m else self.lam


def conditional_count_pmf(lam: float, m: int) -> CountPMF:
    return CountPMF(lam=float(lam), m=int(m))


def conditional_poisson_count_pmf(lam: float, m: int, j: int) -> float:
    """P(|Po^(m)| = j); zero below the floor."""
    return conditional_count_pmf(lam, m).pmf(int(j))


def count_tv_distance(counts, law: CountPMF) -> float:
    """Total variation between an empirical count sample and a CountPMF."""
    counts = np.asarray(counts, dtype=int)
    if counts.size == 0:
        raise ValueError("empty count sample")
    top = int(counts.max())
    freq = np.bincount(counts, minlength=top + 1) / counts.size
    probs = np.array([law.pmf(j) for j in range(top + 1)])
    # Mass of the law beyond the largest observed count.
    beyond = max(0.0, 1.0 - probs.sum())
    return 0.5 * (np.abs(freq - probs).sum() + beyond)


def _poisson_count(lam: float, stream: RandomStream) -> int:
    """Poisson(lam) count by CDF inversion; consumes exactly one uniform."""
    u = stream.uniform()
    p = math.exp(-lam)
    cdf = p
    j = 0
    cap = int(lam + _COUNT_WALK_SLACK * math.sqrt(lam) + _COUNT_WALK_SLACK)
    while u >= cdf:
        j += 1
        p *= lam / j
        cdf += p
        if j > cap:
            # Only reachable through pathological rounding; u was in [0, 1).
            break
    return j


def _check_space_lam(space: GroundSpace) -> float:
    lam = space.total_mass
    if math.exp(-lam) == 0.0:
        raise BudgetError("lam too large for count inversion")
    return lam


def sample_poisson_process(space: GroundSpace, stream: RandomStream) -> Configuration:
    """One draw of the (unconditional) Poisson process on the space."""
    lam = _check_space_lam(space)
    n = _poisson_count(lam, stream)
    return Configuration(tuple(range(n)), space.sample(stream, n))


def sample_conditional_poisson(
    space: GroundSpace, m: int, stream: RandomStream
) -> Configuration:
    """Exact Po^(m) draw: reject counts below m, then place locations.

    Counts alone are resampled until acceptance (locations are independent
    of the count, so drawing them only for the accepted count leaves the law
    unchanged); each rejected attempt consumes exactly one uniform.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    lam = _check_space_lam(space)
    if m > 0:
        accept = poisson_tail(lam, m)
        if accept < _MIN_ACCEPTANCE:
            raise BudgetError(
                f"acceptance probability {accept:.3g} below {_MIN_ACCEPTANCE:.0e}"
            )
    while True:
        n = _poisson_count(lam, stream)
        if n >= m:
            break
    return Configuration(tuple(range(n)), space.sample(stream, n))


def bernoulli_site_configuration(n: int, fired: np.ndarray) -> Configuration:
    """Configuration at sites i/n, i = 1..n, for the fired indicator mask."""
    idx = np.flatnonzero(fired) + 1
    locs = (idx / n).reshape(-1, 1).astype(float)
    return Configuration(tuple(range(len(idx))), locs)


def _indicator_attempts(
    n: int, p: float, conditional_m: int, stream: RandomStream
) -> np.ndarray:
    """Shared rejection core: n Bernoulli(p) indicators given sum >= m.

    Each attempt consumes exactly n uniforms, so two samplers sharing a
    stream see identical accepted indicator patterns.
    """
    if n < 1 or not 0.0 < p < 1.0:
        raise ValueError("need n >= 1 and p in (0, 1)")
    if conditional_m < 0 or conditional_m > n:
        raise ValueError("conditioning level must lie in {0, ..., n}")
    if conditional_m > 0:
        from scipy.stats import binom

        accept = float(binom.sf(conditional_m - 1, n, p))
        if accept < _MIN_ACCEPTANCE:
            raise BudgetError(
                f"acceptance probability {accept:.3g} below {_MIN_ACCEPTANCE:.0e}"
            )
    while True:
        fired = stream.uniforms(n) < p
        if int(fired.sum()) >= conditional_m:
            return fired


def sample_bernoulli_process(
    n: int, p: float, conditional_m: int, stream: RandomStream
) -> Configuration:
    """Bernoulli process at sites i/n conditioned on at least m successes."""
    fired = _indicator_attempts(n, p, conditional_m, stream)
    return bernoulli_site_configuration(n, fired)


def sample_binomial_process(
    n: int,
    p: float,
    conditional_m: int,
    stream: RandomStream,
    space: GroundSpace | None = None,
) -> Configuration:
    """Binomial(n, p)-many iid points, conditioned on count >= m.

    Shares the indicator rejection core with the Bernoulli sampler, so equal
    streams give equal counts; locations are drawn only after acceptance,
    from the given space (default: unit interval).
    """
    from .groundspace import unit_interval

    if space is None:
        space = unit_interval(n * p)
    fired = _indicator_attempts(n, p, conditional_m, stream)
    count = int(fired.sum())
    return Configuration(tuple(range(count)), space.sample(stream, count))


@dataclass(frozen=True)
class Trajectory:
    """Piecewise-constant path of the chain over [0, horizon].

    events holds (time, kind, tag, location) tuples in time order, where kind
    is "immigration" (location is a coordinate tuple) or "death" (location is
    None and tag names the removed point).
    """

    initial: Configuration
    horizon: float
    m: int
    events: tuple[tuple[float, str, int, tuple | None], ...]

    def count_path(self) -> tuple[np.ndarray, np.ndarray]:
        """Event times and population counts just after each event."""
        times = np.array([e[0] for e in self.events])
        steps = np.array([1 if e[1] == "immigration" else -1 for e in self.events], dtype=int) \
            if self.events else np.zeros(0, dtype=int)
        return times, self.initial.size + np.cumsum(steps)

    def configuration_at(self, t: float) -> Configuration:
        if not 0.0 <= t <= self.horizon:
            raise ValueError("t outside [0, horizon]")
        tags = list(self.initial.tags)
        locs = {tag: tuple(loc) for tag, loc in zip(self.initial.tags, self.initial.locations)}
        for time, kind, tag, loc in self.events:
            if time > t:
                break
            if kind == "immigration":
                tags.append(tag)
                locs[tag] = loc
            else:
                tags.remove(tag)
        arr = np.array([locs[tag] for tag in tags], dtype=float).reshape(
            len(tags), self.initial.dimension
        )
        return Configuration(tuple(tags), arr)

    def final_configuration(self) -> Configuration:
        return self.configuration_at(self.horizon)


def simulate_cid_chain(
    initial: Configuration,
    m: int,
    horizon: float,
    space: GroundSpace,
    stream: RandomStream,
) -> Trajectory:
    """Conditional immigration-death chain started at `initial`, run to horizon.

    Dynamics: immigration at rate Lambda with location from the normalized
    intensity; each point dies at unit rate, but deaths are suppressed while
    the population sits at the floor m.  The stationary law is Po^(m).
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    if initial.size < m:
        raise ValueError("initial configuration below the floor m")
    if initial.dimension != space.dimension:
        raise ValueError("configuration dimension does not match the ground space")
    if not (horizon > 0.0 and math.isfinite(horizon)):
        raise ValueError("horizon must be positive and finite")
    lam = _check_space_lam(space)

    tags = list(initial.tags)
    next_tag = max(tags, default=-1) + 1
    events: list[tuple[float, str, int, tuple | None]] = []
    t = 0.0
    uniform = stream.uniform
    sample_one = space.sample_one
    log1p = math.log1p
    while True:
        count = len(tags)
        rate = lam + (count if count > m else 0)
        t += -log1p(-uniform()) / rate
        if t >= horizon:
            break
        if uniform() * rate < lam:
            loc = sample_one(stream)
            tags.append(next_tag)
            events.append((t, "immigration", next_tag, tuple(loc)))
            next_tag += 1
        else:
            victim = min(int(uniform() * count), count - 1)
            events.append((t, "death", tags.pop(victim), None))
    return Trajectory(initial=initial, horizon=float(horizon), m=int(m), events=tuple(events))
