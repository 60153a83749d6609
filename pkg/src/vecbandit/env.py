"""Stochastic environment sampling, run statistics, and concentration utilities.

Observations come from a counter-based splitmix64 stream: observation #c of
a run depends only on (seed, c), so identical seed and pull sequence give a
bit-exact identical observation sequence.  Per-replication streams derive
as base_seed xor hash(replication).  Gaussian observations are never
clipped to [0, 1]; only the model means are range-checked.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .model import BanditModel


@dataclass
class Environment:
    model: BanditModel
    rng_seed: int
    draw_count: int = 0

    def __post_init__(self):
        self.rng_seed = int(self.rng_seed) & ((1 << 64) - 1)


@dataclass
class RunStats:
    """Per-arm pull counts and per-dimension observation sums."""

    K: int
    d: int
    counts: np.ndarray = field(default=None)
    sums: np.ndarray = field(default=None)
    t: int = 0

    def __post_init__(self):
        if self.counts is None:
            self.counts = np.zeros(self.K, dtype=np.int64)
        if self.sums is None:
            self.sums = np.zeros((self.d, self.K))

    def means(self) -> np.ndarray:
        """Empirical means; requires every arm pulled at least once."""
        if self.counts.min() < 1:
            raise ValueError("empirical means undefined for unpulled arms")
        return self.sums / self.counts


def pull(env: Environment, arm: int) -> np.ndarray:
    """Draw one loss vector from the given arm and advance the stream."""
    model = env.model
    if not (0 <= arm < model.K):
        raise ValueError(f"arm {arm} out of range [0, {model.K})")
    fam = model.family.code
    obs = np.empty(model.d)
    seed = env.rng_seed
    c = env.draw_count
    for i in range(model.d):
        obs[i] = _kernels.draw_obs(seed, c + i, fam, model.means[i, arm])
    env.draw_count = c + model.d
    return obs


def record(stats: RunStats, arm: int, obs) -> RunStats:
    """Accumulate one observation; mutates and returns stats."""
    obs = np.asarray(obs, dtype=np.float64)
    if not (0 <= arm < stats.K):
        raise ValueError(f"arm {arm} out of range [0, {stats.K})")
    if obs.shape != (stats.d,):
        raise ValueError(f"observation must have shape ({stats.d},)")
    stats.counts[arm] += 1
    stats.sums[:, arm] += obs
    stats.t += 1
    return stats


def conf_radius(t: int, n: int) -> float:
    """Hoeffding-style confidence radius sqrt(2 log(t) / n)."""
    if t < 1 or n < 1:
        raise ValueError("t and n must be >= 1")
    return float(np.sqrt(2.0 * np.log(t) / n))


def good_event_holds(stats: RunStats, model: BanditModel, t: int) -> bool:
    """Whether every empirical mean sits within its confidence radius.

    This is the concentration event that holds with probability at least
    1 - dK/t^2.
    """
    if stats.counts.min() < 1:
        raise ValueError("every arm must be pulled at least once")
    radii = np.sqrt(2.0 * np.log(t) / stats.counts)
    return bool(np.all(np.abs(stats.means() - model.means) <= radii))
