"""Shared scalar primitives compiled with numba when acceleration is on.

The counter-based RNG (splitmix64 finalizer) makes observation streams
seekable: observation #c of stream `seed` depends only on (seed, c), so
replays are deterministic and vectorized draws agree bit for bit with the
scalar loop.  Under numba the arithmetic runs on native uint64; the
fallback path uses Python ints with explicit 64-bit masks.  Both produce
identical values (covered by a cross-mode parity test).

Family codes: 0 = unit-variance Gaussian, 1 = Bernoulli.
"""

import math

import numpy as np

from ._accel import ACCELERATED, njit

GAUSSIAN = 0
BERNOULLI = 1

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_INV53 = 1.0 / 9007199254740992.0  # 2**-53


# ---------------------------------------------------------------------------
# Counter-based RNG
# ---------------------------------------------------------------------------


def _mix64_py(z):
    z = (z + _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
    return z ^ (z >> 31)


def _uniform_pair_py(seed, counter):
    z1 = _mix64_py((seed ^ ((counter * _GOLDEN) & _MASK64)) & _MASK64)
    z2 = _mix64_py(z1)
    return (z1 >> 11) * _INV53, (z2 >> 11) * _INV53


def _draw_obs_py(seed, counter, family, mean):
    u1, u2 = _uniform_pair_py(seed, counter)
    if family == GAUSSIAN:
        r = math.sqrt(-2.0 * math.log(1.0 - u1))
        return mean + r * math.cos(2.0 * math.pi * u2)
    return 1.0 if u1 < mean else 0.0


if ACCELERATED:

    @njit(cache=True, nogil=True)
    def _mix64_u64(z):
        z = z + np.uint64(_GOLDEN)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
        return z ^ (z >> np.uint64(31))

    @njit(cache=True, nogil=True)
    def uniform_pair(seed, counter):
        """Two uniforms in [0, 1) derived from one counter value."""
        s = np.uint64(seed) ^ (np.uint64(counter) * np.uint64(_GOLDEN))
        z1 = _mix64_u64(s)
        z2 = _mix64_u64(z1)
        return (z1 >> np.uint64(11)) * _INV53, (z2 >> np.uint64(11)) * _INV53

    @njit(cache=True, nogil=True)
    def draw_obs(seed, counter, family, mean):
        """One scalar observation: N(mean, 1) or Bernoulli(mean)."""
        u1, u2 = uniform_pair(seed, counter)
        if family == GAUSSIAN:
            # Box-Muller; 1-u1 is in (0, 1] so the log is finite.
            r = math.sqrt(-2.0 * math.log(1.0 - u1))
            return mean + r * math.cos(2.0 * math.pi * u2)
        return 1.0 if u1 < mean else 0.0

else:
    uniform_pair = _uniform_pair_py
    draw_obs = _draw_obs_py


def derive_seed(base_seed, replication):
    """Per-replication stream seed: base xor a splitmix hash of the index.

    Masked to 63 bits so seeds stay valid int64 values everywhere.
    """
    mixed = int(base_seed) ^ _mix64_py(int(replication) & _MASK64)
    return mixed & ((1 << 63) - 1)


@njit(cache=True, nogil=True)
def draw_obs_block(seed, counter0, family, means):
    """Draws for consecutive counters, one mean per draw.

    Loops over the scalar generator so results are bit-identical to
    :func:`draw_obs` (numpy's SIMD transcendentals can differ by one ulp).
    """
    n = means.shape[0]
    out = np.empty(n)
    for i in range(n):
        out[i] = draw_obs(seed, counter0 + i, family, means[i])
    return out


# ---------------------------------------------------------------------------
# Divergence scalars
# ---------------------------------------------------------------------------


@njit(cache=True, nogil=True)
def kl(family, x, y):
    """KL divergence between means x and y for the given family.

    Gaussian (unit variance): (x-y)^2 / 2.  Bernoulli: binary relative
    entropy with 0*log(0) = 0; y in {0, 1} with x != y signals an infinite
    divergence by returning +inf.
    """
    if family == GAUSSIAN:
        diff = x - y
        return 0.5 * diff * diff
    if y <= 0.0:
        return 0.0 if x <= 0.0 else math.inf
    if y >= 1.0:
        return 0.0 if x >= 1.0 else math.inf
    total = 0.0
    if x > 0.0:
        total += x * math.log(x / y)
    if x < 1.0:
        total += (1.0 - x) * math.log((1.0 - x) / (1.0 - y))
    return total


@njit(cache=True, nogil=True)
def kl_plus(family, x, y):
    """One-sided divergence: kl(x, y) when x > y, else 0."""
    if x > y:
        return kl(family, x, y)
    return 0.0
