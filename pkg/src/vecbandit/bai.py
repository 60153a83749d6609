"""Fixed-confidence best-arm identification for vector-loss bandits.

The answer map picks the arm with the smallest l-infinity relative loss.
Both samplers share the Chernoff stopping rule: stop once the generalized
log-likelihood ratio to the nearest alternative answer exceeds
log((1 + log t) / delta).  Track-and-Stop follows plug-in oracle weights
with forced exploration of starved arms; the gamified sampler runs one
AdaHedge learner per candidate answer against best-response alternatives.

The exact alternative minimization (and therefore the GLR and oracle
weights) is implemented for the Gaussian and Bernoulli families with
d <= 3 and K <= 8; its cost is Theta(d K^(d+1)) small convex solves.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _bai_kernels as _bk
from ._kernels import kl
from .env import Environment, RunStats
from .model import Divergence, Family

_MAX_D = 3
_MAX_K = 8


@dataclass
class BaiConfig:
    delta: float
    sampler: str = "dtracking"  # "dtracking" or "game"
    exploration_bonus: str = "log"
    max_rounds: int = 10**6
    oracle_cadence: int = 10
    oracle_iters_init: int = 300
    oracle_iters_warm: int = 30
    oracle_step: float = 0.5
    forced_rounds: int | None = None  # game sampler; default ceil(sqrt(max_rounds))
    record_trace: bool = False

    def __post_init__(self):
        if not (0.0 < self.delta < 1.0):
            raise ValueError("delta must lie in (0, 1)")
        if self.sampler not in ("dtracking", "game"):
            raise ValueError("sampler must be 'dtracking' or 'game'")
        if self.exploration_bonus != "log":
            raise ValueError("only the log(t) exploration bonus is supported")


@dataclass
class BaiOutcome:
    tau: int
    answer: int
    correct: bool
    pulls: np.ndarray
    truncated: bool = False
    glr_trace: np.ndarray | None = None
    beta_trace: np.ndarray | None = None


class Interval(NamedTuple):
    lo: float
    hi: float
    empty: bool


def best_answer(means) -> int:
    """Lowest-index arm minimizing max_i (means[i,k] - min_j means[i,j])."""
    means = np.ascontiguousarray(means, dtype=np.float64)
    if means.ndim != 2:
        raise ValueError("means must be a d x K matrix")
    return int(_bk.best_answer_idx(means))


def threshold_beta(t: int, delta: float) -> float:
    """Stopping threshold log((1 + log t) / delta)."""
    if t < 1:
        raise ValueError("t must be >= 1")
    if not (0.0 < delta < 1.0):
        raise ValueError("delta must lie in (0, 1)")
    return math.log((1.0 + math.log(t)) / delta)


def _check_caps(d: int, K: int):
    if d > _MAX_D or K > _MAX_K:
        raise ValueError(
            f"exact alternative minimization supports d <= {_MAX_D}, K <= {_MAX_K} "
            f"(got d={d}, K={K})"
        )


def alt_inf(weights, means, div: Divergence, answer: int):
    """Minimize sum_k w_k sum_i d(means[i,k], lam[i,k]) over alternatives
    lam whose best answer differs from `answer`.

    Returns (value, lam).  The reported value is the objective at the
    returned lam, which is nudged off exact-tie boundaries so that
    best_answer(lam) != answer whenever the weights allow it.
    """
    means = np.ascontiguousarray(means, dtype=np.float64)
    w = np.ascontiguousarray(weights, dtype=np.float64)
    d, K = means.shape
    _check_caps(d, K)
    if w.shape != (K,):
        raise ValueError("weights must have one entry per arm")
    if w.min() < 0.0 or not np.all(np.isfinite(w)):
        raise ValueError("weights must be finite and nonnegative")
    if not (0 <= answer < K):
        raise ValueError("answer out of range")

    fam = div.family.code
    value, lam, kstar = _bk.alt_inf_kernel(fam, w, means, answer)
    if not math.isfinite(value):
        return value, lam

    if best_answer(lam) == answer:
        # Exact tie at the closure boundary: lower the displacing arm a hair.
        eps = 1e-9
        while eps <= 1e-4:
            lam2 = lam.copy()
            lam2[:, kstar] -= eps
            if div.family is Family.BERNOULLI:
                np.clip(lam2[:, kstar], 1e-12, 1.0 - 1e-12, out=lam2[:, kstar])
            if best_answer(lam2) != answer:
                lam = lam2
                break
            eps *= 10.0
    value = _objective(fam, w, means, lam)
    return value, lam


def _objective(fam, w, means, lam):
    d, K = means.shape
    total = 0.0
    for i in range(d):
        for k in range(K):
            total += w[k] * kl(fam, means[i, k], lam[i, k])
    return float(total)


def glr(stats: RunStats, div: Divergence) -> float:
    """Generalized log-likelihood ratio against the nearest alternative
    answer, at the empirical means weighted by pull counts."""
    if stats.counts.min() < 1:
        raise ValueError("every arm must be pulled at least once")
    means = stats.means()
    if div.family is Family.BERNOULLI:
        means = np.clip(means, 1e-6, 1.0 - 1e-6)
    answer = best_answer(np.clip(means, 0.0, 1.0))
    value, _ = alt_inf(stats.counts.astype(np.float64), means, div, answer)
    return value


def oracle_weights(means, div: Divergence, iters: int = 2000, step_c: float = 0.5):
    """Maximize omega -> alt_inf(omega) over the simplex by projected
    subgradient ascent; returns (omega_star, T_star) with T_star = 1/value.

    Requires a unique best answer (otherwise the value is 0 everywhere).
    """
    means = np.ascontiguousarray(means, dtype=np.float64)
    d, K = means.shape
    _check_caps(d, K)
    if not _bk._answer_unique(means, 1e-12):
        raise ValueError("oracle weights need a unique best answer")
    answer = best_answer(means)
    omega0 = np.full(K, 1.0 / K)
    om, val = _bk.oracle_ascent(
        div.family.code, means, answer, omega0, iters, step_c, 44
    )
    from .model import SimplexWeights

    if val <= 0.0:
        raise ValueError("characteristic value is zero; instance is degenerate")
    return SimplexWeights(om), float(1.0 / val)


def dtracking_next(stats: RunStats, omega_hat) -> int:
    """D-tracking: forced exploration of starved arms, else the arm with
    the largest plug-in weight deficit."""
    omega = omega_hat.w if hasattr(omega_hat, "w") else np.asarray(omega_hat)
    t = stats.t
    if t < 1:
        raise ValueError("need at least one pull")
    K = stats.K
    if stats.counts.min() < math.sqrt(t) - K / 2.0:
        return int(np.argmin(stats.counts))
    return int(np.argmax(omega - stats.counts / t))


def confidence_interval_arm(stats: RunStats, k: int, f_t: float, div: Divergence) -> Interval:
    """Scalar interval of xi with sum_i N_k d(mean[i,k], xi) <= f_t,
    intersected with [0, 1]; may be empty."""
    if stats.counts[k] < 1:
        raise ValueError("arm must be pulled at least once")
    means = stats.means()
    if div.family is Family.BERNOULLI:
        means = np.clip(means, 1e-6, 1.0 - 1e-6)
    lo, hi, ok = _bk._conf_interval(
        div.family.code, means, stats.counts, k, float(f_t)
    )
    return Interval(float(lo), float(hi), not ok)


def optimistic_gain(stats: RunStats, lambda_t, f_t: float, div: Divergence) -> np.ndarray:
    """Per-arm optimistic gain: max of the exploration ratio f_t/N_k and the
    worst divergence from the arm's confidence-interval endpoints to the
    best-response alternative."""
    lam = np.asarray(lambda_t, dtype=np.float64)
    fam = div.family.code
    U = np.empty(stats.K)
    for k in range(stats.K):
        u = f_t / stats.counts[k]
        iv = confidence_interval_arm(stats, k, f_t, div)
        if not iv.empty:
            for xi in (iv.lo, iv.hi):
                s = sum(kl(fam, xi, lam[i, k]) for i in range(stats.d))
                u = max(u, s)
        U[k] = u
    return U


def _outcome_from_kernel(res, model, cfg):
    tau, ans, counts, truncated, glr_trace, beta_trace, n_trace = res
    truth = best_answer(model.means)
    out = BaiOutcome(
        tau=int(tau),
        answer=int(ans),
        correct=bool(ans == truth),
        pulls=np.asarray(counts).copy(),
        truncated=bool(truncated),
    )
    if cfg.record_trace:
        out.glr_trace = np.asarray(glr_trace)[:n_trace].copy()
        out.beta_trace = np.asarray(beta_trace)[:n_trace].copy()
    return out


def track_and_stop_run(env: Environment, cfg: BaiConfig) -> BaiOutcome:
    """Track-and-Stop with D-tracking and the Chernoff stopping rule."""
    model = env.model
    _check_caps(model.d, model.K)
    res = _bk.tas_run_kernel(
        model.family.code,
        model.means,
        env.rng_seed,
        cfg.delta,
        cfg.max_rounds,
        cfg.oracle_cadence,
        cfg.oracle_iters_init,
        cfg.oracle_iters_warm,
        cfg.oracle_step,
        cfg.record_trace,
    )
    env.draw_count += int(res[0]) * model.d
    return _outcome_from_kernel(res, model, cfg)


def gamified_bai_run(env: Environment, cfg: BaiConfig) -> BaiOutcome:
    """Gamified sampler: per-answer AdaHedge learners against best
    responses, optimistic gains fed back, cumulative-weight tracking."""
    model = env.model
    _check_caps(model.d, model.K)
    forced = cfg.forced_rounds
    if forced is None:
        forced = int(math.ceil(math.sqrt(cfg.max_rounds)))
    res = _bk.game_run_kernel(
        model.family.code,
        model.means,
        env.rng_seed,
        cfg.delta,
        cfg.max_rounds,
        forced,
        cfg.record_trace,
    )
    env.draw_count += int(res[0]) * model.d
    return _outcome_from_kernel(res, model, cfg)
