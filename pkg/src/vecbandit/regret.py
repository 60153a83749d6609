"""Regret-minimization algorithms: forced-exploration CP and the game-based CG.

CP pulls every arm N times, picks the best empirical combinatorial arm
(a size-d subset plus a mixing weight), and tracks that fixed target for
the rest of the horizon.  CG runs a two-player game: an AdaHedge learner
proposes arm weights, tracking converts them to pulls, and the opponent
replies with the worst dimension of an optimistic lower confidence bound
on the relative losses.  The adaptive CG variant needs no horizon-tuned N
and instead forces each arm up to t^(2/3)/K pulls.

Regret is accounted against the true means: max over dimensions of the
accumulated true relative losses minus T times the optimal value.
"""

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import _regret_kernels as _rk
from ._accel import ACCELERATED
from .env import Environment, RunStats
from .learner import HedgeState, hedge_update, hedge_weights
from .model import BanditModel, relative_losses
from .optweight import inner_minmax, solve_minmax_simplex


@dataclass
class Trajectory:
    """Ordered record of pulled arms and observed loss vectors."""

    pulls: np.ndarray
    losses: np.ndarray
    algo_tag: str
    seed: int

    def __post_init__(self):
        if len(self.pulls) != len(self.losses):
            raise ValueError("pulls and losses must have equal length")

    @property
    def T(self) -> int:
        return len(self.pulls)


@dataclass(frozen=True)
class CgRoundLog:
    t: int
    omega_t: np.ndarray
    x_dim: int
    fed_loss: np.ndarray


class CgRunLog:
    """Array-backed sequence of per-round CG logs."""

    def __init__(self, omegas, x_dims, fed):
        self.omegas = omegas
        self.x_dims = x_dims
        self.fed = fed

    def __len__(self):
        return len(self.x_dims)

    def __getitem__(self, t) -> CgRoundLog:
        return CgRoundLog(
            t=t, omega_t=self.omegas[t], x_dim=int(self.x_dims[t]), fed_loss=self.fed[t]
        )


def default_N(algo: str, T: int, K: int):
    """Theory-suggested forced-exploration length, clamped to [1, T/(2K)].

    CP: (32 T^2 log T / K^2)^(1/3).  CG: (K^2 T^2 log T)^(1/3).  Returns
    (N, clamped); clamped is set when the clamp changed the raw value.
    """
    algo = algo.lower()
    if T < 2 * K:
        raise ValueError(f"horizon T={T} too small for K={K} (need T >= 2K)")
    if algo == "cp":
        raw = (32.0 * T * T * math.log(T) / (K * K)) ** (1.0 / 3.0)
    elif algo in ("cg", "cg-adaptive"):
        raw = (K * K * float(T) * T * math.log(T)) ** (1.0 / 3.0)
    else:
        raise ValueError(f"unknown algorithm {algo!r}")
    n_raw = int(math.floor(raw))
    n = max(1, min(n_raw, T // (2 * K)))
    return n, n != n_raw


def tracking_next(counts, cum_target) -> int:
    """Lowest-index minimizer of counts[k] - cum_target[k]."""
    counts = np.asarray(counts)
    cum_target = np.asarray(cum_target, dtype=np.float64)
    if cum_target.min() < 0.0:
        raise ValueError("cumulative targets must be nonnegative")
    return int(np.argmin(counts - cum_target))


def cp_select(emp_rel: np.ndarray):
    """Best combinatorial arm under the empirical relative losses.

    Evaluates every size-d subset via the exact inner min-max and returns
    (arms, alpha) for the minimizing subset (lexicographic tie-break).
    """
    emp_rel = np.asarray(emp_rel, dtype=np.float64)
    if not np.all(np.isfinite(emp_rel)):
        raise ValueError("empirical relative losses must be finite")
    d, K = emp_rel.shape
    if K < d:
        raise ValueError(f"need K >= d, got K={K}, d={d}")
    best = None
    for combo in combinations(range(K), d):
        alpha, value = inner_minmax(emp_rel[:, combo])
        if best is None or value < best[1] - 1e-12:
            best = (combo, value, alpha)
    combo, _, alpha = best
    return combo, alpha


def lcb_matrix(stats: RunStats, horizon_T: int, N: int, width_counts=None):
    """Lower confidence bound on the relative losses.

    Entry (i, k) is the empirical relative loss (with the per-dimension
    empirical best from the given stats) minus sqrt(2 log T / N_k) minus
    sqrt(2 log T / N).  width_counts overrides the per-arm counts used in
    the first width (CG uses post-reset phase-2 counts there).
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if stats.counts.min() < 1:
        raise ValueError("every arm must be pulled at least once")
    counts = stats.counts if width_counts is None else np.asarray(width_counts)
    if counts.min() < 1:
        raise ValueError("width counts must be >= 1")
    means = stats.means()
    star = np.argmin(means, axis=1)
    rel = means - means[np.arange(stats.d), star][:, None]
    ln_t = math.log(horizon_T)
    width1 = np.sqrt(2.0 * ln_t / counts)
    width2 = math.sqrt(2.0 * ln_t / N)
    return rel - width1[None, :] - width2


def cg_best_response(lcb: np.ndarray, omega) -> int:
    """Lowest-index dimension maximizing (lcb @ omega); the opponent's move."""
    omega = omega.w if hasattr(omega, "w") else np.asarray(omega, dtype=np.float64)
    lcb = np.asarray(lcb, dtype=np.float64)
    if lcb.shape[1] != omega.shape[0]:
        raise ValueError("shape mismatch between lcb and omega")
    return int(np.argmax(lcb @ omega))


def regret_of(traj: Trajectory, model: BanditModel) -> float:
    """Realized regret of a trajectory, computed from the true means."""
    rel = relative_losses(model)
    counts = np.bincount(traj.pulls, minlength=model.K).astype(np.float64)
    cum = rel.values @ counts
    psi_star = solve_minmax_simplex(rel).value
    return float(cum.max() - psi_star * traj.T)


def _forced_means_sequence(model: BanditModel, n_pulls: int):
    """Means, counter-ordered, for pulls cycling arms 0..K-1."""
    arms = np.arange(n_pulls) % model.K
    return model.means[:, arms].T.reshape(-1), arms


def cp_run(env: Environment, T: int, N: int, randomized: bool = False) -> Trajectory:
    """Combinatorial play: explore every arm N times, then track the best
    empirical combinatorial arm for the remaining rounds.

    With randomized=True phase 2 samples arms i.i.d. from alpha instead of
    deterministic tracking.
    """
    model = env.model
    K, d = model.K, model.d
    if K * N > T:
        raise ValueError("K * N must not exceed T")
    if K < d:
        raise ValueError("CP needs K >= d")

    from . import _kernels

    fam = model.family.code
    seed = env.rng_seed

    # Phase 1: round-robin forced exploration, drawn in one block.
    mseq, arms1 = _forced_means_sequence(model, K * N)
    obs1 = _kernels.draw_obs_block(seed, env.draw_count, fam, mseq).reshape(K * N, d)
    env.draw_count += K * N * d

    sums = np.zeros((d, K))
    for i in range(d):
        sums[i] = np.bincount(arms1, weights=obs1[:, i], minlength=K)
    emp_means = sums / N
    # Empirical means are used raw; Gaussian noise may push them outside
    # [0, 1], which the trajectory flags instead of clamping.
    means_in_range = bool(emp_means.min() >= 0.0 and emp_means.max() <= 1.0)

    star = np.argmin(emp_means, axis=1)
    emp_rel = emp_means - emp_means[np.arange(d), star][:, None]
    chat, alpha = cp_select(emp_rel)
    alpha_emb = np.zeros(K)
    alpha_emb[list(chat)] = np.clip(alpha, 0.0, None)
    alpha_emb /= alpha_emb.sum()

    T2 = T - K * N
    if randomized:
        pulls2, obs2 = _cp_phase2_randomized(model, seed, env.draw_count, alpha_emb, T2)
    else:
        pulls2, obs2 = _rk.cp_phase2(
            model.means, fam, seed, env.draw_count, alpha_emb, T2
        )
    env.draw_count += T2 * d

    pulls = np.concatenate([arms1.astype(np.int64), pulls2])
    losses = np.concatenate([obs1, obs2], axis=0)
    traj = Trajectory(pulls=pulls, losses=losses, algo_tag="cp", seed=env.rng_seed)
    traj.emp_means_in_range = means_in_range
    traj.chat = chat
    traj.alpha_hat = alpha
    return traj


def _cp_phase2_randomized(model, seed, counter, alpha_emb, T2):
    from . import _kernels

    d, K = model.d, model.K
    cum = np.cumsum(alpha_emb)
    pulls = np.empty(T2, dtype=np.int64)
    obs = np.empty((T2, d))
    for r in range(T2):
        u, _ = _kernels.uniform_pair(seed, counter)
        arm = int(np.searchsorted(cum, u, side="right"))
        arm = min(arm, K - 1)
        counter += 1
        for i in range(d):
            obs[r, i] = _kernels.draw_obs(seed, counter, model.family.code, model.means[i, arm])
            counter += 1
        pulls[r] = arm
    return pulls, obs


def cg_run(env: Environment, T: int, N: int):
    """Combinatorial game: forced exploration then learner-vs-LCB rounds.

    Returns (trajectory, round log).  Per game round: get weights from the
    learner, track them into a pull, update statistics, rebuild the LCB
    from all samples (phase-2 counts drive the first width), pick the
    best-response dimension, and feed that LCB row back to the learner.
    """
    model = env.model
    K = model.K
    if K * N > T:
        raise ValueError("K * N must not exceed T")
    pulls, losses, omegas, x_dims, fed = _rk.cg_run_loop(
        model.means, model.family.code, env.rng_seed, env.draw_count, T, N
    )
    env.draw_count += T * model.d
    traj = Trajectory(pulls=pulls, losses=losses, algo_tag="cg", seed=env.rng_seed)
    return traj, CgRunLog(omegas, x_dims, fed)


def cg_adaptive_run(env: Environment, T: int) -> Trajectory:
    """Horizon-free CG: force any arm below ceil(t^(2/3)/K) pulls, otherwise
    play the learner/tracking step with log(t) confidence widths."""
    model = env.model
    if T < model.K:
        raise ValueError("need T >= K")
    pulls, losses, n_forced = _rk.cg_adaptive_loop(
        model.means, model.family.code, env.rng_seed, env.draw_count, T
    )
    env.draw_count += T * model.d
    traj = Trajectory(
        pulls=pulls, losses=losses, algo_tag="cg-adaptive", seed=env.rng_seed
    )
    traj.n_forced = int(n_forced)
    return traj


def cg_reference_run(env: Environment, T: int, N: int):
    """Pure-Python CG loop built from the public per-step operations.

    Slow; exists to cross-check the fused kernel on small horizons.
    """
    from .env import pull, record

    model = env.model
    K, d = model.K, model.d
    stats = RunStats(K=K, d=d)
    pulls = np.empty(T, dtype=np.int64)
    losses = np.empty((T, d))
    for p in range(K * N):
        arm = p % K
        obs = pull(env, arm)
        record(stats, arm, obs)
        pulls[p], losses[p] = arm, obs

    T2 = T - K * N
    state = HedgeState(n=K)
    counts2 = np.zeros(K, dtype=np.int64)
    W = np.zeros(K)
    omegas = np.empty((T2, K))
    x_dims = np.empty(T2, dtype=np.int64)
    fed_log = np.empty((T2, K))
    for r in range(T2):
        w = hedge_weights(state).w
        omegas[r] = w
        W += w
        arm = tracking_next(counts2, W)
        obs = pull(env, arm)
        record(stats, arm, obs)
        counts2[arm] += 1
        pulls[K * N + r], losses[K * N + r] = arm, obs
        lcb = lcb_matrix(stats, T, N, width_counts=np.maximum(counts2, 1))
        x_dim = cg_best_response(lcb, w)
        fed = lcb[x_dim]
        hedge_update(state, fed)
        x_dims[r] = x_dim
        fed_log[r] = fed
    traj = Trajectory(pulls=pulls, losses=losses, algo_tag="cg", seed=env.rng_seed)
    return traj, CgRunLog(omegas, x_dims, fed_log)
