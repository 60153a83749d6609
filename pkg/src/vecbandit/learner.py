"""AdaHedge: exponential weights with the mixability-gap learning rate.

The learning rate at any point is eta = log(n) / Delta, where Delta is the
accumulated gap between the learner's dot loss and the mix loss.  Weights
at round t depend only on losses fed strictly before t.  Losses may be any
bounded reals (the regret algorithms feed lower confidence bounds, which
can be negative).
"""

from dataclasses import dataclass, field

import numpy as np

from .model import SimplexWeights


@dataclass
class HedgeState:
    n: int
    cum_loss: np.ndarray = field(default=None)
    mix_gap_sum: float = 0.0
    rounds: int = 0

    def __post_init__(self):
        if self.cum_loss is None:
            self.cum_loss = np.zeros(self.n)


def hedge_init(n: int) -> HedgeState:
    if n < 1:
        raise ValueError("need at least one action")
    return HedgeState(n=int(n))


def _weights_array(state: HedgeState) -> np.ndarray:
    L = state.cum_loss
    if state.mix_gap_sum <= 0.0:
        # Infinite learning rate: split mass uniformly over the minimizers.
        mins = L <= L.min() + 1e-12
        return mins / mins.sum()
    eta = np.log(state.n) / state.mix_gap_sum
    if eta <= 0.0:  # n == 1
        return np.ones(1)
    z = np.exp(-eta * (L - L.min()))
    return z / z.sum()


def hedge_weights(state: HedgeState) -> SimplexWeights:
    return SimplexWeights(_weights_array(state))


def hedge_update(state: HedgeState, loss) -> HedgeState:
    """Feed one loss vector; mutates and returns the state.

    Computes the current weights w, the dot loss w.loss, the mix loss
    m = -(1/eta) log sum_k w_k exp(-eta loss_k), and accumulates the
    nonnegative gap delta = w.loss - m.
    """
    loss = np.asarray(loss, dtype=np.float64)
    if loss.shape != (state.n,):
        raise ValueError(f"loss must have shape ({state.n},)")
    if not np.all(np.isfinite(loss)):
        raise ValueError("loss entries must be finite")

    w = _weights_array(state)
    dot = float(w @ loss)
    if state.n == 1:
        mix = dot
    elif state.mix_gap_sum <= 0.0:
        # eta = +inf limit: mix loss is the smallest loss among supported
        # actions.
        mix = float(loss[w > 0.0].min())
    else:
        eta = np.log(state.n) / state.mix_gap_sum
        lo = loss.min()
        mix = float(lo - np.log(w @ np.exp(-eta * (loss - lo))) / eta)
    delta = dot - mix

    state.cum_loss += loss
    state.mix_gap_sum += max(delta, 0.0)
    state.rounds += 1
    return state


def hedge_mix_gap(state: HedgeState, loss) -> float:
    """The gap delta the next hedge_update would add, without updating."""
    loss = np.asarray(loss, dtype=np.float64)
    w = _weights_array(state)
    dot = float(w @ loss)
    if state.n == 1:
        return 0.0
    if state.mix_gap_sum <= 0.0:
        return dot - float(loss[w > 0.0].min())
    eta = np.log(state.n) / state.mix_gap_sum
    lo = loss.min()
    mix = float(lo - np.log(w @ np.exp(-eta * (loss - lo))) / eta)
    return dot - mix
