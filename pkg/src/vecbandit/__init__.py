"""Stochastic K-armed bandits with d-dimensional vector losses.

Performance is measured through relative losses: each dimension compares an
arm against that dimension's best arm, and the objective is the max over
dimensions (an l-infinity norm).  The package provides the exact optimal
mixing weight solver, the CP and CG regret-minimization algorithms, fixed
confidence best-arm identification (Track-and-Stop and a gamified sampler),
and an experiment harness with a CLI.
"""

from ._accel import ACCELERATED
from .model import (
    BanditModel,
    Divergence,
    Family,
    RelativeLossMatrix,
    SimplexWeights,
    divergence,
    divergence_plus,
    relative_losses,
    weight_relative_loss,
)
from .env import Environment, RunStats, conf_radius, good_event_holds, pull, record
from .optweight import (
    OptWeightResult,
    grid_oracle,
    inner_minmax,
    pair_loss_d2,
    solve_minmax_simplex,
    support,
)
from .learner import HedgeState, hedge_init, hedge_update, hedge_weights

__version__ = "0.1.0"

__all__ = [
    "ACCELERATED",
    "BanditModel",
    "Divergence",
    "Environment",
    "Family",
    "HedgeState",
    "OptWeightResult",
    "RelativeLossMatrix",
    "RunStats",
    "SimplexWeights",
    "conf_radius",
    "divergence",
    "divergence_plus",
    "good_event_holds",
    "grid_oracle",
    "hedge_init",
    "hedge_update",
    "hedge_weights",
    "inner_minmax",
    "pair_loss_d2",
    "pull",
    "record",
    "relative_losses",
    "solve_minmax_simplex",
    "support",
    "weight_relative_loss",
]
