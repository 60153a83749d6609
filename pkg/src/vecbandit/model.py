"""Ground-truth model types, relative-loss algebra, and divergences.

A bandit instance is a d x K matrix of mean losses in [0, 1] together with
a distribution family (unit-variance Gaussian or Bernoulli).  Everything
downstream works on the *relative* losses: each row is shifted so its
per-dimension best arm sits at zero.  Arms are indexed from 0 internally;
the CLI and CSV outputs use 1-based arm numbers.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import _kernels


class Family(str, Enum):
    GAUSSIAN = "gaussian"
    BERNOULLI = "bernoulli"

    @property
    def code(self) -> int:
        return _kernels.GAUSSIAN if self is Family.GAUSSIAN else _kernels.BERNOULLI


@dataclass(frozen=True)
class BanditModel:
    """Distribution family plus the d x K matrix of mean losses.

    means[i, k] is the i-th mean loss of arm k.  All means must lie in
    [0, 1]; out-of-range values are an error, never clamped.
    """

    family: Family
    means: np.ndarray

    def __post_init__(self):
        means = np.asarray(self.means, dtype=np.float64)
        if means.ndim != 2 or means.shape[0] < 1 or means.shape[1] < 1:
            raise ValueError("means must be a d x K matrix with d, K >= 1")
        if not np.all(np.isfinite(means)):
            raise ValueError("means must be finite")
        if means.min() < 0.0 or means.max() > 1.0:
            raise ValueError("means must lie in [0, 1]")
        means = means.copy()
        means.setflags(write=False)
        object.__setattr__(self, "means", means)
        object.__setattr__(self, "family", Family(self.family))

    @property
    def d(self) -> int:
        return self.means.shape[0]

    @property
    def K(self) -> int:
        return self.means.shape[1]


@dataclass(frozen=True)
class RelativeLossMatrix:
    """Per-dimension losses relative to that dimension's best arm.

    values[i, k] = means[i, k] - min_j means[i, j]; star[i] is the
    lowest-index argmin of row i, so every row has a zero at column star[i].
    """

    values: np.ndarray
    star: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        star = np.asarray(self.star, dtype=np.int64)
        if values.ndim != 2 or star.shape != (values.shape[0],):
            raise ValueError("values must be d x K with one star index per row")
        if values.min() < -1e-12:
            raise ValueError("relative losses must be nonnegative")
        row_at_star = values[np.arange(values.shape[0]), star]
        if np.max(np.abs(row_at_star)) > 1e-12:
            raise ValueError("each row must be zero at its star column")
        values = values.copy()
        values.setflags(write=False)
        star = star.copy()
        star.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "star", star)

    @property
    def d(self) -> int:
        return self.values.shape[0]

    @property
    def K(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class SimplexWeights:
    """A probability vector: entries in [0, 1] summing to 1 (within 1e-12)."""

    w: np.ndarray
    n: int = field(init=False)

    def __post_init__(self):
        w = np.asarray(self.w, dtype=np.float64)
        if w.ndim != 1 or w.size < 1:
            raise ValueError("weights must be a nonempty vector")
        if w.min() < -1e-12 or w.max() > 1.0 + 1e-12:
            raise ValueError("weight entries must lie in [0, 1]")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1 within 1e-12")
        w = w.copy()
        w.setflags(write=False)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "n", w.size)

    @staticmethod
    def uniform(n: int) -> "SimplexWeights":
        return SimplexWeights(np.full(n, 1.0 / n))


@dataclass(frozen=True)
class Divergence:
    """KL divergence d(x, y) between mean parameters of one family."""

    family: Family

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))

    def __call__(self, x: float, y: float) -> float:
        return divergence(self, x, y)


def relative_losses(model: BanditModel) -> RelativeLossMatrix:
    """Subtract each row's minimum; ties broken to the lowest arm index."""
    means = model.means
    star = np.argmin(means, axis=1)
    values = means - means[np.arange(model.d), star][:, None]
    return RelativeLossMatrix(values=values, star=star)


def weight_relative_loss(w, rel: RelativeLossMatrix) -> float:
    """The objective Psi(w): max over dimensions of the w-weighted relative loss."""
    wv = w.w if isinstance(w, SimplexWeights) else np.asarray(w, dtype=np.float64)
    if wv.shape != (rel.K,):
        raise ValueError(f"weights have length {wv.shape}, expected ({rel.K},)")
    return float(np.max(rel.values @ wv))


def divergence(div: Divergence, x: float, y: float) -> float:
    """KL divergence from mean x to mean y; +inf signals a Bernoulli boundary."""
    if div.family is Family.BERNOULLI:
        if not (0.0 <= x <= 1.0):
            raise ValueError("Bernoulli divergence needs x in [0, 1]")
    return float(_kernels.kl(div.family.code, float(x), float(y)))


def divergence_plus(div: Divergence, x: float, y: float) -> float:
    """One-sided divergence: d(x, y) when x > y, else 0."""
    if x > y:
        return divergence(div, x, y)
    return 0.0
