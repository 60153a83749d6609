import numpy as np
import pytest

from vecbandit.model import BanditModel, Family


@pytest.fixture
def table1():
    return BanditModel(family=Family.BERNOULLI, means=[[1, 0, 0.5], [0, 1, 0.5]])


@pytest.fixture
def table1_gauss():
    return BanditModel(family=Family.GAUSSIAN, means=[[1, 0, 0.5], [0, 1, 0.5]])


def random_model(rng, K=None, d=None, family=Family.GAUSSIAN, kmax=5, dmax=3):
    K = K or int(rng.integers(1, kmax + 1))
    d = d or int(rng.integers(1, dmax + 1))
    means = rng.uniform(0.0, 1.0, size=(d, K))
    if family is Family.BERNOULLI:
        means = 0.02 + 0.96 * means
    return BanditModel(family=family, means=means)
