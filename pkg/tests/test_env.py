import numpy as np
import pytest

from vecbandit.env import Environment, RunStats, conf_radius, good_event_holds, pull, record
from vecbandit.model import BanditModel, Family


def gauss_env(means, seed=0):
    return Environment(model=BanditModel(family=Family.GAUSSIAN, means=means), rng_seed=seed)


class TestPull:
    def test_degenerate_bernoulli_zero(self):
        env = Environment(
            model=BanditModel(family=Family.BERNOULLI, means=[[0.0, 0.0], [0.0, 0.0]]),
            rng_seed=9,
        )
        for _ in range(20):
            assert np.array_equal(pull(env, 0), np.zeros(2))

    def test_degenerate_bernoulli_one(self):
        env = Environment(
            model=BanditModel(family=Family.BERNOULLI, means=[[1.0], [1.0]]), rng_seed=9
        )
        for _ in range(20):
            assert np.array_equal(pull(env, 0), np.ones(2))

    def test_out_of_range_arm(self):
        env = gauss_env([[0.5, 0.5]])
        with pytest.raises(ValueError):
            pull(env, 2)

    def test_law_of_large_numbers(self):
        means = np.array([[0.3, 0.7], [0.6, 0.1]])
        env = gauss_env(means, seed=123)
        n = 10**5
        acc = np.zeros(2)
        for _ in range(n):
            acc += pull(env, 1)
        emp = acc / n
        assert np.all(np.abs(emp - means[:, 1]) <= 3.0 / np.sqrt(n))

    def test_determinism_same_seed(self):
        means = [[0.3, 0.7]]
        e1, e2 = gauss_env(means, seed=42), gauss_env(means, seed=42)
        seq = [1, 0, 0, 1, 1, 0]
        obs1 = [pull(e1, a) for a in seq]
        obs2 = [pull(e2, a) for a in seq]
        assert all(np.array_equal(a, b) for a, b in zip(obs1, obs2))

    def test_different_seeds_differ(self):
        e1, e2 = gauss_env([[0.5]], seed=1), gauss_env([[0.5]], seed=2)
        assert not np.array_equal(pull(e1, 0), pull(e2, 0))


class TestRecord:
    def test_single(self):
        stats = RunStats(K=3, d=2)
        record(stats, 0, np.array([0.2, 0.8]))
        assert stats.counts.tolist() == [1, 0, 0]
        assert np.allclose(stats.sums[:, 0], [0.2, 0.8])
        assert stats.t == 1

    def test_mean_of_two(self):
        stats = RunStats(K=2, d=1)
        record(stats, 1, [0.2])
        record(stats, 1, [0.6])
        assert stats.sums[0, 1] == pytest.approx(0.8)
        assert stats.sums[0, 1] / stats.counts[1] == pytest.approx(0.4)

    def test_t_counts_all(self):
        stats = RunStats(K=2, d=1)
        for i in range(10):
            record(stats, i % 2, [0.5])
        assert stats.t == 10
        assert stats.t == stats.counts.sum()

    def test_shape_mismatch(self):
        stats = RunStats(K=2, d=2)
        with pytest.raises(ValueError):
            record(stats, 0, [0.5])


class TestConfRadius:
    def test_t_one(self):
        assert conf_radius(1, 5) == 0.0

    def test_formula_values(self):
        assert conf_radius(np.e**2, 2) == pytest.approx(np.sqrt(2), abs=1e-12)
        assert conf_radius(np.e**8, 4) == pytest.approx(2.0, abs=1e-12)

    def test_validation(self):
        with pytest.raises(ValueError):
            conf_radius(0, 1)
        with pytest.raises(ValueError):
            conf_radius(1, 0)


class TestGoodEvent:
    def _stats_at_truth(self, model, n):
        stats = RunStats(K=model.K, d=model.d)
        stats.counts[:] = n
        stats.sums[:] = model.means * n
        stats.t = n * model.K
        return stats

    def test_exact_means_hold(self):
        model = BanditModel(family=Family.GAUSSIAN, means=[[0.2, 0.8], [0.5, 0.5]])
        stats = self._stats_at_truth(model, 10)
        assert good_event_holds(stats, model, t=100)

    def test_large_perturbation_fails(self):
        model = BanditModel(family=Family.GAUSSIAN, means=[[0.2, 0.8]])
        stats = self._stats_at_truth(model, 100)
        stats.sums[0, 0] += 100 * 2.0  # shift the empirical mean by 2
        assert not good_event_holds(stats, model, t=100)

    def test_unpulled_arm_raises(self):
        model = BanditModel(family=Family.GAUSSIAN, means=[[0.2, 0.8]])
        stats = RunStats(K=2, d=1)
        record(stats, 0, [0.5])
        with pytest.raises(ValueError):
            good_event_holds(stats, model, t=10)

    @pytest.mark.parametrize("t,d,K", [(100, 1, 2), (1000, 2, 3), (1000, 2, 4)])
    def test_concentration_frequency(self, t, d, K):
        # Empirical means of N_k unit-variance Gaussian draws are exactly
        # N(mean, 1/N_k), so sampling them directly is an equivalent and
        # much faster Monte-Carlo of the concentration event.
        rng = np.random.default_rng(1234 + t + 10 * d + K)
        reps = 10**4
        model = BanditModel(
            family=Family.GAUSSIAN, means=rng.uniform(0.2, 0.8, size=(d, K))
        )
        counts = np.full(K, t // K, dtype=np.int64)
        counts[: t - counts.sum()] += 1
        radii = np.sqrt(2.0 * np.log(t) / counts)
        sigma = 1.0 / np.sqrt(counts)
        draws = rng.normal(
            loc=model.means[None, :, :], scale=sigma[None, None, :], size=(reps, d, K)
        )
        ok = np.all(np.abs(draws - model.means[None, :, :]) <= radii[None, None, :], axis=(1, 2))
        freq = ok.mean()
        assert freq >= 1.0 - d * K / t**2 - 0.01
