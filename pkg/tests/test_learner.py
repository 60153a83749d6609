import math

import numpy as np
import pytest

from vecbandit.learner import (
    HedgeState,
    hedge_init,
    hedge_mix_gap,
    hedge_update,
    hedge_weights,
)


def run_stream(n, losses):
    state = hedge_init(n)
    total = 0.0
    for loss in losses:
        w = hedge_weights(state).w
        total += float(w @ loss)
        hedge_update(state, loss)
    return state, total


class TestInit:
    def test_uniform_start(self):
        state = hedge_init(3)
        assert np.allclose(hedge_weights(state).w, [1 / 3] * 3)

    def test_single_action(self):
        state = hedge_init(1)
        assert hedge_weights(state).w.tolist() == [1.0]

    def test_deterministic(self):
        a, b = hedge_init(4), hedge_init(4)
        assert np.array_equal(a.cum_loss, b.cum_loss)
        assert a.mix_gap_sum == b.mix_gap_sum == 0.0

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            hedge_init(0)


class TestWeights:
    def test_near_indicator_on_leader(self):
        state = HedgeState(n=3, cum_loss=np.array([0.0, 10.0, 10.0]), mix_gap_sum=1e-9)
        w = hedge_weights(state).w
        assert w[0] > 1.0 - 1e-12
        assert w[1] < 1e-12

    def test_equal_losses_uniform(self):
        state = HedgeState(n=4, cum_loss=np.full(4, 7.5), mix_gap_sum=3.0)
        assert np.allclose(hedge_weights(state).w, 0.25)

    def test_zero_gap_splits_minimizers(self):
        state = HedgeState(n=3, cum_loss=np.array([1.0, 1.0, 2.0]), mix_gap_sum=0.0)
        assert np.allclose(hedge_weights(state).w, [0.5, 0.5, 0.0])


class TestUpdate:
    def test_constant_loss_keeps_uniform(self):
        state = hedge_init(3)
        for _ in range(5):
            delta = hedge_mix_gap(state, np.full(3, 0.7))
            hedge_update(state, np.full(3, 0.7))
            assert delta == pytest.approx(0.0, abs=1e-12)
        assert np.allclose(hedge_weights(state).w, 1 / 3)

    def test_single_action_zero_gap(self):
        state = hedge_init(1)
        for _ in range(10):
            hedge_update(state, np.array([2.5]))
        assert state.mix_gap_sum == 0.0
        assert hedge_weights(state).w.tolist() == [1.0]

    def test_repeated_loss_regret_bound(self):
        T = 10**4
        losses = [np.array([0.0, 1.0])] * T
        state, total = run_stream(2, losses)
        best = min(state.cum_loss)
        regret = total - best
        assert regret <= 2 * math.sqrt(T * math.log(2)) + (16 / 3) * math.log(2) + 2

    def test_rejects_nonfinite(self):
        state = hedge_init(2)
        with pytest.raises(ValueError):
            hedge_update(state, np.array([0.0, np.inf]))

    def test_gap_nonnegative_every_round(self):
        rng = np.random.default_rng(8)
        state = hedge_init(5)
        for _ in range(200):
            loss = rng.uniform(-2.0, 3.0, size=5)
            assert hedge_mix_gap(state, loss) >= -1e-12
            hedge_update(state, loss)

    def test_mix_gap_sum_nondecreasing(self):
        rng = np.random.default_rng(9)
        state = hedge_init(3)
        prev = 0.0
        for _ in range(100):
            hedge_update(state, rng.uniform(0.0, 1.0, size=3))
            assert state.mix_gap_sum >= prev
            prev = state.mix_gap_sum


class TestRegretBound:
    def test_adversarial_streams(self):
        rng = np.random.default_rng(17)
        T = 2000
        for n in (2, 8):
            for _ in range(10):
                a, b = sorted(rng.uniform(-1.0, 1.0, size=2))
                if b - a < 0.1:
                    b = a + 0.1
                losses = rng.uniform(a, b, size=(T, n))
                state, total = run_stream(n, list(losses))
                best = losses.sum(axis=0).min()
                rng_width = b - a
                bound = (
                    2 * math.sqrt(T * math.log(n) * rng_width**2)
                    + (16 / 3) * rng_width * math.log(n)
                    + 2 * rng_width
                )
                assert total - best <= bound

    def test_translation_invariance(self):
        rng = np.random.default_rng(23)
        losses = rng.uniform(0.0, 1.0, size=(50, 3))
        shifts = rng.uniform(-1.0, 1.0, size=50)
        s1, s2 = hedge_init(3), hedge_init(3)
        for t in range(50):
            w1 = hedge_weights(s1).w
            w2 = hedge_weights(s2).w
            assert np.allclose(w1, w2, atol=1e-12)
            hedge_update(s1, losses[t])
            hedge_update(s2, losses[t] + shifts[t])


class TestCausality:
    def test_weights_ignore_current_round_loss(self):
        state = hedge_init(2)
        hedge_update(state, np.array([1.0, 0.0]))
        before = hedge_weights(state).w.copy()
        # weights for the next round are fixed before the next loss arrives
        state2 = hedge_init(2)
        hedge_update(state2, np.array([1.0, 0.0]))
        assert np.array_equal(before, hedge_weights(state2).w)
        assert before[1] > before[0]
