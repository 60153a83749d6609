"""Parity checks between the compiled kernels, their interpreted twins, and
the vectorized helpers, plus a cross-mode subprocess check."""

import os
import subprocess
import sys

import numpy as np
import pytest

from vecbandit import _kernels as k
from vecbandit import _regret_kernels as rk
from vecbandit._accel import ACCELERATED
from vecbandit.learner import hedge_init, hedge_update, hedge_weights


class TestRng:
    def test_scalar_matches_python_twin(self):
        seed = 987654321
        for fam, mean in ((k.GAUSSIAN, 0.4), (k.BERNOULLI, 0.3)):
            a = [k.draw_obs(seed, c, fam, mean) for c in range(500)]
            b = [k._draw_obs_py(seed, c, fam, mean) for c in range(500)]
            assert a == b

    def test_block_matches_scalar(self):
        seed = 13579
        means = np.full(500, 0.35)
        for fam in (k.GAUSSIAN, k.BERNOULLI):
            vec = k.draw_obs_block(seed, 100, fam, means)
            sca = np.array([k.draw_obs(seed, 100 + c, fam, 0.35) for c in range(500)])
            assert np.array_equal(vec, sca)

    def test_streams_independent_of_each_other(self):
        a = k.draw_obs_block(k.derive_seed(7, 0), 0, k.GAUSSIAN, np.zeros(100))
        b = k.draw_obs_block(k.derive_seed(7, 1), 0, k.GAUSSIAN, np.zeros(100))
        assert not np.array_equal(a, b)
        assert abs(np.corrcoef(a, b)[0, 1]) < 0.3

    def test_gaussian_moments(self):
        obs = k.draw_obs_block(11, 0, k.GAUSSIAN, np.full(200000, 0.5))
        assert abs(obs.mean() - 0.5) < 0.01
        assert abs(obs.std() - 1.0) < 0.01

    def test_bernoulli_rate(self):
        obs = k.draw_obs_block(12, 0, k.BERNOULLI, np.full(200000, 0.3))
        assert abs(obs.mean() - 0.3) < 0.005

    def test_derive_seed_fits_int64(self):
        for rep in range(100):
            s = k.derive_seed(2**63 - 1, rep)
            assert 0 <= s < 2**63

    @pytest.mark.skipif(not ACCELERATED, reason="already running in fallback mode")
    def test_fallback_mode_identical_draws(self, tmp_path):
        script = (
            "from vecbandit import _kernels as k\n"
            "import vecbandit\n"
            "assert not vecbandit.ACCELERATED\n"
            "vals = [k.draw_obs(42, c, 0, 0.3) for c in range(50)]\n"
            "print(repr(vals))\n"
        )
        env = dict(os.environ, VECBANDIT_DISABLE_NUMBA="1")
        res = subprocess.run(
            [sys.executable, "-c", script], capture_output=True, text=True, env=env
        )
        assert res.returncode == 0, res.stderr
        fallback_vals = eval(res.stdout)
        ours = [k.draw_obs(42, c, 0, 0.3) for c in range(50)]
        assert fallback_vals == ours


class TestHedgeKernel:
    def test_matches_learner_module(self):
        rng = np.random.default_rng(3)
        losses = rng.uniform(-1.0, 2.0, size=(300, 4))
        total_kernel = rk.hedge_stream(losses)
        state = hedge_init(4)
        total_ref = 0.0
        for t in range(300):
            w = hedge_weights(state).w
            total_ref += float(w @ losses[t])
            hedge_update(state, losses[t])
        assert total_kernel == pytest.approx(total_ref, abs=1e-9)


class TestTrackingKernel:
    def test_deficit_bound_various_K(self):
        for K in (2, 4, 8):
            worst = rk.tracking_deficit_sim(777 + K, 100, 200, K)
            assert worst <= K - 1
