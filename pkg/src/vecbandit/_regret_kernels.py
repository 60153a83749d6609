"""Fused run loops for the regret algorithms (numba-compiled when on).

These are the hot inner loops: one call simulates an entire run.  The
AdaHedge, tracking, and LCB formulas mirror the public per-step operations
in :mod:`vecbandit.learner` and :mod:`vecbandit.regret`; a parity test
checks the fused loop against the composed reference loop.
"""

import math

import numpy as np

from ._accel import njit
from ._kernels import draw_obs, uniform_pair


@njit(cache=True, nogil=True)
def _hedge_weights_into(L, gap, w):
    """AdaHedge weights for cumulative losses L and gap sum, written into w."""
    K = L.shape[0]
    lmin = L[0]
    for k in range(1, K):
        if L[k] < lmin:
            lmin = L[k]
    if gap <= 0.0:
        cnt = 0
        for k in range(K):
            if L[k] <= lmin + 1e-12:
                cnt += 1
        for k in range(K):
            w[k] = 1.0 / cnt if L[k] <= lmin + 1e-12 else 0.0
    else:
        eta = math.log(K) / gap
        s = 0.0
        for k in range(K):
            w[k] = math.exp(-eta * (L[k] - lmin))
            s += w[k]
        for k in range(K):
            w[k] /= s


@njit(cache=True, nogil=True)
def _hedge_update(L, gap, w, loss):
    """One AdaHedge update; returns the new gap sum."""
    K = L.shape[0]
    dot = 0.0
    for k in range(K):
        dot += w[k] * loss[k]
    if K == 1:
        mix = dot
    elif gap <= 0.0:
        mix = math.inf
        for k in range(K):
            if w[k] > 0.0 and loss[k] < mix:
                mix = loss[k]
    else:
        eta = math.log(K) / gap
        lo = loss[0]
        for k in range(1, K):
            if loss[k] < lo:
                lo = loss[k]
        s = 0.0
        for k in range(K):
            s += w[k] * math.exp(-eta * (loss[k] - lo))
        mix = lo - math.log(s) / eta
    delta = dot - mix
    if delta < 0.0:
        delta = 0.0
    for k in range(K):
        L[k] += loss[k]
    return gap + delta


@njit(cache=True, nogil=True)
def cp_phase2(means, family, seed, counter0, alpha_emb, T2):
    """Deterministic tracking of a fixed weight target for T2 rounds."""
    d, K = means.shape
    pulls = np.empty(T2, dtype=np.int64)
    obs = np.empty((T2, d))
    counts = np.zeros(K, dtype=np.int64)
    c = counter0
    for r in range(T2):
        arm = 0
        best = counts[0] - (r + 1) * alpha_emb[0]
        for k in range(1, K):
            v = counts[k] - (r + 1) * alpha_emb[k]
            if v < best:
                best = v
                arm = k
        for i in range(d):
            obs[r, i] = draw_obs(seed, c, family, means[i, arm])
            c += 1
        counts[arm] += 1
        pulls[r] = arm
    return pulls, obs


@njit(cache=True, nogil=True)
def cg_run_loop(means, family, seed, counter0, T, N):
    """Full CG run: forced exploration then learner/tracking/LCB rounds."""
    d, K = means.shape
    KN = K * N
    T2 = T - KN
    pulls = np.empty(T, dtype=np.int64)
    losses = np.empty((T, d))
    sums = np.zeros((d, K))
    counts_tot = np.zeros(K, dtype=np.int64)
    c = counter0

    for p in range(KN):
        arm = p % K
        for i in range(d):
            o = draw_obs(seed, c, family, means[i, arm])
            c += 1
            losses[p, i] = o
            sums[i, arm] += o
        counts_tot[arm] += 1
        pulls[p] = arm

    omegas = np.empty((T2, K))
    x_dims = np.empty(T2, dtype=np.int64)
    fed_log = np.empty((T2, K))

    L = np.zeros(K)
    gap = 0.0
    counts2 = np.zeros(K, dtype=np.int64)
    W = np.zeros(K)
    w = np.empty(K)
    lcb = np.empty((d, K))
    lnT = math.log(T)
    width2 = math.sqrt(2.0 * lnT / N)

    for r in range(T2):
        t = KN + r
        _hedge_weights_into(L, gap, w)
        for k in range(K):
            omegas[r, k] = w[k]
            W[k] += w[k]

        arm = 0
        best = counts2[0] - W[0]
        for k in range(1, K):
            v = counts2[k] - W[k]
            if v < best:
                best = v
                arm = k

        for i in range(d):
            o = draw_obs(seed, c, family, means[i, arm])
            c += 1
            losses[t, i] = o
            sums[i, arm] += o
        counts_tot[arm] += 1
        counts2[arm] += 1
        pulls[t] = arm

        for i in range(d):
            mstar = sums[i, 0] / counts_tot[0]
            for k in range(1, K):
                m = sums[i, k] / counts_tot[k]
                if m < mstar:
                    mstar = m
            for k in range(K):
                m = sums[i, k] / counts_tot[k]
                n2 = counts2[k]
                if n2 < 1:
                    n2 = 1
                lcb[i, k] = (m - mstar) - math.sqrt(2.0 * lnT / n2) - width2

        xdim = 0
        bestscore = -math.inf
        for i in range(d):
            sdot = 0.0
            for k in range(K):
                sdot += lcb[i, k] * w[k]
            if sdot > bestscore:
                bestscore = sdot
                xdim = i
        x_dims[r] = xdim
        for k in range(K):
            fed_log[r, k] = lcb[xdim, k]
        gap = _hedge_update(L, gap, w, lcb[xdim])

    return pulls, losses, omegas, x_dims, fed_log


@njit(cache=True, nogil=True)
def cg_adaptive_loop(means, family, seed, counter0, T):
    """Horizon-free CG: forced exploration keeps every arm near t^(2/3)/K."""
    d, K = means.shape
    pulls = np.empty(T, dtype=np.int64)
    losses = np.empty((T, d))
    sums = np.zeros((d, K))
    counts_tot = np.zeros(K, dtype=np.int64)
    counts_track = np.zeros(K, dtype=np.int64)
    L = np.zeros(K)
    gap = 0.0
    W = np.zeros(K)
    w = np.empty(K)
    lcb = np.empty((d, K))
    c = counter0
    n_forced = 0

    for t0 in range(T):
        t = t0 + 1
        need = int(math.ceil(t ** (2.0 / 3.0) / K))
        cmin = counts_tot[0]
        for k in range(1, K):
            if counts_tot[k] < cmin:
                cmin = counts_tot[k]

        if cmin < need:
            n_forced += 1
            arm = 0
            least = counts_tot[0]
            for k in range(1, K):
                if counts_tot[k] < least:
                    least = counts_tot[k]
                    arm = k
            for i in range(d):
                o = draw_obs(seed, c, family, means[i, arm])
                c += 1
                losses[t0, i] = o
                sums[i, arm] += o
            counts_tot[arm] += 1
            pulls[t0] = arm
            continue

        _hedge_weights_into(L, gap, w)
        for k in range(K):
            W[k] += w[k]
        arm = 0
        best = counts_track[0] - W[0]
        for k in range(1, K):
            v = counts_track[k] - W[k]
            if v < best:
                best = v
                arm = k
        for i in range(d):
            o = draw_obs(seed, c, family, means[i, arm])
            c += 1
            losses[t0, i] = o
            sums[i, arm] += o
        counts_tot[arm] += 1
        counts_track[arm] += 1
        pulls[t0] = arm

        lnt = math.log(t)
        cmin = counts_tot[0]
        for k in range(1, K):
            if counts_tot[k] < cmin:
                cmin = counts_tot[k]
        width2 = math.sqrt(2.0 * lnt / cmin)
        for i in range(d):
            mstar = sums[i, 0] / counts_tot[0]
            for k in range(1, K):
                m = sums[i, k] / counts_tot[k]
                if m < mstar:
                    mstar = m
            for k in range(K):
                m = sums[i, k] / counts_tot[k]
                lcb[i, k] = (m - mstar) - math.sqrt(2.0 * lnt / counts_tot[k]) - width2

        xdim = 0
        bestscore = -math.inf
        for i in range(d):
            sdot = 0.0
            for k in range(K):
                sdot += lcb[i, k] * w[k]
            if sdot > bestscore:
                bestscore = sdot
                xdim = i
        gap = _hedge_update(L, gap, w, lcb[xdim])

    return pulls, losses, n_forced


@njit(cache=True, nogil=True)
def hedge_stream(losses):
    """Feed a fixed loss matrix (T x n) through AdaHedge; returns the
    learner's cumulative dot loss."""
    T, n = losses.shape
    L = np.zeros(n)
    gap = 0.0
    w = np.empty(n)
    total = 0.0
    for t in range(T):
        _hedge_weights_into(L, gap, w)
        for k in range(n):
            total += w[k] * losses[t, k]
        gap = _hedge_update(L, gap, w, losses[t])
    return total


@njit(cache=True, nogil=True)
def tracking_deficit_sim(seed, n_streams, T, K):
    """Max over streams/rounds/arms of W_t - N_t under cumulative tracking,
    driven by random (Dirichlet(1)) weight streams."""
    worst = -math.inf
    c = 0
    omega = np.empty(K)
    for s in range(n_streams):
        W = np.zeros(K)
        counts = np.zeros(K, dtype=np.int64)
        for t in range(T):
            tot = 0.0
            for k in range(K):
                u1, _ = uniform_pair(seed, c)
                c += 1
                omega[k] = -math.log(1.0 - u1)
                tot += omega[k]
            arm = 0
            best = math.inf
            for k in range(K):
                W[k] += omega[k] / tot
                v = counts[k] - W[k]
                if v < best:
                    best = v
                    arm = k
            counts[arm] += 1
            for k in range(K):
                dev = W[k] - counts[k]
                if dev > worst:
                    worst = dev
    return worst
