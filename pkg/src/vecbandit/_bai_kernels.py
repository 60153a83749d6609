"""Kernels for best-arm identification (numba-compiled when on).

The central routine minimizes the weighted divergence to an alternative
model whose answer differs from the current one.  Parametrization: pick
the arm k* that becomes at least as good as the answer, the dimension j
certifying the answer's relative loss, per-dimension floors y (with an
explicit floor-attaining arm b_i, so floors are always realized), and the
threshold x bounding k*'s relative losses.  For fixed assignment the cost
is jointly convex in (x, y) and separates across dimensions given x, so
each case reduces to a 1-D outer search with exact 1-D inner solves.
Enumerating (k*, j, b) costs Theta(d K^(d+1)) small solves.

Gaussian models use the unbounded mean space; Bernoulli means live in
[eps, 1-eps] and infinite divergences steer the solvers away from the
boundary.
"""

import math

import numpy as np

from ._accel import njit
from ._kernels import BERNOULLI, GAUSSIAN, draw_obs, kl
from ._regret_kernels import _hedge_update, _hedge_weights_into

_EPS_B = 1e-9


@njit(cache=True, nogil=True)
def best_answer_idx(means):
    """Lowest-index arm minimizing the l-infinity relative loss."""
    d, K = means.shape
    best_k = 0
    best_norm = math.inf
    for k in range(K):
        norm = -math.inf
        for i in range(d):
            lo = means[i, 0]
            for kk in range(1, K):
                if means[i, kk] < lo:
                    lo = means[i, kk]
            v = means[i, k] - lo
            if v > norm:
                norm = v
        if norm < best_norm:
            best_norm = norm
            best_k = k
    return best_k


@njit(cache=True, nogil=True)
def _arm_norms(means, out):
    d, K = means.shape
    for k in range(K):
        out[k] = -math.inf
    for i in range(d):
        lo = means[i, 0]
        for k in range(1, K):
            if means[i, k] < lo:
                lo = means[i, k]
        for k in range(K):
            v = means[i, k] - lo
            if v > out[k]:
                out[k] = v


@njit(cache=True, nogil=True)
def _kl_dq(family, p, q):
    """Derivative of kl(p, q) in its second argument."""
    if family == GAUSSIAN:
        return q - p
    if q <= 0.0 or q >= 1.0:
        return math.inf if q >= 1.0 else -math.inf
    return (q - p) / (q * (1.0 - q))


@njit(cache=True, nogil=True)
def _dim_deriv(family, nw, prow, bi, kstar, aidx, is_j, x, y, with_extras):
    """F_i'(y; x) for one dimension of a case."""
    K = prow.shape[0]
    deriv = nw[bi] * _kl_dq(family, prow[bi], y)
    for k in range(K):
        if k == bi:
            continue
        p = prow[k]
        if k == kstar:
            if p < y:
                deriv += nw[k] * _kl_dq(family, p, y)
            elif with_extras and p > y + x:
                deriv += nw[k] * _kl_dq(family, p, y + x)
        elif is_j and k == aidx:
            if with_extras and p < x + y:
                deriv += nw[k] * _kl_dq(family, p, x + y)
        else:
            if p < y:
                deriv += nw[k] * _kl_dq(family, p, y)
    return deriv


@njit(cache=True, nogil=True)
def _dim_value(family, nw, prow, bi, kstar, aidx, is_j, x, y, with_extras):
    """F_i(y; x) plus its d/dx contribution at this y."""
    K = prow.shape[0]
    val = nw[bi] * kl(family, prow[bi], y)
    dfdx = 0.0
    for k in range(K):
        if k == bi:
            continue
        p = prow[k]
        if k == kstar:
            if p < y:
                val += nw[k] * kl(family, p, y)
            elif with_extras and p > y + x:
                val += nw[k] * kl(family, p, y + x)
                dfdx += nw[k] * _kl_dq(family, p, y + x)
        elif is_j and k == aidx:
            if with_extras and p < x + y:
                val += nw[k] * kl(family, p, x + y)
                dfdx += nw[k] * _kl_dq(family, p, x + y)
        else:
            if p < y:
                val += nw[k] * kl(family, p, y)
    return val, dfdx


@njit(cache=True, nogil=True)
def _dim_solve(family, nw, prow, bi, kstar, aidx, is_j, x, lo, hi, with_extras):
    """Minimize the convex F_i(y; x) over [lo, hi]; returns (y*, F, dF/dx)."""
    if hi < lo:
        return lo, math.inf, math.inf
    f_lo = _dim_deriv(family, nw, prow, bi, kstar, aidx, is_j, x, lo, with_extras)
    if f_lo >= 0.0:
        v, dfdx = _dim_value(family, nw, prow, bi, kstar, aidx, is_j, x, lo, with_extras)
        return lo, v, dfdx

    if family == GAUSSIAN:
        # Piecewise-linear increasing derivative: scan breakpoints exactly.
        K = prow.shape[0]
        bps = np.empty(K + 3)
        nb = 0
        for k in range(K):
            if k == bi:
                continue
            p = prow[k]
            if k == kstar:
                bps[nb] = p
                nb += 1
                if with_extras:
                    bps[nb] = p - x
                    nb += 1
            elif is_j and k == aidx:
                if with_extras:
                    bps[nb] = p - x
                    nb += 1
            else:
                bps[nb] = p
                nb += 1
        # insertion sort
        for ii in range(1, nb):
            key = bps[ii]
            jj = ii - 1
            while jj >= 0 and bps[jj] > key:
                bps[jj + 1] = bps[jj]
                jj -= 1
            bps[jj + 1] = key

        prev = lo
        fprev = f_lo
        y = hi
        found = False
        for ii in range(nb):
            bp = bps[ii]
            if bp <= prev or bp >= hi:
                continue
            fb = _dim_deriv(family, nw, prow, bi, kstar, aidx, is_j, x, bp, with_extras)
            if fb >= 0.0:
                y = prev - fprev * (bp - prev) / (fb - fprev) if fb > fprev else bp
                found = True
                break
            prev = bp
            fprev = fb
        if not found:
            fb = _dim_deriv(family, nw, prow, bi, kstar, aidx, is_j, x, hi, with_extras)
            if fb <= 0.0:
                y = hi
            else:
                y = prev - fprev * (hi - prev) / (fb - fprev) if fb > fprev else hi
        v, dfdx = _dim_value(family, nw, prow, bi, kstar, aidx, is_j, x, y, with_extras)
        return y, v, dfdx

    # Bernoulli: monotone derivative, bisect.
    a_, b_ = lo, hi
    f_hi = _dim_deriv(family, nw, prow, bi, kstar, aidx, is_j, x, hi, with_extras)
    if f_hi <= 0.0:
        v, dfdx = _dim_value(family, nw, prow, bi, kstar, aidx, is_j, x, hi, with_extras)
        return hi, v, dfdx
    for _ in range(60):
        mid = 0.5 * (a_ + b_)
        fm = _dim_deriv(family, nw, prow, bi, kstar, aidx, is_j, x, mid, with_extras)
        if fm < 0.0:
            a_ = mid
        else:
            b_ = mid
    y = 0.5 * (a_ + b_)
    v, dfdx = _dim_value(family, nw, prow, bi, kstar, aidx, is_j, x, y, with_extras)
    return y, v, dfdx


@njit(cache=True, nogil=True)
def _case_solve(family, nw, means, answer, kstar, jdim, b, los, his, xmax, iters):
    """Minimize one (k*, j, b) case over (x, y); returns (value, x*)."""
    d = means.shape[0]

    if b[jdim] == answer:
        # Answer arm pinned at the certificate floor forces x = 0.
        total = 0.0
        for i in range(d):
            is_j = i == jdim
            _, v, _ = _dim_solve(
                family, nw, means[i], b[i], kstar, answer, is_j, 0.0, los[i], his[i], True
            )
            total += v
            if total == math.inf:
                break
        return total, 0.0

    # Convex in x: bisection on the envelope derivative.
    xlo = 0.0
    xhi = xmax
    glo = 0.0
    for i in range(d):
        is_j = i == jdim
        _, v, dfdx = _dim_solve(
            family, nw, means[i], b[i], kstar, answer, is_j, 0.0, los[i], his[i], True
        )
        glo += dfdx
        if v == math.inf:
            glo = math.inf
            break
    if glo >= 0.0:
        xstar = 0.0
    else:
        ghi = 0.0
        for i in range(d):
            is_j = i == jdim
            _, v, dfdx = _dim_solve(
                family, nw, means[i], b[i], kstar, answer, is_j, xmax, los[i], his[i], True
            )
            ghi += dfdx
            if v == math.inf:
                ghi = math.inf
                break
        if ghi <= 0.0:
            xstar = xmax
        else:
            for _ in range(iters):
                xm = 0.5 * (xlo + xhi)
                g = 0.0
                for i in range(d):
                    is_j = i == jdim
                    _, v, dfdx = _dim_solve(
                        family, nw, means[i], b[i], kstar, answer, is_j, xm, los[i], his[i], True
                    )
                    g += dfdx
                    if v == math.inf:
                        g = math.inf
                        break
                if g < 0.0:
                    xlo = xm
                else:
                    xhi = xm
            xstar = 0.5 * (xlo + xhi)

    total = 0.0
    for i in range(d):
        is_j = i == jdim
        _, v, _ = _dim_solve(
            family, nw, means[i], b[i], kstar, answer, is_j, xstar, los[i], his[i], True
        )
        total += v
        if total == math.inf:
            break
    return total, xstar


@njit(cache=True, nogil=True)
def alt_inf_full(family, nw, means, answer, iters, cutoff):
    """Smallest weighted divergence to a model whose best arm is not `answer`.

    Returns (value, lam, kstar) where lam attains the value (up to the
    closure of the alternative set) and kstar is the arm that displaces
    the answer.  `iters` controls the x-bisection depth.  If the running
    best value ever drops to `cutoff` or below, the enumeration stops and
    that value (an upper bound on the infimum) is returned; pass -inf to
    disable.
    """
    d, K = means.shape
    if K == 1:
        # No alternative answer exists.
        return math.inf, means.copy(), 0

    los = np.empty(d)
    his = np.empty(d)
    if family == GAUSSIAN:
        gmin = means[0, 0]
        gmax = means[0, 0]
        for i in range(d):
            lo = means[i, 0]
            hi = means[i, 0]
            for k in range(K):
                p = means[i, k]
                if p < lo:
                    lo = p
                if p > hi:
                    hi = p
            los[i] = lo - 1.0
            his[i] = hi + 1.0
            if lo < gmin:
                gmin = lo
            if hi > gmax:
                gmax = hi
        xmax = (gmax - gmin) + 1.0
    else:
        for i in range(d):
            los[i] = _EPS_B
            his[i] = 1.0 - _EPS_B
        xmax = 1.0

    norms = np.empty(K)
    _arm_norms(means, norms)
    rowmin_arm = np.empty(d, dtype=np.int64)
    for i in range(d):
        arg = 0
        lo = means[i, 0]
        for k in range(1, K):
            if means[i, k] < lo:
                lo = means[i, k]
                arg = k
        rowmin_arm[i] = arg
    # certificate dimension of the answer: its arg-max relative loss
    jnat = 0
    bestrel = -math.inf
    for i in range(d):
        lo = means[i, 0]
        for k in range(1, K):
            if means[i, k] < lo:
                lo = means[i, k]
        v = means[i, answer] - lo
        if v > bestrel:
            bestrel = v
            jnat = i
    # natural k*: best non-answer arm
    knat = 1 if answer == 0 else 0
    bn = math.inf
    for k in range(K):
        if k != answer and norms[k] < bn:
            bn = norms[k]
            knat = k

    b = np.empty(d, dtype=np.int64)

    # Seed with the natural case to make pruning effective.
    for i in range(d):
        b[i] = rowmin_arm[i]
    best_val, best_x = _case_solve(
        family, nw, means, answer, knat, jnat, b, los, his, xmax, iters
    )
    best_kstar = knat
    best_j = jnat
    best_b = b.copy()

    if best_val > cutoff:
        for kstar in range(K):
            if kstar == answer:
                continue
            # odometer over floor-attainer assignments
            for i in range(d):
                b[i] = 0
            stop_early = False
            while True:
                # cheap x-free lower bound (drops k*-lowering and the
                # certificate raise): prune whole (kstar, b) groups
                lb = 0.0
                for i in range(d):
                    _, v, _ = _dim_solve(
                        family, nw, means[i], b[i], kstar, answer, False, 0.0,
                        los[i], his[i], False,
                    )
                    lb += v
                    if lb >= best_val:
                        break
                if lb < best_val - 1e-15:
                    for jdim in range(d):
                        val, xs = _case_solve(
                            family, nw, means, answer, kstar, jdim, b, los, his, xmax, iters
                        )
                        if val < best_val - 1e-15:
                            best_val = val
                            best_x = xs
                            best_kstar = kstar
                            best_j = jdim
                            for i in range(d):
                                best_b[i] = b[i]
                    if best_val <= cutoff:
                        stop_early = True
                        break
                # increment odometer
                pos = 0
                while pos < d:
                    b[pos] += 1
                    if b[pos] < K:
                        break
                    b[pos] = 0
                    pos += 1
                if pos == d:
                    break
            if stop_early:
                break

    # Assemble the minimizing alternative for the winning case.
    lam = means.copy()
    xs = best_x
    for i in range(d):
        is_j = i == best_j
        y, _, _ = _dim_solve(
            family, nw, means[i], best_b[i], best_kstar, answer, is_j, xs,
            los[i], his[i], True,
        )
        for k in range(K):
            p = means[i, k]
            if k == best_b[i]:
                lam[i, k] = y
            elif k == best_kstar:
                if p < y:
                    lam[i, k] = y
                elif p > y + xs:
                    lam[i, k] = y + xs
            elif is_j and k == answer:
                if p < xs + y:
                    lam[i, k] = xs + y
            else:
                if p < y:
                    lam[i, k] = y

    value = 0.0
    for i in range(d):
        for k in range(K):
            value += nw[k] * kl(family, means[i, k], lam[i, k])
    return value, lam, best_kstar


@njit(cache=True, nogil=True)
def alt_inf_kernel(family, nw, means, answer):
    """Exact alternative minimization at full precision."""
    return alt_inf_full(family, nw, means, answer, 44, -math.inf)


@njit(cache=True, nogil=True)
def project_simplex(v):
    """Euclidean projection onto the probability simplex."""
    n = v.shape[0]
    u = np.sort(v)[::-1]
    css = 0.0
    rho = -1
    theta = 0.0
    for i in range(n):
        css += u[i]
        t = (css - 1.0) / (i + 1)
        if u[i] - t > 0.0:
            rho = i
            theta = t
    out = np.empty(n)
    for i in range(n):
        w = v[i] - theta
        out[i] = w if w > 0.0 else 0.0
    s = out.sum()
    for i in range(n):
        out[i] /= s
    return out


@njit(cache=True, nogil=True)
def oracle_ascent(family, means, answer, omega0, iters, step_c, bisect_iters):
    """Projected subgradient ascent on omega -> alt_inf(omega); returns the
    best iterate and its value."""
    d, K = means.shape
    omega = omega0.copy()
    best_val = -math.inf
    best_om = omega0.copy()
    g = np.empty(K)
    for it in range(1, iters + 1):
        val, lam, _ = alt_inf_full(family, omega, means, answer, bisect_iters, -math.inf)
        if val > best_val:
            best_val = val
            for k in range(K):
                best_om[k] = omega[k]
        gn = 0.0
        for k in range(K):
            s = 0.0
            for i in range(d):
                s += kl(family, means[i, k], lam[i, k])
            g[k] = s
            gn += s * s
        gn = math.sqrt(gn)
        if gn <= 1e-15:
            break
        step = step_c / math.sqrt(it)
        for k in range(K):
            g[k] = omega[k] + step * g[k] / gn
        omega = project_simplex(g.copy())
    return best_om, best_val


@njit(cache=True, nogil=True)
def _clamped_means(family, sums, counts, out):
    d, K = sums.shape
    for i in range(d):
        for k in range(K):
            m = sums[i, k] / counts[k]
            if family == BERNOULLI:
                if m < 1e-6:
                    m = 1e-6
                elif m > 1.0 - 1e-6:
                    m = 1.0 - 1e-6
            out[i, k] = m


@njit(cache=True, nogil=True)
def _clip01_means(sums, counts, out):
    d, K = sums.shape
    for i in range(d):
        for k in range(K):
            m = sums[i, k] / counts[k]
            if m < 0.0:
                m = 0.0
            elif m > 1.0:
                m = 1.0
            out[i, k] = m


@njit(cache=True, nogil=True)
def _answer_unique(means, tol):
    d, K = means.shape
    best = math.inf
    second = math.inf
    for k in range(K):
        norm = -math.inf
        for i in range(d):
            lo = means[i, 0]
            for kk in range(1, K):
                if means[i, kk] < lo:
                    lo = means[i, kk]
            v = means[i, k] - lo
            if v > norm:
                norm = v
        if norm < best:
            second = best
            best = norm
        elif norm < second:
            second = norm
    return second - best > tol


@njit(cache=True, nogil=True)
def threshold_beta_scalar(t, delta):
    return math.log((1.0 + math.log(t)) / delta)


@njit(cache=True, nogil=True)
def _glr_two_stage(family, nwf, mh, ans, beta):
    """Stopping statistic: a quick coarse pass bails out when its upper
    bound already sits at or below beta; otherwise the precise value."""
    quick, _, _ = alt_inf_full(family, nwf, mh, ans, 12, beta)
    if quick <= beta:
        return quick
    precise, _, _ = alt_inf_full(family, nwf, mh, ans, 44, -math.inf)
    return precise


@njit(cache=True, nogil=True)
def tas_run_kernel(
    family, means, seed, delta, max_rounds, cadence, iters_init, iters_warm,
    step_c, record_trace,
):
    """Track-and-Stop: D-tracking sampler, Chernoff stopping, plug-in oracle.

    Returns (tau, answer, counts, truncated, glr_trace, beta_trace, n_trace).
    """
    d, K = means.shape
    counts = np.zeros(K, dtype=np.int64)
    sums = np.zeros((d, K))
    c = 0
    for k in range(K):
        for i in range(d):
            o = draw_obs(seed, c, family, means[i, k])
            c += 1
            sums[i, k] += o
        counts[k] += 1
    t = K

    cap = max_rounds if record_trace else 1
    glr_trace = np.empty(cap)
    beta_trace = np.empty(cap)
    n_trace = 0

    mh = np.empty((d, K))
    mh01 = np.empty((d, K))
    omega_hat = np.full(K, 1.0 / K)
    have_oracle = False
    nwf = np.empty(K)

    while True:
        _clamped_means(family, sums, counts, mh)
        _clip01_means(sums, counts, mh01)
        ans = best_answer_idx(mh01)
        for k in range(K):
            nwf[k] = counts[k]
        beta = threshold_beta_scalar(t, delta)
        glr = _glr_two_stage(family, nwf, mh, ans, beta)
        if record_trace and n_trace < cap:
            glr_trace[n_trace] = glr
            beta_trace[n_trace] = beta
            n_trace += 1
        if glr > beta:
            return t, ans, counts, False, glr_trace, beta_trace, n_trace
        if t >= max_rounds:
            return t, ans, counts, True, glr_trace, beta_trace, n_trace

        if (not have_oracle) or t <= 10 * K or t % cadence == 0:
            if _answer_unique(mh01, 1e-12):
                iters = iters_warm if have_oracle else iters_init
                omega_hat, _ = oracle_ascent(
                    family, mh, ans, omega_hat, iters, step_c, 14
                )
                have_oracle = True

        cmin = counts[0]
        arm = 0
        for k in range(1, K):
            if counts[k] < cmin:
                cmin = counts[k]
                arm = k
        if cmin < math.sqrt(t) - K / 2.0:
            pass  # forced exploration: play the least-pulled arm
        else:
            arm = 0
            best = -math.inf
            for k in range(K):
                v = omega_hat[k] - counts[k] / t
                if v > best:
                    best = v
                    arm = k
        for i in range(d):
            o = draw_obs(seed, c, family, means[i, arm])
            c += 1
            sums[i, arm] += o
        counts[arm] += 1
        t += 1


@njit(cache=True, nogil=True)
def _conf_interval(family, mh, counts, k, f_int):
    """Scalar confidence interval for arm k: all xi with
    sum_i N_k d(mh[i,k], xi) <= f_int, intersected with [0, 1].
    Returns (lo, hi, nonempty)."""
    d = mh.shape[0]
    nk = counts[k]
    if family == GAUSSIAN:
        mbar = 0.0
        for i in range(d):
            mbar += mh[i, k]
        mbar /= d
        ss = 0.0
        for i in range(d):
            dv = mh[i, k] - mbar
            ss += dv * dv
        rad2 = (2.0 * f_int / nk - ss) / d
        if rad2 < 0.0:
            return 0.0, 0.0, False
        r = math.sqrt(rad2)
        lo = mbar - r
        hi = mbar + r
        if lo < 0.0:
            lo = 0.0
        if hi > 1.0:
            hi = 1.0
        if lo > hi:
            return 0.0, 0.0, False
        return lo, hi, True
    # Bernoulli: convex target; expand by bisection from the minimizer.
    center = 0.0
    for i in range(d):
        center += mh[i, k]
    center /= d
    if center < _EPS_B:
        center = _EPS_B
    elif center > 1.0 - _EPS_B:
        center = 1.0 - _EPS_B
    g0 = 0.0
    for i in range(d):
        g0 += nk * kl(family, mh[i, k], center)
    if g0 > f_int:
        return 0.0, 0.0, False

    lo_a, lo_b = _EPS_B, center
    for _ in range(50):
        mid = 0.5 * (lo_a + lo_b)
        g = 0.0
        for i in range(d):
            g += nk * kl(family, mh[i, k], mid)
        if g > f_int:
            lo_a = mid
        else:
            lo_b = mid
    hi_a, hi_b = center, 1.0 - _EPS_B
    for _ in range(50):
        mid = 0.5 * (hi_a + hi_b)
        g = 0.0
        for i in range(d):
            g += nk * kl(family, mh[i, k], mid)
        if g > f_int:
            hi_b = mid
        else:
            hi_a = mid
    lo = lo_b
    hi = hi_a
    if lo < 0.0:
        lo = 0.0
    if hi > 1.0:
        hi = 1.0
    return lo, hi, True


@njit(cache=True, nogil=True)
def game_run_kernel(family, means, seed, delta, max_rounds, forced_n, record_trace):
    """Gamified sampler: one AdaHedge learner per candidate answer plays
    against the best-response alternative; optimistic gains are fed back.

    Returns (tau, answer, counts, truncated, glr_trace, beta_trace, n_trace).
    """
    d, K = means.shape
    counts = np.zeros(K, dtype=np.int64)
    sums = np.zeros((d, K))
    c = 0
    for p in range(K * forced_n):
        arm = p % K
        for i in range(d):
            o = draw_obs(seed, c, family, means[i, arm])
            c += 1
            sums[i, arm] += o
        counts[arm] += 1
    t = K * forced_n

    cap = max_rounds if record_trace else 1
    glr_trace = np.empty(cap)
    beta_trace = np.empty(cap)
    n_trace = 0

    Ls = np.zeros((K, K))  # one learner state per candidate answer
    gaps = np.zeros(K)
    W = np.zeros(K)
    w = np.empty(K)
    U = np.empty(K)
    negU = np.empty(K)
    mh = np.empty((d, K))
    mh01 = np.empty((d, K))
    nwf = np.empty(K)

    while True:
        _clamped_means(family, sums, counts, mh)
        _clip01_means(sums, counts, mh01)
        ans = best_answer_idx(mh01)
        for k in range(K):
            nwf[k] = counts[k]
        beta = threshold_beta_scalar(t, delta)
        glr = _glr_two_stage(family, nwf, mh, ans, beta)
        if record_trace and n_trace < cap:
            glr_trace[n_trace] = glr
            beta_trace[n_trace] = beta
            n_trace += 1
        if glr > beta:
            return t, ans, counts, False, glr_trace, beta_trace, n_trace
        if t >= max_rounds:
            return t, ans, counts, True, glr_trace, beta_trace, n_trace

        _hedge_weights_into(Ls[ans], gaps[ans], w)
        for k in range(K):
            W[k] += w[k]

        _, lam, _ = alt_inf_full(family, w, mh, ans, 10, -math.inf)

        f_ratio = math.log(t)
        f_int = math.log(t + 1.0)
        for k in range(K):
            u = f_ratio / counts[k]
            lo, hi, ok = _conf_interval(family, mh, counts, k, f_int)
            if ok:
                s_lo = 0.0
                s_hi = 0.0
                for i in range(d):
                    s_lo += kl(family, lo, lam[i, k])
                    s_hi += kl(family, hi, lam[i, k])
                if s_lo > u:
                    u = s_lo
                if s_hi > u:
                    u = s_hi
            U[k] = u
            negU[k] = -u
        gaps[ans] = _hedge_update(Ls[ans], gaps[ans], w, negU)

        arm = 0
        best = math.inf
        for k in range(K):
            v = counts[k] - W[k]
            if v < best:
                best = v
                arm = k
        for i in range(d):
            o = draw_obs(seed, c, family, means[i, arm])
            c += 1
            sums[i, arm] += o
        counts[arm] += 1
        t += 1
