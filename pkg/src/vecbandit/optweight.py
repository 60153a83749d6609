"""Exact minimizer of Psi(w) = max_i w . rel[i] over the K-simplex.

The optimum is supported on at most d arms, so the global solve enumerates
all size-d arm subsets and solves each small min-max exactly as a linear
program over vertex bases.  A brute-force lattice search over the simplex
serves as an independent oracle for testing.
"""

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .model import RelativeLossMatrix, SimplexWeights, weight_relative_loss


@dataclass(frozen=True)
class OptWeightResult:
    weights: SimplexWeights
    value: float
    support: tuple


def inner_minmax(sub: np.ndarray):
    """Solve min over alpha in the simplex of max_i (row_i . alpha) exactly.

    sub is a d x m matrix (m arms of a combinatorial arm).  This is the LP
    {min tau : sub . alpha <= tau 1, alpha in simplex}; we enumerate square
    active sets (rows S, support P with |S| = |P|), solve each linear
    system, and keep the best feasible candidate.  Returns (alpha, value).
    """
    sub = np.asarray(sub, dtype=np.float64)
    if sub.ndim != 2:
        raise ValueError("sub must be a 2-D matrix")
    if not np.all(np.isfinite(sub)):
        raise ValueError("sub must be finite")
    d, m = sub.shape
    if m == 1:
        return np.array([1.0]), float(sub[:, 0].max())

    best_alpha = None
    best_value = np.inf
    rows = range(d)
    cols = range(m)
    for r in range(1, min(d, m) + 1):
        for S in combinations(rows, r):
            block = sub[np.ix_(S, cols)]
            for P in combinations(cols, r):
                # Unknowns: alpha on P and tau.  Equations: active rows plus
                # the simplex constraint.
                A = np.zeros((r + 1, r + 1))
                b = np.zeros(r + 1)
                A[:r, :r] = block[:, P]
                A[:r, r] = -1.0
                A[r, :r] = 1.0
                b[r] = 1.0
                try:
                    x = np.linalg.solve(A, b)
                except np.linalg.LinAlgError:
                    continue
                alpha_p = x[:r]
                if alpha_p.min() < -1e-9:
                    continue
                alpha = np.zeros(m)
                alpha[list(P)] = np.clip(alpha_p, 0.0, None)
                total = alpha.sum()
                if total <= 0.0:
                    continue
                alpha /= total
                value = float((sub @ alpha).max())
                if value < best_value - 1e-12:
                    best_value = value
                    best_alpha = alpha
    return best_alpha, best_value


def pair_loss_d2(relk, rell):
    """Two-dimensional closed form for the min-max value of an arm pair.

    relk and rell are the 2-vector relative losses of the two arms.  The
    four cases: either arm dominating reduces to that single arm; both arms
    on the same side of the diagonal reduces to the better single arm;
    otherwise the lines cross and the crossing value applies.
    Returns (value, alpha).
    """
    a1, a2 = float(relk[0]), float(relk[1])
    b1, b2 = float(rell[0]), float(rell[1])
    if min(a1, a2, b1, b2) < -1e-12:
        raise ValueError("relative losses must be nonnegative")
    if a1 <= b1 and a2 <= b2:
        return max(a1, a2), np.array([1.0, 0.0])
    if b1 <= a1 and b2 <= a2:
        return max(b1, b2), np.array([0.0, 1.0])
    if (a1 - a2) * (b1 - b2) > 0.0:
        vk, vl = max(a1, a2), max(b1, b2)
        if vk <= vl:
            return vk, np.array([1.0, 0.0])
        return vl, np.array([0.0, 1.0])
    denom = a1 + b2 - b1 - a2
    if abs(denom) < 1e-12:
        # Degenerate (effectively identical arms): fall back to the better
        # single arm.
        vk, vl = max(a1, a2), max(b1, b2)
        if vk <= vl:
            return vk, np.array([1.0, 0.0])
        return vl, np.array([0.0, 1.0])
    value = (a1 * b2 - b1 * a2) / denom
    alpha1 = min(max((b2 - b1) / denom, 0.0), 1.0)
    return value, np.array([alpha1, 1.0 - alpha1])


def solve_minmax_simplex(rel: RelativeLossMatrix) -> OptWeightResult:
    """Global exact solve by enumerating combinatorial arms.

    Duplicate columns are removed first (keeping the lowest original index);
    among subsets tying at the optimum the lexicographically smallest wins.
    """
    values = rel.values
    d, K = values.shape

    # De-duplicate identical columns, remembering original indices.
    seen = {}
    unique_idx = []
    for k in range(K):
        key = values[:, k].tobytes()
        if key not in seen:
            seen[key] = k
            unique_idx.append(k)

    size = min(d, len(unique_idx))
    best = None
    for combo in combinations(unique_idx, size):
        alpha, value = inner_minmax(values[:, combo])
        if best is None or value < best[1] - 1e-12:
            best = (combo, value, alpha)

    combo, _, alpha = best
    w = np.zeros(K)
    w[list(combo)] = np.clip(alpha, 0.0, None)
    w /= w.sum()
    weights = SimplexWeights(w)
    value = weight_relative_loss(weights, rel)
    supp = tuple(int(i) for i in support(weights, 1e-9))
    return OptWeightResult(weights=weights, value=value, support=supp)


def support(w, tol: float):
    """Indices with weight strictly above tol, sorted ascending."""
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    wv = w.w if isinstance(w, SimplexWeights) else np.asarray(w, dtype=np.float64)
    return np.flatnonzero(wv > tol)


def grid_oracle(rel: RelativeLossMatrix, step: float):
    """Exhaustive minimum of Psi over the simplex lattice with given spacing.

    Independent brute-force oracle: enumerates every lattice point
    (n_1/m, ..., n_K/m) with sum n_k = m = round(1/step).  The result is
    within d*K*step of the true optimum.  Only for K <= 5.
    """
    values = rel.values
    d, K = values.shape
    if K > 5:
        raise ValueError("grid oracle supports K <= 5 only")
    if step < 1.0 / 400.0 - 1e-12:
        raise ValueError("step must be at least 1/400")
    m = int(round(1.0 / step))

    if K == 1:
        return np.array([1.0]), float(values[:, 0].max())

    best_value = np.inf
    best_w = None

    def scan_tail(prefix_counts, rem):
        # Vectorize the last two coordinates: n_{K-1} = 0..rem, n_K = rem - n.
        nonlocal best_value, best_w
        n = np.arange(rem + 1)
        W = np.empty((rem + 1, K))
        for j, c in enumerate(prefix_counts):
            W[:, j] = c
        W[:, K - 2] = n
        W[:, K - 1] = rem - n
        W /= m
        vals = np.max(values @ W.T, axis=0)
        i = int(np.argmin(vals))
        if vals[i] < best_value - 1e-15:
            best_value = float(vals[i])
            best_w = W[i].copy()

    def recurse(prefix, rem, depth):
        if depth == K - 2:
            scan_tail(prefix, rem)
            return
        for c in range(rem + 1):
            recurse(prefix + [c], rem - c, depth + 1)

    recurse([], m, 0)
    return best_w, best_value
