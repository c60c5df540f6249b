"""Numba implementations of the hot kernels.

Only imported when the numba backend is selected; see kernels.py for the
shared contracts.  All functions mirror _kernels_numpy item for item.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _log_add(a, b):
    if a == -np.inf:
        return b
    if b == -np.inf:
        return a
    if a == np.inf or b == np.inf:
        return np.inf
    m = a if a >= b else b
    return m + np.log1p(np.exp(-np.abs(a - b)))


@njit(cache=True)
def _rterm(lp, lq, alpha):
    # log of p^alpha * q^(1-alpha); zero p wins over zero q
    if lp == -np.inf:
        return -np.inf
    if lq == -np.inf:
        return np.inf
    return alpha * lp + (1.0 - alpha) * lq


@njit(cache=True)
def _scaled(s, lw):
    # s * lw with the 0 * (-inf) = 0 convention for zero exponents
    if s == 0:
        return 0.0
    return s * lw


@njit(cache=True)
def hamming_renyi_logsum(lp0, lp1, lq0, lq1, nbits, lc, l1c, alpha, lbinom):
    """log sum_j C(n,j) X_j^alpha Y_j^(1-alpha) for two-corner mixtures.

    X_j = p0 * c^j (1-c)^(n-j) + p1 * c^(n-j) (1-c)^j evaluated in log
    domain from lp0 = log p0, lp1 = log p1; Y_j likewise from lq0, lq1.
    Requires 0 < c < 1 (lc and l1c finite).
    """
    acc = -np.inf
    for j in range(nbits + 1):
        wa = j * lc + (nbits - j) * l1c
        wb = (nbits - j) * lc + j * l1c
        lX = _log_add(lp0 + wa, lp1 + wb)
        lY = _log_add(lq0 + wa, lq1 + wb)
        acc = _log_add(acc, lbinom[j] + _rterm(lX, lY, alpha))
    return acc


@njit(cache=True)
def d1_grid_scan(lg0, lg1, k, lc, l1c, alpha, cap, lbinom):
    """Best feasible objective over all ordered grid pairs for d = 1.

    Grid point i is the corner distribution (x_i, 1-x_i) given as logs
    lg0[i] = log x_i, lg1[i] = log(1-x_i).  A pair (i, j) is feasible when
    both constraint logsums are <= cap.  Returns (best_logsum, i, j) with
    the first maximizer in scan order; best is -inf if nothing is feasible.
    """
    n = lg0.size
    best = -np.inf
    bi = -1
    bj = -1
    for i in range(n):
        for j in range(n):
            g1 = _log_add(_rterm(lg0[i], lg0[j], alpha),
                          _rterm(lg1[i], lg1[j], alpha))
            if not g1 <= cap:
                continue
            g2 = _log_add(_rterm(lg0[j], lg0[i], alpha),
                          _rterm(lg1[j], lg1[i], alpha))
            if not g2 <= cap:
                continue
            val = hamming_renyi_logsum(lg0[i], lg1[i], lg0[j], lg1[j],
                                       k, lc, l1c, alpha, lbinom)
            if val > best:
                best = val
                bi = i
                bj = j
    return best, bi, bj


@njit(cache=True)
def full_renyi_logsum(lX, lY, alpha):
    """log sum_o X_o^alpha Y_o^(1-alpha) over a full outcome vector pair."""
    m = lX.size
    mx = -np.inf
    for o in range(m):
        t = _rterm(lX[o], lY[o], alpha)
        if t > mx:
            mx = t
    if mx == np.inf or mx == -np.inf:
        return mx
    acc = 0.0
    for o in range(m):
        acc += np.exp(_rterm(lX[o], lY[o], alpha) - mx)
    return mx + np.log(acc)


@njit(cache=True)
def corner_pushforward_full(lmass, pop, d, k, lc, l1c):
    """Log masses of k Bernoulli samples from a corner mixture, full layout.

    lmass has 2^d entries (log corner masses), pop is the popcount table
    for d-bit integers.  Outcome index packs k samples little-endian,
    d bits per sample.  c = 0 and c = 1 edges are admitted (infinite logs).
    """
    n = lmass.size
    dk = d * k
    m = 1 << dk
    mask = (1 << d) - 1
    out = np.empty(m, dtype=np.float64)
    for o in range(m):
        acc = -np.inf
        for i in range(n):
            s = 0
            oo = o
            for _ in range(k):
                s += pop[(oo & mask) ^ i]
                oo >>= d
            acc = _log_add(acc, lmass[i] + _scaled(s, lc) + _scaled(dk - s, l1c))
        out[o] = acc
    return out


@njit(cache=True)
def point_pushforward_full(lx, l1x, d, k):
    """Log masses of k Bernoulli samples from one product point, full layout.

    lx[i] = log x_i and l1x[i] = log(1-x_i) per coordinate; coordinates at
    exactly 0 or 1 are admitted.
    """
    dk = d * k
    m = 1 << dk
    out = np.empty(m, dtype=np.float64)
    for o in range(m):
        acc = 0.0
        for b in range(dk):
            if (o >> b) & 1:
                acc += lx[b % d]
            else:
                acc += l1x[b % d]
        out[o] = acc
    return out
